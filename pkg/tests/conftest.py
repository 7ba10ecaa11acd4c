import numpy as np
import pytest

from cotmetric import kernels, shapes
from cotmetric.mesh import induced_metric
from cotmetric.metric import face_margins

MESH_NAMES = ["triangle", "square", "tetrahedron", "icosahedron", "torus"]
OPEN_MESHES = ["triangle", "square"]


def reference_mesh(name):
    return shapes.REFERENCE_MESHES[name]()


def random_metric(mesh, base, rng, spread=0.1, min_margin=1e-2):
    """Perturb ``base`` lengths by up to +-spread, resampling until admissible."""
    for _ in range(1000):
        d = base * rng.uniform(1 - spread, 1 + spread, len(base))
        if face_margins(0.5 * d**2, mesh).min() > min_margin:
            return d
    raise RuntimeError("could not sample an admissible metric")


def random_triangle_u(rng, min_margin=1e-2):
    """u-triple of a random planar triangle with a non-tiny margin."""
    while True:
        p = rng.normal(size=(3, 2))
        d = np.linalg.norm(p[[1, 2, 0]] - p[[2, 0, 1]], axis=1)
        if (d.sum() - 2 * d).min() / d.sum() > min_margin:
            return 0.5 * d**2


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=MESH_NAMES)
def any_mesh(request):
    mesh, x = reference_mesh(request.param)
    return request.param, mesh, induced_metric(mesh, x).lengths


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    previous = kernels.get_backend()
    kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(previous)
