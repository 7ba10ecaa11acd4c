"""Small reference meshes with vertex positions."""
import numpy as np

from .mesh import MeshConnectivity


def triangle(a=(0.0, 0.0, 0.0), b=(1.0, 0.0, 0.0), c=(0.5, np.sqrt(3) / 2, 0.0)):
    x = np.array([a, b, c], dtype=np.float64)
    return MeshConnectivity.from_faces([[0, 1, 2]], 3), x


def square():
    """Unit square split along the diagonal (0, 2)."""
    x = np.array([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]], dtype=np.float64)
    return MeshConnectivity.from_faces([[0, 1, 2], [0, 2, 3]], 4), x


def tetrahedron():
    """Regular tetrahedron with unit edges, outward orientation."""
    x = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=np.float64)
    x /= 2 * np.sqrt(2)
    faces = [[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]]
    return MeshConnectivity.from_faces(faces, 4), x


def icosahedron():
    phi = (1 + np.sqrt(5)) / 2
    x = np.array(
        [
            [-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
            [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
            [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1],
        ],
        dtype=np.float64,
    ) / 2.0
    faces = [
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ]
    return MeshConnectivity.from_faces(faces, 12), x


def torus(nu=4, nv=4, major=2.0, minor=1.0):
    """``nu x nv`` grid on the torus, each quad split along one diagonal.

    Positions embed it as a ring torus; the combinatorics are those of the
    flat (square) torus, whose grid metric is :func:`flat_torus_metric`.
    """
    if nu < 3 or nv < 3:
        raise ValueError("torus grid needs at least 3x3 cells")
    idx = np.arange(nu * nv).reshape(nu, nv)
    faces = []
    for i in range(nu):
        for j in range(nv):
            a = idx[i, j]
            b = idx[(i + 1) % nu, j]
            c = idx[(i + 1) % nu, (j + 1) % nv]
            d = idx[i, (j + 1) % nv]
            faces.append([a, b, c])
            faces.append([a, c, d])
    s, t = np.meshgrid(2 * np.pi * np.arange(nu) / nu, 2 * np.pi * np.arange(nv) / nv, indexing="ij")
    x = np.stack(
        [(major + minor * np.cos(t)) * np.cos(s), (major + minor * np.cos(t)) * np.sin(s), minor * np.sin(t)],
        axis=-1,
    ).reshape(-1, 3)
    return MeshConnectivity.from_faces(faces, nu * nv), x


def flat_torus_metric(mesh, nv):
    """Unit-square grid lengths (1 for axis edges, sqrt 2 for diagonals)."""
    i, j = mesh.edges[:, 0], mesh.edges[:, 1]
    di = np.abs(i // nv - j // nv)
    dj = np.abs(i % nv - j % nv)
    diagonal = (di != 0) & (dj != 0)
    return np.where(diagonal, np.sqrt(2.0), 1.0)


REFERENCE_MESHES = {
    "triangle": triangle,
    "square": square,
    "tetrahedron": tetrahedron,
    "icosahedron": icosahedron,
    "torus": torus,
}
