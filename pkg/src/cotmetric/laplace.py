"""Forward operator: angles, cotangent weights, Laplace matrix and heat kernel."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.io
import scipy.linalg
import scipy.sparse as sp

from . import kernels
from .metric import (
    InadmissibleMetricError,
    PolyhedralMetric,
    as_u_array,
    first_degenerate_face,
    to_u,
    write_edge_values,
)

# faces with relative triangle-inequality margin at or below this are rejected
DEGENERACY_SLACK = 1e-10


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Ascending eigenvalues and orthonormal eigenvectors (as columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self):
        return len(self.eigenvalues)


def _face_u(mesh, u, slack):
    u = as_u_array(u)
    if len(u) != mesh.edge_count:
        raise ValueError(f"expected {mesh.edge_count} edge values, got {len(u)}")
    face = first_degenerate_face(u, mesh, slack)
    if face is not None:
        raise InadmissibleMetricError(face, f"face {face} is degenerate or violates the triangle inequality")
    return u[mesh.face_edge_index]


def _metric_u(metric):
    if isinstance(metric, PolyhedralMetric):
        return to_u(metric).u
    return 0.5 * np.asarray(metric, dtype=np.float64) ** 2


def corner_angles(mesh, metric, slack=DEGENERACY_SLACK):
    """Corner angles per face by the cosine law.

    ``angles[f, x]`` is the angle at corner ``x`` of face ``f``, opposite the
    edge ``mesh.face_edge_index[f, x]``.
    """
    u = _face_u(mesh, _metric_u(metric), slack)
    d = np.sqrt(2.0 * u)
    dj, dk = d[:, [1, 2, 0]], d[:, [2, 0, 1]]
    cos = (dj**2 + dk**2 - d**2) / (2.0 * dj * dk)
    return np.arccos(np.clip(cos, -1.0, 1.0))


def face_cotangents_from_u(mesh, u, slack=DEGENERACY_SLACK):
    """``cot`` of every corner angle, shape ``(F, 3)``."""
    return kernels.face_cotangents(_face_u(mesh, u, slack))


def weights_from_u(mesh, u, slack=DEGENERACY_SLACK):
    cot = face_cotangents_from_u(mesh, u, slack)
    return 0.5 * np.bincount(mesh.face_edge_index.ravel(), weights=cot.ravel(), minlength=mesh.edge_count)


def cotangent_weights(mesh, metric, slack=DEGENERACY_SLACK):
    """Half the sum of cotangents of the angles opposite each edge.

    Boundary edges see one angle, interior edges two. Weights are negative
    when the opposite angles are obtuse enough, and invariant under
    uniform scaling of the metric.
    """
    return weights_from_u(mesh, _metric_u(metric), slack)


def laplace_matrix(mesh, weights):
    """Sparse symmetric Laplacian: ``-w`` off the diagonal, row sums zero."""
    w = np.asarray(weights, dtype=np.float64)
    if len(w) != mesh.edge_count:
        raise ValueError(f"expected {mesh.edge_count} weights, got {len(w)}")
    n = mesh.vertex_count
    i, j = mesh.edges[:, 0], mesh.edges[:, 1]
    off = sp.coo_matrix(
        (np.concatenate([-w, -w]), (np.concatenate([i, j]), np.concatenate([j, i]))),
        shape=(n, n),
    ).tocsr()
    off.sum_duplicates()
    diag = -np.asarray(off.sum(axis=1)).ravel()
    return (off + sp.diags(diag)).tocsr()


def spectral_decomposition(L):
    """Dense symmetric eigendecomposition ``L = Phi diag(lam) Phi^T``."""
    dense = L.toarray() if sp.issparse(L) else np.asarray(L, dtype=np.float64)
    try:
        lam, phi = scipy.linalg.eigh(dense)
    except scipy.linalg.LinAlgError as exc:
        raise RuntimeError(f"eigendecomposition failed: {exc}") from exc
    return SpectralData(lam, phi)


def heat_kernel(spec, t):
    """``K(t) = Phi exp(-Lambda t) Phi^T`` as a dense symmetric matrix."""
    if not t >= 0:
        raise ValueError(f"heat kernel time must be nonnegative, got {t}")
    phi = spec.eigenvectors
    K = (phi * np.exp(-spec.eigenvalues * t)) @ phi.T
    return 0.5 * (K + K.T)


def heat_kernel_to_laplacian(spec, h):
    """Forward difference ``-(K(h) - K(0)) / h``, which tends to ``L`` as h -> 0."""
    if not h > 0:
        raise ValueError(f"step must be positive, got {h}")
    return -(heat_kernel(spec, h) - heat_kernel(spec, 0.0)) / h


def face_geometry(d):
    """Area, circumradius and inradius of a triangle with side lengths ``d``."""
    d = np.asarray(d, dtype=np.float64).ravel()
    if d.shape != (3,) or not np.all(d > 0):
        raise ValueError("expected three positive side lengths")
    s = d.sum()
    if not (s - 2.0 * d).min() > DEGENERACY_SLACK * s:
        raise InadmissibleMetricError(0, f"degenerate triangle with sides {tuple(d)}")
    area = float(kernels.face_areas(0.5 * d**2)[0])
    circumradius = float(np.prod(d) / (4.0 * area))
    inradius = area / (0.5 * s)
    return area, circumradius, inradius


# -- exports ------------------------------------------------------------------


def write_weights(path, mesh, weights):
    write_edge_values(path, mesh, weights)


def write_laplacian(path, L):
    """Matrix Market coordinate file, symmetric real, 17 significant digits."""
    scipy.io.mmwrite(path, sp.coo_matrix(L), symmetry="symmetric", precision=17)


def write_heat_kernel(path, K, t):
    K = np.asarray(K)
    with open(path, "w") as fh:
        fh.write(f"{K.shape[0]} {t:.17g}\n")
        for row in K:
            fh.write(" ".join(f"{x:.17g}" for x in row))
            fh.write("\n")


def read_heat_kernel(path):
    with open(path) as fh:
        n, t = fh.readline().split()
        K = np.loadtxt(fh, ndmin=2)
    if K.shape != (int(n), int(n)):
        raise ValueError(f"{path}: header says n={n} but matrix is {K.shape}")
    return K, float(t)
