"""Convex energy whose minimizer realizes prescribed cotangent weights.

In u-coordinates the 1-form ``sum_k (target_k - w_k(u)) du_k`` is closed,
so its line integral

    E(u) = int_{u_ref}^{u} sum_k (target_k - w_k(mu)) dmu_k

is path independent. Its gradient is ``target - w(u)`` and its Hessian is
``-dw/du``, positive semidefinite with the scaling direction ``u`` as the
kernel.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from . import kernels
from .laplace import DEGENERACY_SLACK, face_cotangents_from_u, weights_from_u
from .metric import InadmissibleMetricError, as_u_array, first_degenerate_face

QUADRATURE_ORDER = 32
_nodes, _qweights = np.polynomial.legendre.leggauss(QUADRATURE_ORDER)
# mapped from [-1, 1] to [0, 1]
GAUSS_NODES = 0.5 * (_nodes + 1.0)
GAUSS_WEIGHTS = 0.5 * _qweights


def _face_triple(u_face):
    u = np.asarray(u_face, dtype=np.float64).ravel()
    if u.shape != (3,) or not np.all(u > 0):
        raise ValueError("expected three positive u-values")
    s = np.sqrt(u)
    if not (s.sum() - 2.0 * s).min() > DEGENERACY_SLACK * s.sum():
        raise InadmissibleMetricError(0, f"u-values {tuple(u)} do not form a triangle")
    return u


def face_gradient(u_face):
    """``(cot theta_i, cot theta_j, cot theta_k)`` of a single face.

    ``u_face[x]`` belongs to the edge opposite the angle ``theta_x``.
    """
    return kernels.face_cotangents(_face_triple(u_face))[0]


def face_hessian(u_face):
    """Jacobian of the cotangent triple with respect to ``u_face``.

    Off-diagonal ``(x, y)``: ``(2 R^2 / A) cos(theta_z) / (d_x d_y)``;
    diagonal ``(x, x)``: ``-(2 R^2 / A) / d_x^2``. Symmetric, negative
    semidefinite, and annihilates ``u_face`` itself.
    """
    return kernels.face_hessians(_face_triple(u_face))[0]


def assemble_gradient(mesh, u, target):
    """Energy gradient ``target - w(u)``."""
    target = np.asarray(target, dtype=np.float64)
    if len(target) != mesh.edge_count:
        raise ValueError(f"expected {mesh.edge_count} target weights, got {len(target)}")
    return target - weights_from_u(mesh, u)


def assemble_hessian(mesh, u):
    """Sparse ``m x m`` Hessian ``-dw/du`` of the energy.

    Each face puts half its cotangent on the opposite edge, so it adds
    ``-1/2`` times its 3x3 block at the rows/columns of its three edges.
    """
    fu = as_u_array(u)[mesh.face_edge_index]
    face = first_degenerate_face(u, mesh, DEGENERACY_SLACK)
    if face is not None:
        raise InadmissibleMetricError(face)
    blocks = kernels.face_hessians(fu)
    fei = mesh.face_edge_index
    rows = np.broadcast_to(fei[:, :, None], blocks.shape).ravel()
    cols = np.broadcast_to(fei[:, None, :], blocks.shape).ravel()
    m = mesh.edge_count
    H = sp.coo_matrix((-0.5 * blocks.ravel(), (rows, cols)), shape=(m, m)).tocsr()
    H.sum_duplicates()
    return H


def _scatter(mesh):
    """Sparse ``(m, 3F)`` matrix summing corner values onto opposite edges."""
    idx = mesh.face_edge_index.ravel()
    return sp.csr_matrix(
        (np.ones(len(idx)), (idx, np.arange(len(idx)))), shape=(mesh.edge_count, len(idx))
    )


def batch_weights(mesh, U):
    """Cotangent weights for each row of ``U`` (shape ``(Q, m)``)."""
    U = np.atleast_2d(np.asarray(U, dtype=np.float64))
    for q, row in enumerate(U):
        if not np.all(row > 0):
            raise InadmissibleMetricError(-1, f"sample {q} has nonpositive u")
        face = first_degenerate_face(row, mesh, DEGENERACY_SLACK)
        if face is not None:
            raise InadmissibleMetricError(face, f"sample {q}: face {face} is degenerate")
    cot = kernels.face_cotangents(U[:, mesh.face_edge_index].reshape(-1, 3))
    return 0.5 * (_scatter(mesh) @ cot.reshape(len(U), -1).T).T


def energy_value(mesh, u, target, u_ref=None):
    """Line integral of ``target - w`` along the segment ``u_ref -> u``.

    Uses fixed 32-point Gauss-Legendre quadrature. ``u_ref`` defaults to the
    constant metric ``(1, ..., 1)``. Raises :class:`InadmissibleMetricError`
    when a quadrature node falls outside the admissible region.
    """
    u = as_u_array(u)
    target = np.asarray(target, dtype=np.float64)
    u_ref = np.ones_like(u) if u_ref is None else as_u_array(u_ref)
    delta = u - u_ref
    if not np.any(delta):
        return 0.0
    U = u_ref[None, :] + GAUSS_NODES[:, None] * delta[None, :]
    g = target[None, :] - batch_weights(mesh, U)
    return float(GAUSS_WEIGHTS @ (g @ delta))


def polyline_energy(mesh, points, target):
    """Energy integrated along consecutive straight segments of ``points``."""
    return sum(
        energy_value(mesh, b, target, u_ref=a) for a, b in zip(points[:-1], points[1:])
    )


__all__ = [
    "face_gradient",
    "face_hessian",
    "assemble_gradient",
    "assemble_hessian",
    "energy_value",
    "polyline_energy",
    "batch_weights",
    "face_cotangents_from_u",
]
