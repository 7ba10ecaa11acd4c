"""Edge-length metrics, u-coordinates and the admissible metric space.

Two coordinate systems describe the same metric: edge lengths ``d`` and
``u = d**2 / 2``. The admissible space is the set of ``u`` whose square
roots satisfy the strict triangle inequality on every face, optionally
cut by the hyperplane ``sum(u) == m``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

NORMALIZATION_RTOL = 1e-12


class InadmissibleMetricError(ValueError):
    """A face violates the triangle inequality (or is too close to it)."""

    def __init__(self, face, message=None):
        self.face = face
        super().__init__(message or f"face {face} violates the triangle inequality")


@dataclass(frozen=True, eq=False)
class PolyhedralMetric:
    """Positive edge lengths in canonical edge order."""

    lengths: np.ndarray

    def __post_init__(self):
        d = np.array(self.lengths, dtype=np.float64).ravel()
        if not np.all(d > 0) or not np.all(np.isfinite(d)):
            raise ValueError("edge lengths must be positive and finite")
        d.setflags(write=False)
        object.__setattr__(self, "lengths", d)

    def __len__(self):
        return len(self.lengths)

    def scaled(self, c):
        return PolyhedralMetric(c * self.lengths)


@dataclass(frozen=True, eq=False)
class UCoordinates:
    """``u_k = d_k**2 / 2``; ``normalized`` records that ``sum(u) == m``."""

    u: np.ndarray
    normalized: bool = field(default=False)

    def __post_init__(self):
        u = np.array(self.u, dtype=np.float64).ravel()
        if not np.all(u > 0) or not np.all(np.isfinite(u)):
            raise ValueError("u-coordinates must be positive and finite")
        u.setflags(write=False)
        object.__setattr__(self, "u", u)

    def __len__(self):
        return len(self.u)


class Admissibility:
    """Truthy result of :func:`is_admissible`; ``face`` is the first violator."""

    __slots__ = ("face",)

    def __init__(self, face=None):
        self.face = face

    def __bool__(self):
        return self.face is None

    def __repr__(self):
        return "Admissibility(ok)" if self.face is None else f"Admissibility(face={self.face})"


def as_u_array(u):
    if isinstance(u, UCoordinates):
        return u.u
    return np.asarray(u, dtype=np.float64).ravel()


def to_u(metric):
    return UCoordinates(0.5 * metric.lengths**2)


def from_u(u):
    arr = as_u_array(u)
    if not np.all(arr > 0):
        raise ValueError("u-coordinates must be positive")
    return PolyhedralMetric(np.sqrt(2.0 * arr))


def face_margins(u, mesh):
    """Relative triangle-inequality margin per face.

    ``min_x (s_y + s_z - s_x) / (s_x + s_y + s_z)`` with ``s = sqrt(u)`` on
    the face's edges. Positive exactly when the face is a genuine triangle.
    """
    s = np.sqrt(np.maximum(as_u_array(u), 0.0))[mesh.face_edge_index]
    total = s.sum(axis=1)
    return (total[:, None] - 2.0 * s).min(axis=1) / total


def first_degenerate_face(u, mesh, slack=0.0):
    """Index of the first face whose margin is ``<= slack``, or None."""
    bad = np.flatnonzero(~(face_margins(u, mesh) > slack))
    return int(bad[0]) if bad.size else None


def is_admissible(u, mesh, slack=0.0):
    u = as_u_array(u)
    if len(u) != mesh.edge_count:
        raise ValueError(f"expected {mesh.edge_count} u-values, got {len(u)}")
    if not np.all(u > 0):
        return Admissibility(int(mesh.edge_faces[int(np.flatnonzero(~(u > 0))[0])][0]))
    return Admissibility(first_degenerate_face(u, mesh, slack))


def check_admissible(u, mesh, slack=0.0):
    """Raise :class:`InadmissibleMetricError` unless ``u`` is admissible."""
    res = is_admissible(u, mesh, slack)
    if not res:
        raise InadmissibleMetricError(res.face)


def normalize(u, mesh=None):
    """Rescale so that ``sum(u) == m``.

    ``mesh`` is accepted for symmetry with the other operations; only the
    length of ``u`` matters.
    """
    arr = as_u_array(u)
    if mesh is not None and len(arr) != mesh.edge_count:
        raise ValueError(f"expected {mesh.edge_count} u-values, got {len(arr)}")
    m = len(arr)
    total = arr.sum()
    if abs(total - m) <= NORMALIZATION_RTOL * m:
        out = arr.copy()
    else:
        out = arr * (m / total)
    return UCoordinates(out, normalized=True)


def project_tangent(v):
    """Remove the mean: orthogonal projection onto ``sum(v) == 0``."""
    v = np.asarray(v, dtype=np.float64)
    return v - v.mean()


# -- edge-value files: "vi vj value" per line, 1-based vertex ids ------------


def write_edge_values(path, mesh, values):
    values = np.asarray(values, dtype=np.float64)
    if len(values) != mesh.edge_count:
        raise ValueError(f"expected {mesh.edge_count} values, got {len(values)}")
    with open(path, "w") as fh:
        for (i, j), x in zip(mesh.edges, values):
            fh.write(f"{i + 1} {j + 1} {x:.17g}\n")


def read_edge_values(path, mesh):
    """Read a per-edge value file and return values in canonical order.

    Lines are matched to edges by their vertex pair, so their order in the
    file does not matter. Meshes with parallel edges must list the edges in
    canonical order.
    """
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 'vi vj value'")
            i, j = int(parts[0]) - 1, int(parts[1]) - 1
            rows.append((min(i, j), max(i, j), float(parts[2])))
    m = mesh.edge_count
    if len(rows) != m:
        raise ValueError(f"{path}: expected {m} edges, found {len(rows)}")
    out = np.empty(m)
    if mesh.has_parallel_edges():
        for k, (i, j, x) in enumerate(rows):
            if (i, j) != tuple(mesh.edges[k]):
                raise ValueError(f"{path}: line {k + 1} does not match edge {k}")
            out[k] = x
        return out
    index = {(int(i), int(j)): k for k, (i, j) in enumerate(mesh.edges)}
    seen = np.zeros(m, dtype=bool)
    for i, j, x in rows:
        k = index.get((i, j))
        if k is None:
            raise ValueError(f"{path}: ({i + 1}, {j + 1}) is not an edge of the mesh")
        if seen[k]:
            raise ValueError(f"{path}: edge ({i + 1}, {j + 1}) listed twice")
        seen[k] = True
        out[k] = x
    return out


def write_metric(path, mesh, metric):
    write_edge_values(path, mesh, metric.lengths)


def read_metric(path, mesh):
    return PolyhedralMetric(read_edge_values(path, mesh))
