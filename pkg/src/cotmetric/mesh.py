"""Combinatorial triangle meshes, OBJ input/output and the double cover."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .metric import PolyhedralMetric, first_degenerate_face


class MeshError(ValueError):
    """Invalid or unsupported mesh input."""


@dataclass(frozen=True, eq=False)
class MeshConnectivity:
    """Triangulated surface with canonically indexed edges.

    Attributes
    ----------
    vertex_count : int
    faces : ndarray, shape (F, 3)
        Vertex indices, orientation as given.
    edges : ndarray, shape (m, 2)
        ``(min, max)`` vertex pairs in canonical (lexicographic) order.
        A double cover may contain two parallel edges with the same pair;
        they are kept apart by ``sheets``.
    edge_faces : tuple of tuple of int
        Incident faces per edge (1 for boundary, 2 for interior).
    face_edge_index : ndarray, shape (F, 3)
        ``face_edge_index[f, x]`` is the edge opposite corner ``x`` of face ``f``.
    sheets : ndarray, shape (m,)
        Tie-breaker used in the canonical order; all zero for ordinary meshes.
    """

    vertex_count: int
    faces: np.ndarray
    edges: np.ndarray
    edge_faces: tuple
    face_edge_index: np.ndarray
    sheets: np.ndarray

    @classmethod
    def from_faces(cls, faces, vertex_count=None, corner_sheets=None):
        """Build connectivity from vertex triples.

        ``corner_sheets`` (shape ``(F, 3)``) optionally tags the edge opposite
        each corner; edges with equal endpoints but different tags stay
        distinct. This is how parallel edges of a double cover are encoded.
        """
        faces = np.asarray(faces, dtype=np.int64).reshape(-1, 3)
        if len(faces) == 0:
            raise MeshError("mesh has no faces")
        if vertex_count is None:
            vertex_count = int(faces.max()) + 1
        vertex_count = int(vertex_count)
        bad = np.flatnonzero((faces < 0).any(axis=1) | (faces >= vertex_count).any(axis=1))
        if bad.size:
            raise MeshError(f"face {bad[0]} references a vertex outside [0, {vertex_count})")
        degenerate = (
            (faces[:, 0] == faces[:, 1])
            | (faces[:, 1] == faces[:, 2])
            | (faces[:, 0] == faces[:, 2])
        )
        if degenerate.any():
            raise MeshError(f"face {np.flatnonzero(degenerate)[0]} repeats a vertex")

        # edge opposite corner x joins corners x+1 and x+2
        a = faces[:, [1, 2, 0]]
        b = faces[:, [2, 0, 1]]
        if corner_sheets is None:
            corner_sheets = np.zeros_like(faces)
        corner_sheets = np.asarray(corner_sheets, dtype=np.int64).reshape(faces.shape)
        keys = np.stack(
            [np.minimum(a, b).ravel(), np.maximum(a, b).ravel(), corner_sheets.ravel()],
            axis=1,
        )
        uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
        inverse = inverse.ravel()
        counts = np.bincount(inverse, minlength=len(uniq))
        if (counts > 2).any():
            e = int(np.flatnonzero(counts > 2)[0])
            raise MeshError(
                f"non-manifold edge ({uniq[e, 0]}, {uniq[e, 1]}) has {counts[e]} incident faces"
            )
        face_of_corner = np.repeat(np.arange(len(faces)), 3)
        order = np.argsort(inverse, kind="stable")
        starts = np.concatenate([[0], np.cumsum(counts)])
        sorted_faces = face_of_corner[order]
        edge_faces = tuple(
            tuple(int(f) for f in sorted_faces[starts[e]:starts[e + 1]]) for e in range(len(uniq))
        )
        return cls(
            vertex_count=vertex_count,
            faces=faces,
            edges=np.ascontiguousarray(uniq[:, :2]),
            edge_faces=edge_faces,
            face_edge_index=inverse.reshape(-1, 3),
            sheets=np.ascontiguousarray(uniq[:, 2]),
        )

    @property
    def edge_count(self):
        return len(self.edges)

    @property
    def face_count(self):
        return len(self.faces)

    def face_incidence(self):
        """Number of incident faces per edge."""
        return np.bincount(self.face_edge_index.ravel(), minlength=self.edge_count)

    def has_parallel_edges(self):
        return bool((self.sheets != 0).any())


def boundary_edges(mesh):
    """Indices of edges with exactly one incident face (sorted array)."""
    return np.flatnonzero(mesh.face_incidence() == 1)


def is_closed(mesh):
    return boundary_edges(mesh).size == 0


def euler_characteristic(mesh):
    return mesh.vertex_count - mesh.edge_count + mesh.face_count


def connected_components(mesh):
    """Number of connected components among vertices used by some face."""
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components as cc

    n = mesh.vertex_count
    e = mesh.edges
    adj = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n))
    _, labels = cc(adj, directed=False)
    return len(np.unique(labels[np.unique(mesh.faces)]))


class DoubleCover(NamedTuple):
    mesh: MeshConnectivity
    edge_correspondence: dict
    vertex_origin: np.ndarray


def double_cover(mesh):
    """Glue ``mesh`` to an orientation-reversed copy along the boundary.

    Boundary vertices and edges are shared by both sheets; interior
    vertices and edges are duplicated. Returns the closed mesh, the map
    ``original edge -> [covering edges]`` (one entry for boundary edges,
    two for interior ones) and, per doubled vertex, its original vertex.
    """
    bnd = boundary_edges(mesh)
    if bnd.size == 0:
        raise MeshError("double cover requires boundary")
    n = mesh.vertex_count
    on_boundary = np.zeros(n, dtype=bool)
    on_boundary[mesh.edges[bnd].ravel()] = True
    interior_vertices = np.flatnonzero(~on_boundary)
    vmap = np.arange(n)
    vmap[interior_vertices] = n + np.arange(len(interior_vertices))
    vertex_origin = np.concatenate([np.arange(n), interior_vertices])

    interior_edge = np.ones(mesh.edge_count, dtype=np.int64)
    interior_edge[bnd] = 0
    faces = mesh.faces
    copy_faces = vmap[faces[:, [0, 2, 1]]]
    copy_sheets = interior_edge[mesh.face_edge_index[:, [0, 2, 1]]]
    doubled = MeshConnectivity.from_faces(
        np.vstack([faces, copy_faces]),
        vertex_count=n + len(interior_vertices),
        corner_sheets=np.vstack([np.zeros_like(faces), copy_sheets]),
    )
    nf = mesh.face_count
    first = doubled.face_edge_index[:nf]
    second = doubled.face_edge_index[nf:][:, [0, 2, 1]]
    corr = {e: set() for e in range(mesh.edge_count)}
    for orig, c1, c2 in zip(mesh.face_edge_index.ravel(), first.ravel(), second.ravel()):
        corr[int(orig)].update((int(c1), int(c2)))
    corr = {e: sorted(v) for e, v in corr.items()}
    assert is_closed(doubled)
    return DoubleCover(doubled, corr, vertex_origin)


def induced_metric(mesh, positions):
    """Edge lengths of the embedding given by ``positions``."""
    if positions is None:
        raise MeshError("mesh has no vertex positions")
    x = np.asarray(positions, dtype=np.float64)
    if x.shape != (mesh.vertex_count, 3):
        raise MeshError(f"expected positions of shape ({mesh.vertex_count}, 3), got {x.shape}")
    d = np.linalg.norm(x[mesh.edges[:, 0]] - x[mesh.edges[:, 1]], axis=1)
    zero = np.flatnonzero(d == 0)
    if zero.size:
        i, j = mesh.edges[zero[0]]
        raise MeshError(f"zero-length edge ({i}, {j})")
    face = first_degenerate_face(0.5 * d**2, mesh, slack=0.0)
    if face is not None:
        raise MeshError(f"face {face} is degenerate (zero area)")
    return PolyhedralMetric(d)


def load_obj(path):
    """Read the ``v``/``f`` records of a Wavefront OBJ file.

    Returns ``(MeshConnectivity, positions)``. Face tokens may carry
    ``/vt/vn`` suffixes; negative (relative) indices are resolved.
    """
    verts = []
    faces = []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(p) for p in parts[1:4]])
            elif parts[0] == "f":
                idx = []
                for tok in parts[1:]:
                    k = int(tok.split("/")[0])
                    idx.append(k - 1 if k > 0 else len(verts) + k)
                if len(idx) != 3:
                    raise MeshError(f"non-triangular face {len(faces)} ({len(idx)} vertices)")
                faces.append(idx)
    n = len(verts)
    for fi, f in enumerate(faces):
        if any(k < 0 or k >= n for k in f):
            raise MeshError(f"face {fi} references a dangling vertex index")
    mesh = MeshConnectivity.from_faces(faces, vertex_count=n)
    positions = np.array(verts, dtype=np.float64).reshape(-1, 3)
    return mesh, positions


def write_obj(path, mesh, positions=None):
    with open(path, "w") as fh:
        if positions is not None:
            for p in np.asarray(positions, dtype=np.float64):
                fh.write("v {:.17g} {:.17g} {:.17g}\n".format(*p))
        for f in mesh.faces:
            fh.write("f {} {} {}\n".format(*(f + 1)))
