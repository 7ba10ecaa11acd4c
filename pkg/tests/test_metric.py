import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cotmetric import shapes
from cotmetric.metric import (
    PolyhedralMetric,
    UCoordinates,
    from_u,
    is_admissible,
    normalize,
    project_tangent,
    read_edge_values,
    read_metric,
    to_u,
    write_metric,
)

TRI, _ = shapes.triangle()


@pytest.mark.parametrize(
    "d, u",
    [((1, 1, 1), (0.5, 0.5, 0.5)), ((3, 4, 5), (4.5, 8, 12.5)), ((np.sqrt(2),) * 3, (1, 1, 1))],
)
def test_to_u_from_u(d, u):
    np.testing.assert_allclose(to_u(PolyhedralMetric(d)).u, u, rtol=1e-15)
    np.testing.assert_allclose(from_u(UCoordinates(u)).lengths, d, rtol=1e-15)


def test_from_u_rejects_nonpositive():
    with pytest.raises(ValueError):
        from_u(np.array([1.0, 0.0, 1.0]))


def test_metric_rejects_nonpositive():
    with pytest.raises(ValueError):
        PolyhedralMetric([1.0, -1.0, 1.0])


@given(st.lists(st.floats(1e-3, 1e3), min_size=1, max_size=40))
def test_roundtrip_relative_error(d):
    d = np.array(d)
    back = from_u(to_u(PolyhedralMetric(d))).lengths
    assert np.max(np.abs(back / d - 1)) <= 1e-15 * 2


def test_is_admissible_examples():
    assert is_admissible([1, 1, 1], TRI)
    res = is_admissible([0.5, 0.5, 4.5], TRI)
    assert not res and res.face == 0
    assert is_admissible([4.5, 8, 12.5], TRI)


def test_is_admissible_degenerate_is_rejected():
    # d = (1, 1, 2): equality, not strict
    assert not is_admissible([0.5, 0.5, 2.0], TRI)


@pytest.mark.parametrize(
    "u, expected",
    [((0.5, 0.5, 0.5), (1, 1, 1)), ((1, 2, 3), (0.5, 1, 1.5)), ((1, 1, 1), (1, 1, 1))],
)
def test_normalize(u, expected):
    out = normalize(np.array(u, float), TRI)
    assert out.normalized
    np.testing.assert_allclose(out.u, expected, rtol=1e-15)


@given(
    st.lists(st.floats(1e-2, 1e2), min_size=2, max_size=30),
    st.floats(1e-3, 1e3),
)
def test_normalize_idempotent_and_scale_free(u, c):
    u = np.array(u)
    once = normalize(u).u
    np.testing.assert_array_equal(normalize(once).u, once)
    np.testing.assert_allclose(normalize(c * u).u, once, rtol=1e-13)
    assert abs(once.sum() - len(u)) <= 1e-12 * len(u)


@pytest.mark.parametrize(
    "v, expected", [((1, 1, 1), (0, 0, 0)), ((1, 0, -1), (1, 0, -1)), ((2, 1, 0), (1, 0, -1))]
)
def test_project_tangent(v, expected):
    np.testing.assert_allclose(project_tangent(np.array(v, float)), expected, atol=1e-15)


@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=50))
def test_project_tangent_idempotent(v):
    p = project_tangent(np.array(v))
    scale = max(1.0, np.abs(v).max())
    assert abs(p.sum()) <= 1e-12 * scale * len(v)
    np.testing.assert_allclose(project_tangent(p), p, atol=1e-12 * scale)


def _admissible_u(mesh, seed):
    rng = np.random.default_rng(seed)
    while True:
        u = rng.uniform(0.2, 3.0, mesh.edge_count)
        if is_admissible(u, mesh):
            return normalize(u, mesh).u


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1), st.floats(0.0, 1.0, exclude_min=True, exclude_max=True))
def test_admissible_space_is_convex(s1, s2, lam):
    mesh, _ = shapes.tetrahedron()
    u = _admissible_u(mesh, s1)
    v = _admissible_u(mesh, s2)
    mix = lam * u + (1 - lam) * v
    assert is_admissible(mix, mesh)
    assert abs(mix.sum() - mesh.edge_count) <= 1e-12 * mesh.edge_count


def test_metric_file_roundtrip(tmp_path):
    mesh, x = shapes.icosahedron()
    d = np.random.default_rng(1).uniform(0.9, 1.1, mesh.edge_count)
    write_metric(tmp_path / "m.txt", mesh, PolyhedralMetric(d))
    np.testing.assert_array_equal(read_metric(tmp_path / "m.txt", mesh).lengths, d)
    first = (tmp_path / "m.txt").read_text().splitlines()[0].split()
    assert first[:2] == ["1", "2"]


def test_metric_file_any_line_order(tmp_path):
    mesh, _ = shapes.tetrahedron()
    lines = [f"{j + 1} {i + 1} {k + 0.5}" for k, (i, j) in enumerate(mesh.edges)]
    (tmp_path / "m.txt").write_text("\n".join(reversed(lines)) + "\n")
    np.testing.assert_array_equal(read_edge_values(tmp_path / "m.txt", mesh), np.arange(6) + 0.5)


def test_metric_file_wrong_edge(tmp_path):
    mesh, _ = shapes.square()
    text = "1 2 1\n2 3 1\n3 4 1\n1 4 1\n2 4 1\n"
    (tmp_path / "m.txt").write_text(text)
    with pytest.raises(ValueError, match="not an edge"):
        read_edge_values(tmp_path / "m.txt", mesh)
