import numpy as np
import pytest

from cotmetric import shapes
from cotmetric.energy import face_gradient
from cotmetric.laplace import cotangent_weights
from cotmetric.mesh import MeshConnectivity, MeshError, induced_metric
from cotmetric.metric import PolyhedralMetric, is_admissible
from cotmetric.recover import (
    SolverOptions,
    recover_metric,
    recover_via_double_cover,
    solve_triangle,
    verify_scaling,
)

from conftest import MESH_NAMES, OPEN_MESHES, random_metric, random_triangle_u, reference_mesh

SQRT3 = np.sqrt(3.0)


def test_solve_triangle_equilateral():
    np.testing.assert_allclose(solve_triangle([1 / SQRT3] * 3), 1.0, atol=1e-12)


def test_solve_triangle_right_isoceles():
    s = np.sqrt(2) / 2
    expected = 3 / (2 * s + 1) * np.array([s, s, 1])
    np.testing.assert_allclose(solve_triangle([1, 1, 0]), expected, rtol=1e-14)
    np.testing.assert_allclose(expected, [0.8786797, 0.8786797, 1.2426407], atol=1e-7)


def test_solve_triangle_345():
    np.testing.assert_allclose(solve_triangle([4 / 3, 3 / 4, 0]), [0.75, 1.0, 1.25], atol=1e-12)


def test_solve_triangle_inconsistent():
    with pytest.raises(ValueError, match="inconsistent cotangent triple"):
        solve_triangle([1, 1, 1])


def test_solve_triangle_roundtrip(rng):
    for _ in range(100):
        u = random_triangle_u(rng)
        d = np.sqrt(2 * u)
        np.testing.assert_allclose(solve_triangle(face_gradient(u)), 3 * d / d.sum(), rtol=1e-10)


def test_verify_scaling_examples():
    ref = PolyhedralMetric([1.0, 2.0, 3.0])
    assert verify_scaling(PolyhedralMetric([2.0, 4.0, 6.0]), ref) == (2.0, 0.0)
    assert verify_scaling(ref, ref) == (1.0, 0.0)
    sc = verify_scaling(PolyhedralMetric([1.0, 2.0, 3.3]), ref)
    assert sc.scale == 1.0 and abs(sc.deviation - 0.1) < 1e-12


def test_verify_scaling_errors():
    with pytest.raises(ValueError):
        verify_scaling(np.ones(3), np.ones(4))
    with pytest.raises(ValueError):
        verify_scaling(np.ones(3), np.array([1.0, 0.0, 1.0]))


def test_tetrahedron_constant_metric_is_optimal():
    mesh, _ = shapes.tetrahedron()
    rep = recover_metric(mesh, np.full(6, 1 / SQRT3))
    assert rep.converged and rep.iterations == 0
    np.testing.assert_allclose(rep.u.u, 1.0, rtol=1e-15)


def test_triangle_345_recovery():
    mesh, x = shapes.triangle((0, 0, 0), (3, 0, 0), (0, 4, 0))
    d = induced_metric(mesh, x)
    rep = recover_metric(mesh, cotangent_weights(mesh, d))
    assert rep.converged
    assert verify_scaling(rep.metric, d).deviation <= 1e-8


@pytest.mark.parametrize("name", MESH_NAMES)
def test_round_trip_rigidity(name, rng):
    mesh, x = reference_mesh(name)
    d = random_metric(mesh, induced_metric(mesh, x).lengths, rng)
    iterates = []
    rep = recover_metric(mesh, cotangent_weights(mesh, d), callback=lambda k, u: iterates.append(u))
    assert rep.converged and rep.iterations <= 100
    assert rep.gradient_norm <= 1e-10
    assert verify_scaling(rep.metric, d).deviation <= 1e-8
    np.testing.assert_allclose(cotangent_weights(mesh, rep.metric), cotangent_weights(mesh, d), atol=1e-9)
    # energy trace is nonincreasing
    assert np.all(np.diff(rep.energy_trace) <= 0)
    # every iterate is admissible and on the normalization hyperplane
    for u in iterates:
        assert is_admissible(u, mesh)
        assert abs(u.sum() - mesh.edge_count) <= 1e-12 * mesh.edge_count
    # quadratic tail: the last steps each gain at least a factor 10
    g = rep.gradient_trace
    tail = g[-4:] if len(g) >= 4 else g
    assert all(b <= 0.1 * a for a, b in zip(tail[:-1], tail[1:]))


@pytest.mark.parametrize("name", MESH_NAMES)
def test_uniqueness_from_two_starts(name, rng):
    mesh, x = reference_mesh(name)
    d0 = induced_metric(mesh, x).lengths
    target = cotangent_weights(mesh, random_metric(mesh, d0, rng))
    init = PolyhedralMetric(random_metric(mesh, d0, rng, spread=0.2))
    a = recover_metric(mesh, target)
    b = recover_metric(mesh, target, SolverOptions(init=init))
    assert a.converged and b.converged
    np.testing.assert_allclose(a.u.u, b.u.u, atol=1e-7)


@pytest.mark.parametrize("name", OPEN_MESHES)
def test_double_cover_agrees_with_direct(name, rng):
    mesh, x = reference_mesh(name)
    d = random_metric(mesh, induced_metric(mesh, x).lengths, rng)
    target = cotangent_weights(mesh, d)
    direct = recover_metric(mesh, target)
    doubled = recover_via_double_cover(mesh, target)
    assert doubled.converged
    assert verify_scaling(doubled.metric, direct.metric).deviation <= 1e-6
    assert verify_scaling(doubled.metric, d).deviation <= 1e-8


def test_double_cover_embedded_square():
    mesh, x = shapes.square()
    d = induced_metric(mesh, x)
    target = cotangent_weights(mesh, d)
    rep = recover_via_double_cover(mesh, target)
    assert verify_scaling(rep.metric, d).deviation <= 1e-6


def test_double_cover_fan_with_interior_vertex(rng):
    ring = np.arange(1, 7)
    faces = [[0, ring[k], ring[(k + 1) % 6]] for k in range(6)]
    mesh = MeshConnectivity.from_faces(faces, 7)
    ang = 2 * np.pi * np.arange(6) / 6
    x = np.vstack([[0, 0, 0], np.column_stack([np.cos(ang), np.sin(ang), np.zeros(6)])])
    d = random_metric(mesh, induced_metric(mesh, x).lengths, rng)
    target = cotangent_weights(mesh, d)
    rep = recover_via_double_cover(mesh, target)
    assert rep.converged
    assert verify_scaling(rep.metric, d).deviation <= 1e-8


def test_double_cover_requires_boundary():
    mesh, x = shapes.tetrahedron()
    with pytest.raises(MeshError):
        recover_via_double_cover(mesh, cotangent_weights(mesh, induced_metric(mesh, x)))


def test_disconnected_mesh_rejected():
    mesh = MeshConnectivity.from_faces([[0, 1, 2], [3, 4, 5]], 6)
    with pytest.raises(MeshError, match="connected"):
        recover_metric(mesh, np.full(mesh.edge_count, 0.3))


def test_unrealizable_target_reports_failure(rng):
    mesh, _ = shapes.icosahedron()
    target = rng.uniform(-3, 3, mesh.edge_count)
    rep = recover_metric(mesh, target, SolverOptions(max_iters=30))
    assert not rep.converged
    assert rep.residual > 1e-3
    assert is_admissible(rep.u.u, mesh)
    assert np.all(np.diff(rep.energy_trace) <= 0)


def test_gradient_descent_fallback(rng):
    mesh, x = shapes.triangle()
    d = random_metric(mesh, induced_metric(mesh, x).lengths, rng)
    target = cotangent_weights(mesh, d)
    rep = recover_metric(mesh, target, SolverOptions(method="gradient", max_iters=2000, tol=1e-9))
    assert rep.converged
    assert verify_scaling(rep.metric, d).deviation <= 1e-7
    newton = recover_metric(mesh, target)
    assert newton.iterations < rep.iterations


def test_inadmissible_initial_metric():
    mesh, _ = shapes.triangle()
    with pytest.raises(ValueError):
        recover_metric(mesh, np.full(3, 0.3), SolverOptions(init=PolyhedralMetric([1, 1, 3])))


def test_options_validation():
    with pytest.raises(ValueError):
        SolverOptions(backtrack=1.5)
    with pytest.raises(ValueError):
        SolverOptions(tol=0)
    with pytest.raises(ValueError):
        SolverOptions(method="bfgs")


def test_report_json_roundtrip(rng):
    import json

    from cotmetric.recover import report_json

    mesh, x = shapes.tetrahedron()
    d = induced_metric(mesh, x)
    rep = recover_metric(mesh, cotangent_weights(mesh, d))
    data = json.loads(report_json(rep, reference=d))
    assert data["converged"] is True
    assert data["deviation"] <= 1e-12
    assert set(data) >= {"iterations", "gradient_norm", "energy_trace", "scale"}
