"""Recover a metric, up to scale, from prescribed cotangent edge weights."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .energy import assemble_gradient, assemble_hessian, energy_value
from .mesh import MeshError, connected_components, double_cover
from .metric import (
    InadmissibleMetricError,
    PolyhedralMetric,
    UCoordinates,
    as_u_array,
    from_u,
    is_admissible,
    normalize,
    project_tangent,
)

logger = logging.getLogger(__name__)

TRIANGLE_ANGLE_TOL = 1e-8
COPY_AGREEMENT_TOL = 1e-8
MAX_BACKTRACKS = 60


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-10
    max_iters: int = 100
    backtrack: float = 0.5
    armijo: float = 1e-4
    slack: float = 1e-10
    residual_tol: float = 1e-8
    init: object = None
    method: str = "newton"

    def __post_init__(self):
        if not (self.tol > 0 and self.max_iters > 0 and self.armijo > 0 and self.slack > 0
                and self.residual_tol > 0):
            raise ValueError("solver tolerances and limits must be positive")
        if not 0 < self.backtrack < 1:
            raise ValueError("backtracking factor must lie in (0, 1)")
        if self.method not in ("newton", "gradient"):
            raise ValueError(f"unknown method {self.method!r}")


@dataclass(frozen=True, eq=False)
class SolveReport:
    converged: bool
    iterations: int
    gradient_norm: float
    energy_trace: list
    u: UCoordinates
    gradient_trace: list = field(default_factory=list)
    message: str = ""
    residual: float = float("nan")

    @property
    def metric(self):
        return from_u(self.u)

    def to_dict(self):
        return {
            "converged": self.converged,
            "iterations": self.iterations,
            "gradient_norm": self.gradient_norm,
            "energy_trace": list(self.energy_trace),
            "gradient_trace": list(self.gradient_trace),
            "message": self.message,
            "residual": self.residual,
        }


def solve_triangle(cotangents):
    """Side lengths of a triangle from its three angle cotangents.

    Angles come from ``atan2(1, cot)`` (always in ``(0, pi)``); sides follow
    the law of sines, scaled to a perimeter of 3.
    """
    c = np.asarray(cotangents, dtype=np.float64).ravel()
    if c.shape != (3,):
        raise ValueError("expected three cotangents")
    theta = np.arctan2(1.0, c)
    if abs(theta.sum() - np.pi) > TRIANGLE_ANGLE_TOL:
        raise ValueError(
            f"inconsistent cotangent triple: angles sum to {theta.sum():.12g}, not pi"
        )
    s = np.sin(theta)
    return 3.0 * s / s.sum()


class ScalingReport(NamedTuple):
    scale: float
    deviation: float


def verify_scaling(recovered, reference):
    """Best scale factor (median ratio) and max relative deviation from it."""
    a = recovered.lengths if isinstance(recovered, PolyhedralMetric) else np.asarray(recovered, float)
    b = reference.lengths if isinstance(reference, PolyhedralMetric) else np.asarray(reference, float)
    if a.shape != b.shape:
        raise ValueError(f"edge counts differ: {len(a)} vs {len(b)}")
    if np.any(b == 0):
        raise ValueError("reference metric has a zero length")
    ratio = a / b
    scale = float(np.median(ratio))
    return ScalingReport(scale, float(np.max(np.abs(ratio / scale - 1.0))))


def _kkt_step(H, g):
    """Newton step on ``sum(delta) == 0``: ``[H 1; 1^T 0][delta; nu] = [-g; 0]``."""
    m = H.shape[0]
    ones = sp.csr_matrix(np.ones((m, 1)))
    rhs = np.concatenate([-g, [0.0]])
    K = sp.bmat([[H, ones], [ones.T, None]], format="csc")
    try:
        lu = _factor(K)
    except RuntimeError:
        reg = 1e-12 * H.diagonal().sum() / m
        logger.debug("singular KKT matrix, adding %.3g I", reg)
        K = sp.bmat([[H + reg * sp.identity(m), ones], [ones.T, None]], format="csc")
        lu = _factor(K)
    sol = lu.solve(rhs)
    # one step of iterative refinement recovers accuracy lost to weak pivoting
    sol += lu.solve(rhs - K @ sol)
    return sol[:m]


def _factor(K):
    # The KKT matrix is symmetric; a symmetric ordering with mild threshold
    # pivoting keeps fill-in several times lower than the default
    # column ordering with full partial pivoting.
    return spla.splu(
        K,
        permc_spec="MMD_AT_PLUS_A",
        diag_pivot_thresh=0.1,
        options={"SymmetricMode": True},
    )


def _initial_u(mesh, init, slack):
    m = mesh.edge_count
    if init is None:
        u0 = np.ones(m)
    elif isinstance(init, PolyhedralMetric):
        u0 = 0.5 * init.lengths**2
    else:
        u0 = as_u_array(init)
    if len(u0) != m:
        raise ValueError(f"initial metric has {len(u0)} edges, mesh has {m}")
    u0 = normalize(u0, mesh).u
    res = is_admissible(u0, mesh, slack)
    if not res:
        raise InadmissibleMetricError(res.face, f"initial metric is inadmissible at face {res.face}")
    return u0


def recover_metric(mesh, target, opts=None, callback=None):
    """Minimize the energy on ``sum(u) == m`` by projected Newton.

    Each iteration solves the equality-constrained Newton system and
    backtracks until the trial point is admissible (with slack) and the
    energy decreases sufficiently. Stops when the tangential gradient
    ``max |P (target - w(u))|`` is at most ``opts.tol``.

    A stationary point only realizes the target when the full residual
    ``max |target - w(u)|`` also vanishes (within ``opts.residual_tol``
    relative to ``max(1, max |target|)``); otherwise the target differs from
    every realizable weight vector by a constant offset and the report says
    so with ``converged=False``.

    ``callback(iteration, u)`` is called with every iterate, including the
    starting point.
    """
    opts = opts or SolverOptions()
    target = np.asarray(target, dtype=np.float64)
    if len(target) != mesh.edge_count:
        raise ValueError(f"expected {mesh.edge_count} target weights, got {len(target)}")
    if connected_components(mesh) != 1:
        raise MeshError("metric recovery requires a connected mesh")

    u = _initial_u(mesh, opts.init, opts.slack)
    energy = energy_value(mesh, u, target)
    energies = [energy]
    norms = []
    converged = False
    message = "max iterations reached"
    it = 0
    while True:
        if callback is not None:
            callback(it, u.copy())
        g = assemble_gradient(mesh, u, target)
        pg = project_tangent(g)
        norm = float(np.max(np.abs(pg)))
        norms.append(norm)
        logger.debug("iter %d  |Pg| = %.3e  E = %.16g", it, norm, energy)
        if norm <= opts.tol:
            residual = float(np.max(np.abs(g)))
            if residual <= opts.residual_tol * max(1.0, float(np.max(np.abs(target)))):
                converged = True
                message = "converged"
            else:
                message = f"stationary but target not realizable (constant offset {g.mean():.6g})"
            break
        if it >= opts.max_iters:
            break

        delta = None
        if opts.method == "newton":
            delta = _kkt_step(assemble_hessian(mesh, u), g)
            if not np.all(np.isfinite(delta)) or g @ delta >= 0:
                delta = None
        if delta is None:
            delta = -pg
        slope = float(g @ delta)

        s = 1.0
        accepted = None
        for _ in range(MAX_BACKTRACKS):
            trial = u + s * delta
            if np.all(trial > 0) and is_admissible(trial, mesh, opts.slack):
                change = energy_value(mesh, trial, target, u_ref=u)
                if change <= opts.armijo * s * slope:
                    accepted = (trial, change)
                    break
            s *= opts.backtrack
        if accepted is None:
            message = "line search stalled"
            break
        u = normalize(accepted[0], mesh).u
        energy += accepted[1]
        energies.append(energy)
        it += 1

    return SolveReport(
        converged=converged,
        iterations=it,
        gradient_norm=norms[-1],
        energy_trace=energies,
        u=UCoordinates(u, normalized=True),
        gradient_trace=norms,
        message=message,
        residual=float(np.max(np.abs(g))),
    )


def recover_via_double_cover(mesh, target, opts=None):
    """Recover on the closed double cover and restrict to the original mesh.

    Interior edges appear twice on the double and keep their target;
    a boundary edge becomes interior to the double with one angle from each
    sheet, so its target is doubled. The two copies of every interior edge
    must come back equal.
    """
    opts = opts or SolverOptions()
    target = np.asarray(target, dtype=np.float64)
    dc = double_cover(mesh)
    m2 = dc.mesh.edge_count
    target2 = np.zeros(m2)
    for e, covers in dc.edge_correspondence.items():
        target2[covers] = target[e] * (2.0 if len(covers) == 1 else 1.0)
    init2 = None
    if opts.init is not None:
        u0 = _initial_u(mesh, opts.init, opts.slack)
        init2 = np.empty(m2)
        for e, covers in dc.edge_correspondence.items():
            init2[covers] = u0[e]
    opts2 = SolverOptions(
        tol=opts.tol, max_iters=opts.max_iters, backtrack=opts.backtrack,
        armijo=opts.armijo, slack=opts.slack, residual_tol=opts.residual_tol,
        init=init2, method=opts.method,
    )
    report = recover_metric(dc.mesh, target2, opts2)
    u2 = report.u.u
    u = np.empty(mesh.edge_count)
    for e, covers in dc.edge_correspondence.items():
        vals = u2[covers]
        if len(vals) == 2 and abs(vals[0] - vals[1]) > COPY_AGREEMENT_TOL * max(vals):
            raise RuntimeError(
                f"copies of edge {e} disagree on the double cover: {vals[0]!r} vs {vals[1]!r}"
            )
        u[e] = vals.mean()
    return SolveReport(
        converged=report.converged,
        iterations=report.iterations,
        gradient_norm=report.gradient_norm,
        energy_trace=report.energy_trace,
        u=normalize(u, mesh),
        gradient_trace=report.gradient_trace,
        message=report.message,
        residual=report.residual,
    )


def report_json(report, reference=None):
    out = report.to_dict()
    if reference is not None:
        sc = verify_scaling(report.metric, reference)
        out["scale"] = sc.scale
        out["deviation"] = sc.deviation
    return json.dumps(out, indent=2)
