"""Command-line interface.

Exit codes: 0 success, 1 convergence or verification failure, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import laplace
from .mesh import MeshError, connected_components, double_cover, induced_metric, load_obj, write_obj
from .metric import InadmissibleMetricError, PolyhedralMetric, read_edge_values, read_metric, write_metric
from .recover import SolverOptions, recover_metric, verify_scaling

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

log = logging.getLogger("cotmetric")


def _mesh_and_metric(args):
    mesh, positions = load_obj(args.mesh)
    if args.metric:
        metric = read_metric(args.metric, mesh)
    else:
        if len(positions) != mesh.vertex_count or mesh.vertex_count == 0:
            raise MeshError("mesh has no vertex positions and no --metric file was given")
        metric = induced_metric(mesh, positions)
    return mesh, metric


def cmd_weights(args):
    mesh, metric = _mesh_and_metric(args)
    w = laplace.cotangent_weights(mesh, metric)
    laplace.write_weights(args.output, mesh, w)
    print(f"edges {mesh.edge_count}  min weight {w.min():.17g}  max weight {w.max():.17g}")
    return EXIT_OK


def cmd_laplacian(args):
    mesh, metric = _mesh_and_metric(args)
    L = laplace.laplace_matrix(mesh, laplace.cotangent_weights(mesh, metric))
    ncomp = connected_components(mesh)
    if ncomp > 1:
        print(
            f"warning: mesh has {ncomp} connected components; the zero eigenvalue has multiplicity {ncomp}",
            file=sys.stderr,
        )
    laplace.write_laplacian(args.output, L)
    print(f"vertices {mesh.vertex_count}  nonzeros {L.nnz}")
    return EXIT_OK


def cmd_heat_kernel(args):
    if not args.t >= 0:
        raise ValueError(f"--t must be nonnegative, got {args.t}")
    mesh, metric = _mesh_and_metric(args)
    L = laplace.laplace_matrix(mesh, laplace.cotangent_weights(mesh, metric))
    K = laplace.heat_kernel(laplace.spectral_decomposition(L), args.t)
    laplace.write_heat_kernel(args.output, K, args.t)
    print(f"vertices {mesh.vertex_count}  t {args.t:.17g}")
    return EXIT_OK


def cmd_recover(args):
    mesh, _ = load_obj(args.mesh)
    target = read_edge_values(args.weights, mesh)
    init = read_metric(args.init, mesh) if args.init else None
    opts = SolverOptions(
        tol=args.tol, max_iters=args.max_iters, init=init,
        method="gradient" if args.gd else "newton",
    )
    report = recover_metric(mesh, target, opts)
    write_metric(args.output, mesh, report.metric)
    out = report.to_dict()
    if args.reference:
        sc = verify_scaling(report.metric, read_metric(args.reference, mesh))
        out["scale"] = sc.scale
        out["deviation"] = sc.deviation
    text = json.dumps(out, indent=2)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return EXIT_OK if report.converged else EXIT_FAIL


def _read_edge_table(path):
    pairs, values = [], []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            i, j = int(parts[0]), int(parts[1])
            pairs.append((min(i, j), max(i, j)))
            values.append(float(parts[2]))
    return pairs, np.array(values)


def cmd_verify(args):
    pa, a = _read_edge_table(args.metric_a)
    pb, b = _read_edge_table(args.metric_b)
    if len(a) != len(b):
        raise ValueError(f"edge counts differ: {len(a)} vs {len(b)}")
    if pa != pb and len(set(pb)) == len(pb):
        index = {p: k for k, p in enumerate(pb)}
        try:
            b = b[[index[p] for p in pa]]
        except KeyError as exc:
            raise ValueError(f"edge {exc.args[0]} of {args.metric_a} missing from {args.metric_b}") from None
    sc = verify_scaling(PolyhedralMetric(a), PolyhedralMetric(b))
    print(f"scale {sc.scale:.17g}")
    print(f"deviation {sc.deviation:.17g}")
    return EXIT_OK if sc.deviation <= args.threshold else EXIT_FAIL


def cmd_double_cover(args):
    mesh, positions = load_obj(args.mesh)
    dc = double_cover(mesh)
    pos = positions[dc.vertex_origin] if len(positions) == mesh.vertex_count else None
    write_obj(args.output, dc.mesh, pos)
    with open(args.correspondence, "w") as fh:
        for e in range(mesh.edge_count):
            fh.write(" ".join(str(k) for k in [e, *dc.edge_correspondence[e]]) + "\n")
    d = dc.mesh
    print(f"vertices {d.vertex_count}  edges {d.edge_count}  faces {d.face_count}  "
          f"euler {d.vertex_count - d.edge_count + d.face_count}")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="cotmetric", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def mesh_cmd(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("mesh", help="triangle mesh (Wavefront OBJ)")
        sp.add_argument("--metric", help="edge-length file overriding the OBJ positions")
        sp.add_argument("-o", "--output", required=True)
        sp.set_defaults(func=func)
        return sp

    mesh_cmd("weights", cmd_weights, "cotangent edge weights")
    mesh_cmd("laplacian", cmd_laplacian, "Laplace matrix (Matrix Market)")
    hk = mesh_cmd("heat-kernel", cmd_heat_kernel, "dense heat kernel K(t)")
    hk.add_argument("--t", type=float, required=True, help="diffusion time")

    rc = sub.add_parser("recover", help="recover edge lengths from edge weights")
    rc.add_argument("mesh")
    rc.add_argument("weights", help="weight file 'vi vj w'")
    rc.add_argument("-o", "--output", required=True, help="recovered metric file")
    rc.add_argument("--report", help="write the JSON report here as well")
    rc.add_argument("--tol", type=float, default=1e-10)
    rc.add_argument("--max-iters", type=int, default=100)
    rc.add_argument("--init", help="initial metric file (default: constant metric)")
    rc.add_argument("--reference", help="metric to report the scale factor against")
    rc.add_argument("--gd", action="store_true", help="gradient descent instead of Newton")
    rc.set_defaults(func=cmd_recover)

    vf = sub.add_parser("verify", help="check that two metrics differ by a scale")
    vf.add_argument("metric_a")
    vf.add_argument("metric_b")
    vf.add_argument("--threshold", type=float, default=1e-6)
    vf.set_defaults(func=cmd_verify)

    dcp = sub.add_parser("double-cover", help="closed double of a mesh with boundary")
    dcp.add_argument("mesh")
    dcp.add_argument("-o", "--output", required=True, help="doubled OBJ")
    dcp.add_argument("--correspondence", required=True,
                     help="lines 'orig_edge cover_edge [cover_edge]' (0-based edge indices)")
    dcp.set_defaults(func=cmd_double_cover)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except (MeshError, InadmissibleMetricError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
