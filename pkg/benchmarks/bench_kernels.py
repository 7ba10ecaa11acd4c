"""Compare the compiled and pure-Python kernel backends.

Usage: python3 benchmarks/bench_kernels.py [--n 200] [--repeat 5]
"""
import argparse
import time

import numpy as np

from cotmetric import kernels, shapes
from cotmetric.energy import assemble_hessian
from cotmetric.laplace import cotangent_weights
from cotmetric.mesh import induced_metric
from cotmetric.metric import PolyhedralMetric
from cotmetric.recover import SolverOptions, recover_metric


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=200, help="torus resolution per direction")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    mesh, x = shapes.torus(args.n, args.n)
    d = induced_metric(mesh, x).lengths
    u = 0.5 * d**2
    uf = u[mesh.face_edge_index]
    target = cotangent_weights(mesh, d)
    rng = np.random.default_rng(0)
    d_start = d * (1 + 0.01 * rng.uniform(-1, 1, len(d)))
    print(f"torus {args.n}x{args.n}: {mesh.face_count} faces, {mesh.edge_count} edges")

    cases = {
        "face_cotangents": lambda: kernels.face_cotangents(uf),
        "face_hessians": lambda: kernels.face_hessians(uf),
        "assemble_hessian": lambda: assemble_hessian(mesh, u),
    }
    backends = kernels.available_backends()
    previous = kernels.get_backend()
    results = {}
    try:
        for name in backends:
            kernels.set_backend(name)
            for case, fn in cases.items():
                results[case, name] = best_of(fn, args.repeat)
            t0 = time.perf_counter()
            rep = recover_metric(mesh, target, SolverOptions(init=PolyhedralMetric(d_start)))
            results["recover", name] = time.perf_counter() - t0
            print(f"  {name}: recover converged={rep.converged} in {rep.iterations} iterations")
    finally:
        kernels.set_backend(previous)

    print(f"{'case':<18}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) == 2 else ""))
    for case in list(cases) + ["recover"]:
        row = f"{case:<18}" + "".join(f"{results[case, b] * 1e3:>10.2f}ms" for b in backends)
        if len(backends) == 2:
            row += f"{results[case, 'python'] / results[case, 'compiled']:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
