"""Time the compiled kernels against the numpy fallback.

Run ``python benchmarks/bench_kernels.py``; prints one line per kernel with
the best-of-N wall time of each backend and the speed-up.
"""
import argparse
import timeit

import numpy as np

from deformed_boson import kernels
from deformed_boson.deformation import DeformationSpec, build_ladder_table


def cases(dim, points):
    sF = build_ladder_table(DeformationSpec.q_symmetric(1.3, level_cap=dim)).sqrt_F()
    ax = np.linspace(-8.0, 8.0, points)
    rng = np.random.default_rng(0)
    x = rng.standard_normal((points, points)) + 1j * rng.standard_normal((points, points))
    return {
        f"ladder_products D={dim}": lambda b: b.ladder_products(sF),
        f"sigma_inverse_table D={dim}": lambda b: b.sigma_inverse_table(sF),
        f"omega_field (5,2) M={points}": lambda b: b.omega_field(5, 2, ax, ax, 1.0),
        f"trapz_inner M={points}": lambda b: b.trapz_inner(x, x, 0.01),
    }


def best(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--dim", type=int, default=48)
    p.add_argument("--points", type=int, default=512)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--number", type=int, default=3)
    args = p.parse_args(argv)
    py, cy = kernels.python_backend, kernels.compiled_backend
    print(f"selected backend: {kernels.BACKEND}")
    print(f"{'kernel':34s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speed-up':>9s}")
    for name, run in cases(args.dim, args.points).items():
        tp = best(lambda: run(py), args.repeat, args.number)
        if cy is None:
            print(f"{name:34s} {tp * 1e3:12.3f} {'n/a':>12s} {'n/a':>9s}")
            continue
        tc = best(lambda: run(cy), args.repeat, args.number)
        print(f"{name:34s} {tp * 1e3:12.3f} {tc * 1e3:12.3f} {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
