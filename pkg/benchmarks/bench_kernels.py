"""Time the float kernels: numba vs numpy, and float vs exact rotation counts.

Run: python benchmarks/bench_kernels.py [--samples N] [--n-iter N]
"""
import argparse
import time

import numpy as np

from lorenz_lab import _kernels
from lorenz_lab.lorenzmap import mod_one
from lorenz_lab.numberfield import field_new
from lorenz_lab.rotation import float_params


def timed(fn, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--n-iter", type=int, default=5000)
    ap.add_argument("--grid", type=int, default=100_000)
    args = ap.parse_args()

    K = field_new([-1, -1, 0, 0, 1], [1, 2])
    b = K.gen
    f = mod_one(K, b, 1 - 1 / b)
    params = float_params(f)
    xs = np.random.default_rng(0).random(args.samples)
    cps = np.array([args.n_iter // 2, args.n_iter], dtype=np.int64)

    print(f"numba available: {_kernels.USING_NUMBA}")
    if _kernels.USING_NUMBA:
        _kernels.rotation_counts(xs[:2], *params, cps)  # compile
        _kernels.iterate_with_words(xs[:2], *params, 3)
        t_nb, a = timed(_kernels.rotation_counts, xs, *params, cps)
        print(f"rotation_counts numba : {t_nb * 1e3:9.2f} ms")
    t_np, b_ = timed(_kernels.rotation_counts_numpy, xs, *params, cps)
    print(f"rotation_counts numpy : {t_np * 1e3:9.2f} ms")
    if _kernels.USING_NUMBA:
        print(f"  agree: {bool((a == b_).all())}, speedup x{t_np / t_nb:.1f}")

    for n in (2, 4, 6):
        t, roots = timed(_kernels.grid_periodic_points, *params, n, args.grid, repeat=1)
        print(f"grid_periodic_points n={n}: {t * 1e3:9.2f} ms ({len(roots)} roots)")


if __name__ == "__main__":
    main()
