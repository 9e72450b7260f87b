"""Timing comparison of the numba kernels against the pure-numpy fallback.

Usage: python benchmarks/bench_kernels.py [--sizes 20,50,91,200] [--repeat 50]

The jitted path is whatever `shoaltrack.kernels` selected at import time;
run with SHOALTRACK_NO_NUMBA=1 to confirm the fallback numbers standalone.
"""

import argparse
import time

import numpy as np

from shoaltrack import kernels


def random_boxes(rng, n):
    out = np.empty((n, 4))
    out[:, :2] = rng.uniform(0, 2000, size=(n, 2))
    out[:, 2:] = rng.uniform(10, 40, size=(n, 2))
    return np.ascontiguousarray(out)


def timeit(fn, *args, repeat):
    fn(*args)  # warmup (JIT compile on the numba path)
    start = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - start) / repeat


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="20,50,91,200")
    parser.add_argument("--repeat", type=int, default=50)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(0)

    print(f"numba path enabled: {kernels.NUMBA_ENABLED}")
    header = f"{'kernel':<14} {'n':>5} {'jit/active (ms)':>16} {'fallback (ms)':>14} {'speedup':>8}"
    print(header)
    print("-" * len(header))

    for n in sizes:
        a = random_boxes(rng, n)
        b = random_boxes(rng, n)
        active = timeit(kernels.iou_matrix, a, b, repeat=args.repeat)
        fallback = timeit(kernels._iou_matrix_numpy, a, b, repeat=args.repeat)
        print(f"{'iou_matrix':<14} {n:>5} {active * 1e3:>16.3f} {fallback * 1e3:>14.3f} "
              f"{fallback / active:>7.1f}x")

    for n in sizes:
        cost = np.ascontiguousarray(rng.uniform(-1, 1, size=(n, n)))
        active = timeit(kernels.lap_min_square, cost, repeat=args.repeat)
        fallback = timeit(kernels._lap_min_square_loops, cost, repeat=args.repeat)
        print(f"{'lap_min_square':<14} {n:>5} {active * 1e3:>16.3f} {fallback * 1e3:>14.3f} "
              f"{fallback / active:>7.1f}x")


if __name__ == "__main__":
    main()
