"""Timing comparison of the two Jacobi elliptic kernels.

The compiled per-point kernel and the vectorized array kernel compute the
same descending Landen recursion; this script times both over a range of
batch sizes and prints the speedup.  Run directly:

    python3 benchmarks/bench_backends.py --sizes 1e4,1e5,1e6 --repeats 5
"""

import argparse
import time

import numpy as np

from qes.backends import jacobi_numba, jacobi_numpy


def time_kernel(kernel, x, k, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        kernel(x, k)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1e4,1e5,1e6",
                    help="comma-separated batch sizes")
    ap.add_argument("--repeats", type=int, default=5,
                    help="timing repeats; best of N is reported")
    ap.add_argument("--modulus", type=float, default=0.7)
    args = ap.parse_args(argv)

    sizes = [int(float(s)) for s in args.sizes.split(",")]
    k = args.modulus
    rng = np.random.default_rng(42)

    if jacobi_numba is None:
        print("numba kernel unavailable; nothing to compare")
        return 1

    # trigger the JIT compile outside the timed region
    jacobi_numba(np.linspace(0.0, 1.0, 8), k)

    print(f"{'size':>10}  {'numpy (ms)':>12}  {'numba (ms)':>12}  {'speedup':>8}")
    for n in sizes:
        x = rng.uniform(-8.0, 8.0, n)
        t_np = time_kernel(jacobi_numpy, x, k, args.repeats)
        t_nb = time_kernel(jacobi_numba, x, k, args.repeats)
        a = np.array(jacobi_numpy(x, k))
        b = np.array(jacobi_numba(x, k))
        worst = np.abs(a - b).max()
        if worst > 1e-12:
            print(f"kernels disagree by {worst:.3e} at size {n}")
            return 1
        print(f"{n:>10}  {1e3 * t_np:>12.3f}  {1e3 * t_nb:>12.3f}  {t_np / t_nb:>8.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
