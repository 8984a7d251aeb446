"""Benchmark the compiled transport kernels against the pure-Python fallback.

Run:  python3 benchmarks/bench_kernels.py [n] [repeats]
"""

import sys
import time

import numpy as np

from creasefold._kernels import pyfallback

try:
    from creasefold._kernels import _native as native
except ImportError:
    native = None


def time_call(fn, args, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 401
    repeats = int(sys.argv[2]) if len(sys.argv) > 2 else 25
    rng = np.random.default_rng(0)
    sp = 1.0 + 0.3 * rng.random(n)
    cv = rng.normal(scale=0.8, size=n)
    tau = rng.normal(scale=0.4, size=n)
    mid = lambda a: 0.5 * (a[:-1] + a[1:])
    h = 0.01

    cases = {
        "rk4_frame_2d": (sp, mid(sp), cv, mid(cv), h,
                         np.zeros(2), np.array([1.0, 0.0])),
        "rk4_frame_3d": (sp, mid(sp), cv, mid(cv), tau, mid(tau), h,
                         np.zeros(3), np.array([1.0, 0.0, 0.0]),
                         np.array([0.0, 1.0, 0.0]), np.array([0.0, 0.0, 1.0])),
        "rk4_linear": (cv, mid(cv), tau, mid(tau), h, 0.3),
    }

    print(f"n = {n}, best of {repeats}")
    header = f"{'kernel':14s} {'python':>12s} {'native':>12s} {'speedup':>9s}"
    print(header)
    print("-" * len(header))
    for name, args in cases.items():
        t_py = time_call(getattr(pyfallback, name), args, repeats)
        if native is None:
            print(f"{name:14s} {t_py * 1e6:10.1f}us {'n/a':>12s} {'n/a':>9s}")
            continue
        t_na = time_call(getattr(native, name), args, repeats)
        print(f"{name:14s} {t_py * 1e6:10.1f}us {t_na * 1e6:10.1f}us "
              f"{t_py / t_na:8.1f}x")


if __name__ == "__main__":
    main()
