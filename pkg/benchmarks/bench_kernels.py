"""Compare the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from adec import _fallback

try:
    from adec import _kernels
except ImportError:
    _kernels = None


def cases():
    rng = np.random.default_rng(0)
    for m in (1_000, 20_000):
        y = rng.uniform(-1.5, 1.5, m)
        for r in (1, 3):
            yield f"sigma_delta m={m} r={r}", "greedy_sd_real", (y, r, 0.25, 8)
    for k in (8, 32):
        Z = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        M = np.ascontiguousarray((Z + Z.conj().T) / 2)
        yield f"jacobi k={k}", "jacobi_eigh", (M, 100, 1e-15)


def best_of(fn, args, repeat):
    number = 1
    while timeit.timeit(lambda: fn(*args), number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled kernels are not built; only the fallback is available")
    print(f"{'case':<28}{'python [ms]':>14}{'cython [ms]':>14}{'speedup':>10}")
    for name, attr, fargs in cases():
        t_py = best_of(getattr(_fallback, attr), fargs, args.repeat)
        if _kernels is None:
            print(f"{name:<28}{t_py * 1e3:>14.3f}{'-':>14}{'-':>10}")
            continue
        t_cy = best_of(getattr(_kernels, attr), fargs, args.repeat)
        print(f"{name:<28}{t_py * 1e3:>14.3f}{t_cy * 1e3:>14.3f}{t_py / t_cy:>9.1f}x")


if __name__ == "__main__":
    main()
