"""Compare the numba and numpy kernels on F_p workloads of guessing size.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Also times one end-to-end modular guess (C(n)/F(n) data, k=6) on each path.
"""
import argparse
import time

import numpy as np

from dalgguess import GuessConfig, builtin_terms, guess_sequence, kernels

P = 2147483647


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def workloads(rng):
    a = rng.integers(0, P, 400, dtype=np.int64)
    b = rng.integers(0, P, 400, dtype=np.int64)
    M = rng.integers(0, P, (240, 200), dtype=np.int64)
    A = rng.integers(0, P, (300, 200), dtype=np.int64)
    B = rng.integers(0, P, (200, 8), dtype=np.int64)
    seq = builtin_terms("catalan_over_fib", 175)
    cfg = GuessConfig(kind="sequence", k=6)
    return {
        "conv 400x400": lambda: kernels.conv_mod(a, b, 400, P),
        "rref 240x200": lambda: kernels.rref_mod(M, P),
        "matmul 300x200x8": lambda: kernels.matmul_mod(A, B, P),
        "guess_sequence mod p": lambda: guess_sequence(seq, cfg, modulus=5003),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not kernels.HAVE_NUMBA:
        print("numba unavailable; only the numpy path can run")
    rng = np.random.default_rng(0)
    jobs = workloads(rng)
    rows = []
    for name, fn in jobs.items():
        times = {}
        for label, flag in (("numpy", False), ("numba", True)):
            if flag and not kernels.HAVE_NUMBA:
                continue
            kernels.use_numba(flag)
            fn()  # warm-up, includes JIT compilation
            times[label] = best_of(fn, args.repeat)
        rows.append((name, times))
    kernels.use_numba(True)
    print(f"{'workload':<24}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, t in rows:
        nb = t.get("numba")
        sp = f"{t['numpy'] / nb:9.1f}x" if nb else "      n/a"
        print(f"{name:<24}{t['numpy'] * 1e3:12.2f}{(nb or float('nan')) * 1e3:12.2f}{sp}")


if __name__ == "__main__":
    main()
