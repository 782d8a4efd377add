#!/usr/bin/env python3
"""Benchmark the numba-compiled kernels against their pure-Python fallbacks.

The compiled and uncompiled versions of each kernel live side by side
(``kernel`` vs ``kernel.py_func``), so both paths run in one process.
Setting BERNSEG_NO_NUMBA=1 before launching makes both columns run the
fallback, which is a quick way to sanity-check that flag.

Usage:
    python benchmarks/benchmark_kernels.py [--n 2000] [--rate 0.1] [--repeats 3]
"""

import argparse
import time

import numpy as np

from bernseg._accel import ENV_FLAG, NUMBA_ENABLED
from bernseg import kernels


def _sweep_inputs(n, rate, seed):
    rng = np.random.default_rng(seed)
    seq = (rng.random(n) < rate).astype(np.int64)
    seq[0] = 1  # guarantee at least one 1
    one_pos = np.flatnonzero(seq == 1).astype(np.int64) + 1
    cum1 = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(seq, out=cum1[1:])
    return one_pos, cum1


def _time(func, args, repeats):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        out = func(*args)
        best = min(best, time.perf_counter() - start)
    return best, out


def bench_sweep(n, rate, repeats):
    one_pos, cum1 = _sweep_inputs(n, rate, seed=1)
    args = (one_pos, cum1, n, 2.0)
    kernels.sweep_best_partition(*args)  # warm the JIT
    t_fast, out_fast = _time(kernels.sweep_best_partition, args, repeats)
    t_py, out_py = _time(kernels.sweep_best_partition.py_func, args, repeats)
    assert np.array_equal(out_fast[0], out_py[0]) and out_fast[2] == out_py[2]
    return "merge sweep", one_pos.size, t_fast, t_py


def bench_ward(n, v, repeats):
    rng = np.random.default_rng(2)
    mat = np.repeat(rng.random((6, v)), n // 6 + 1, axis=0)[:n]
    mat += 0.05 * rng.standard_normal(mat.shape)
    args = (mat, 3)
    kernels.ward_adjacent_merge(*args)
    t_fast, out_fast = _time(kernels.ward_adjacent_merge, args, repeats)
    t_py, out_py = _time(kernels.ward_adjacent_merge.py_func, args, repeats)
    assert np.array_equal(out_fast[0], out_py[0])
    return "adjacent ward", n, t_fast, t_py


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=2000, help="sequence/matrix length")
    parser.add_argument("--rate", type=float, default=0.1, help="ones rate for the sweep")
    parser.add_argument("--v", type=int, default=50, help="matrix columns for ward")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    print(f"numba enabled: {NUMBA_ENABLED} (set {ENV_FLAG}=1 to force the fallback)")
    print(f"{'kernel':<15}{'size':>8}{'compiled (s)':>14}{'fallback (s)':>14}{'speedup':>9}")
    for row in (
        bench_sweep(args.n, args.rate, args.repeats),
        bench_ward(args.n, args.v, args.repeats),
    ):
        name, size, t_fast, t_py = row
        print(f"{name:<15}{size:>8}{t_fast:>14.4f}{t_py:>14.4f}{t_py / t_fast:>8.1f}x")


if __name__ == "__main__":
    main()
