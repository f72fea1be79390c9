#!/usr/bin/env python3
"""Compare the numba and pure-numpy kernels on the hot paths.

    python benchmarks/bench_kernels.py [--repeat 5] [--sizes 4 6 8]

Numba kernels are called once before timing so that compilation (or loading
from the on-disk cache) is excluded. Results of both backends are also
compared so a speedup never hides a wrong answer.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from collphase.kernels import _numba, numpy_kernels
from collphase.permgroup import permutation_table


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases(n, rng):
    w = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2 * n)
    table = np.ascontiguousarray(permutation_table(n))
    x_rows = np.arange(table.shape[0], dtype=np.int64)
    jvals = rng.normal(size=table.shape[0]) + 1j * rng.normal(size=table.shape[0])
    yield "permanent_ryser", (w,)
    yield "hadamard_permanents", (w, table)
    if n <= 7:
        yield "direct_double_sum", (w, table, x_rows, jvals)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[4, 6, 7, 8])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    print(f"{'kernel':<22}{'n':>3}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>9}{'max |diff|':>12}")
    for n in args.sizes:
        for name, call_args in cases(n, rng):
            fast, slow = getattr(_numba, name), getattr(numpy_kernels, name)
            fast(*call_args)  # compile / load cache
            t_fast, r_fast = best_of(lambda: fast(*call_args), args.repeat)
            t_slow, r_slow = best_of(lambda: slow(*call_args), args.repeat)
            diff = float(np.max(np.abs(np.asarray(r_fast) - np.asarray(r_slow))))
            print(f"{name:<22}{n:>3}{t_fast:>12.2e}{t_slow:>12.2e}{t_slow / t_fast:>9.1f}{diff:>12.1e}")


if __name__ == "__main__":
    main()
