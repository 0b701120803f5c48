#!/usr/bin/env python3
"""Benchmark the LCS kernel: numba @njit vs the pure-NumPy fallback.

The kernel dominates corpus-scale grouping (one table per sentence pair),
so this is the comparison the GENDERALT_NO_NUMBA flag trades on.

Usage: python3 benchmarks/bench_lcs.py [--pairs 2000] [--len 40]
"""

import argparse
import random
import statistics
import time

import numpy as np

from genderalt import _kernels


def synth_pairs(n_pairs: int, length: int, seed: int = 0):
    """Masculine/feminine-style pairs: mostly shared tokens, a few diffs."""
    rng = random.Random(seed)
    pairs = []
    for _ in range(n_pairs):
        base = [rng.randrange(500) for _ in range(length)]
        other = list(base)
        for _ in range(rng.randint(1, max(1, length // 8))):
            pos = rng.randrange(length)
            other[pos] = 500 + rng.randrange(50)
        pairs.append(
            (
                np.asarray(base, dtype=np.int32),
                np.asarray(other, dtype=np.int32),
            )
        )
    return pairs


def bench(fn, pairs, repeats: int = 3):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        for a, b in pairs:
            fn(a, b)
        times.append(time.perf_counter() - start)
    return min(times), statistics.mean(times)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--pairs", type=int, default=2000)
    parser.add_argument("--len", dest="length", type=int, default=40)
    args = parser.parse_args()

    pairs = synth_pairs(args.pairs, args.length)

    candidates = [("numpy fallback", _kernels.lcs_suffix_table_numpy)]
    if _kernels.lcs_suffix_table_numba is not None:
        _kernels.lcs_suffix_table_numba(pairs[0][0], pairs[0][1])  # JIT warmup
        candidates.append(("numba @njit", _kernels.lcs_suffix_table_numba))
    else:
        print("numba unavailable or disabled (GENDERALT_NO_NUMBA); "
              "benchmarking the fallback only")

    print(f"{args.pairs} pairs of length {args.length}, best of 3 runs\n")
    results = {}
    for name, fn in candidates:
        best, mean = bench(fn, pairs)
        results[name] = best
        rate = args.pairs / best
        print(f"{name:<16} best {best:.3f}s  mean {mean:.3f}s  ({rate:,.0f} pairs/s)")
    if len(results) == 2:
        speedup = results["numpy fallback"] / results["numba @njit"]
        print(f"\nnumba speedup over fallback: {speedup:.1f}x")


if __name__ == "__main__":
    main()
