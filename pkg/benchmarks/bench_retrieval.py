#!/usr/bin/env python3
"""Benchmark the compiled MMR kernel against the numpy fallback.

Times greedy retrieval over stores of increasing size with the default
operating point (k=20, lambda=0.5, dim=256) and prints a comparison table.

    python benchmarks/bench_retrieval.py [--sizes 1000,5000,20000] [--repeats 20]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from logexplain.kernels import _mmr_py

try:
    from logexplain.kernels import _mmr as _mmr_cy
except ImportError:
    _mmr_cy = None


def bench(select, query, matrix, k, lam, repeats):
    select(query, matrix, k, lam)  # warmup
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        select(query, matrix, k, lam)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="1000,5000,20000")
    parser.add_argument("--dim", type=int, default=256)
    parser.add_argument("--k", type=int, default=20)
    parser.add_argument("--lam", type=float, default=0.5)
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()

    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(42)

    print(f"dim={args.dim} k={args.k} lambda={args.lam} (best of {args.repeats})")
    header = f"{'n':>8}  {'numpy (ms)':>12}  {'cython (ms)':>12}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        matrix = rng.normal(size=(n, args.dim))
        matrix /= np.linalg.norm(matrix, axis=1, keepdims=True)
        matrix = np.ascontiguousarray(matrix)
        query = rng.normal(size=args.dim)
        query = np.ascontiguousarray(query / np.linalg.norm(query))

        t_py = bench(_mmr_py.mmr_select, query, matrix, args.k, args.lam, args.repeats)
        if _mmr_cy is not None:
            t_cy = bench(_mmr_cy.mmr_select, query, matrix, args.k, args.lam, args.repeats)
            sel_py = _mmr_py.mmr_select(query, matrix, args.k, args.lam)
            sel_cy = list(_mmr_cy.mmr_select(query, matrix, args.k, args.lam))
            agree = "" if sel_py == sel_cy else "  (!! selections differ)"
            print(
                f"{n:>8}  {t_py * 1e3:>12.3f}  {t_cy * 1e3:>12.3f}  "
                f"{t_py / t_cy:>7.2f}x{agree}"
            )
        else:
            print(f"{n:>8}  {t_py * 1e3:>12.3f}  {'(not built)':>12}  {'-':>8}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
