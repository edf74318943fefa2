#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure backend.

Runs the three hot loops (prime sieve, multiplicative expansion, bounded
product counting) on medium sizes with both backends and prints a table.
Results are checked for equality before timing is reported.

Usage: python scripts/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

from malle import kernels
from malle.abgroup import FiniteAbelianGroup
from malle.counting import HomCounter


def timed(fn, *args, repeats=3):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return out, best


def bench(quick: bool) -> None:
    backends = kernels.backends()
    if len(backends) < 2:
        print("only one backend available:", backends)

    sieve_n = 10 ** 6 if quick else 10 ** 7
    expand_n = 10 ** 6 if quick else 10 ** 7
    count_x = 10 ** 6 if quick else 10 ** 7

    rows = []

    impls = {name: kernels.load(name) for name in backends}

    results = {}
    for name, impl in impls.items():
        out, dt = timed(impl.primes_up_to, sieve_n)
        results[name] = out
        rows.append((f"primes_up_to({sieve_n:.0e})", name, dt, len(out)))
    if len(results) == 2:
        a, b = results.values()
        assert np.array_equal(a, b), "sieve mismatch between backends"

    primes = impls[backends[0]].primes_up_to(expand_n)
    kmaxes = np.ones(len(primes), dtype=np.int64)
    flat = np.ones(len(primes), dtype=np.int64)
    results = {}
    for name, impl in impls.items():
        out, dt = timed(impl.expand_multiplicative_int, expand_n, primes,
                        kmaxes, flat, repeats=2)
        results[name] = out
        rows.append((f"expand squarefree({expand_n:.0e})", name, dt,
                     int(out.sum())))
    if len(results) == 2:
        a, b = results.values()
        assert np.array_equal(a, b), "expansion mismatch between backends"

    counter = HomCounter(FiniteAbelianGroup([2]))
    offsets, values, counts = counter.place_items("disc", count_x)
    grid = np.array(sorted({10 ** k for k in range(2, len(str(count_x)))} |
                           {count_x}), dtype=np.int64)
    results = {}
    for name, impl in impls.items():
        out, dt = timed(impl.bounded_products_grid, offsets, values, counts,
                        grid, repeats=2)
        results[name] = out
        rows.append((f"bounded_products(C2, {count_x:.0e})", name, dt,
                     int(out[-1])))
    if len(results) == 2:
        a, b = results.values()
        assert np.array_equal(a, b), "count mismatch between backends"

    width = max(len(r[0]) for r in rows) + 2
    print(f"{'kernel':<{width}}{'backend':<10}{'best (s)':>10}  result")
    for label, name, dt, result in rows:
        print(f"{label:<{width}}{name:<10}{dt:>10.3f}  {result}")

    by_label: dict = {}
    for label, name, dt, _ in rows:
        by_label.setdefault(label, {})[name] = dt
    if len(backends) == 2:
        print()
        for label, times in by_label.items():
            speedup = times["pure"] / times["compiled"]
            print(f"{label:<{width}}compiled is {speedup:5.1f}x faster")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true", help="smaller sizes")
    bench(ap.parse_args().quick)
