"""Pure-Python/numpy implementations of the hot kernels.

Mirrors malle._fastkernels exactly; malle.kernels picks one at import time.
All functions are deterministic and exact over int64 (callers guard overflow).
"""

from __future__ import annotations

from bisect import bisect_right

import numpy as np

BACKEND = "pure"


def primes_up_to(n: int) -> np.ndarray:
    """Ascending primes <= n as int64."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def smallest_prime_factors(n: int) -> np.ndarray:
    """spf[k] = least prime factor of k (spf[0] = spf[1] = 0)."""
    spf = np.zeros(n + 1, dtype=np.int64)
    if n >= 2:
        ar = np.arange(n + 1, dtype=np.int64)
        spf[2::2] = 2
        for p in range(3, int(n ** 0.5) + 1, 2):
            if spf[p] == 0:
                block = spf[p * p::p]
                block[block == 0] = p
                spf[p * p::p] = block
        odd = spf[3::2] == 0
        spf[3::2] = np.where(odd, ar[3::2], spf[3::2])
    return spf


def expand_multiplicative_int(nmax: int, primes, kmaxes, coeffs_flat) -> np.ndarray:
    """Coefficients of prod_p (1 + sum_k c_p[k] x_p^k) up to index nmax.

    Per-prime coefficients sit flat in coeffs_flat, kmaxes[i] entries for
    primes[i] covering exponents 1..kmaxes[i]; constant terms are all 1.
    """
    vals = np.zeros(nmax + 1, dtype=np.int64)
    if nmax >= 1:
        vals[1] = 1
    pos = 0
    for p, kmax in zip(primes, kmaxes):
        p = int(p)
        kmax = int(kmax)
        cs = coeffs_flat[pos:pos + kmax]
        pos += kmax
        if p > nmax:
            continue
        pk = p
        for k in range(1, kmax + 1):
            if pk > nmax:
                break
            c = int(cs[k - 1])
            if c != 0:
                m = np.arange(1, nmax // pk + 1, dtype=np.int64)
                m = m[m % p != 0]
                vals[m * pk] += vals[m] * c
            pk *= p
    return vals


def bounded_products_grid(offsets, values_flat, counts_flat, grid) -> np.ndarray:
    """Weighted count of sub-limit products of at most one item per place.

    Places are given by offsets into the flat (value, count) arrays and must
    be ordered by ascending minimal value.  Returns, for each ascending grid
    boundary X, the total count of products with value < X (the empty product
    counts 1).
    """
    grid = list(map(int, grid))
    nplaces = len(offsets) - 1
    limit = grid[-1] if grid else 0
    hist = [0] * (len(grid) + 1)

    starts = [int(offsets[i]) for i in range(nplaces + 1)]
    vals = [int(v) for v in values_flat]
    cnts = [int(c) for c in counts_flat]
    suffmin = _suffix_minima(starts, vals, nplaces, limit)

    def record(v, c):
        hist[bisect_right(grid, v)] += c

    # compare via the quotient cap so products never form above the limit
    def dfs(i, v, c):
        cap = (limit - 1) // v
        for j in range(i, nplaces):
            if suffmin[j] > cap:
                break
            for idx in range(starts[j], starts[j + 1]):
                if vals[idx] <= cap:
                    w = v * vals[idx]
                    wc = c * cnts[idx]
                    record(w, wc)
                    dfs(j + 1, w, wc)

    if limit > 1:
        record(1, 1)
        dfs(0, 1, 1)
    out = np.zeros(len(grid), dtype=np.int64)
    run = 0
    for k in range(len(grid)):
        run += hist[k]
        out[k] = run
    return out


def _suffix_minima(starts, vals, nplaces, limit):
    """suffmin[j] = least item value at any place >= j (limit+1 when none)."""
    suffmin = [limit + 1] * (nplaces + 1)
    for j in range(nplaces - 1, -1, -1):
        seg = vals[starts[j]:starts[j + 1]]
        own = min(seg) if seg else limit + 1
        suffmin[j] = min(own, suffmin[j + 1])
    return suffmin


def bounded_products_exact(offsets, values_flat, counts_flat, limit: int):
    """All sub-limit products as (values, counts) arrays, unsorted."""
    nplaces = len(offsets) - 1
    starts = [int(offsets[i]) for i in range(nplaces + 1)]
    vals = [int(v) for v in values_flat]
    cnts = [int(c) for c in counts_flat]
    suffmin = _suffix_minima(starts, vals, nplaces, limit)

    out_v: list[int] = []
    out_c: list[int] = []

    def dfs(i, v, c):
        cap = (limit - 1) // v
        for j in range(i, nplaces):
            if suffmin[j] > cap:
                break
            for idx in range(starts[j], starts[j + 1]):
                if vals[idx] <= cap:
                    w = v * vals[idx]
                    wc = c * cnts[idx]
                    out_v.append(w)
                    out_c.append(wc)
                    dfs(j + 1, w, wc)

    if limit > 1:
        out_v.append(1)
        out_c.append(1)
        dfs(0, 1, 1)
    return (np.asarray(out_v, dtype=np.int64), np.asarray(out_c, dtype=np.int64))
