# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: prime sieves, multiplicative expansion of Euler products,
and bounded multiplicative-product counting.  Signature-compatible with
malle._purekernels; selected by malle.kernels at import time.
"""

import numpy as np

cimport numpy as cnp

BACKEND = "compiled"


def primes_up_to(cnp.int64_t n):
    """Ascending primes <= n as int64."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] sieve = np.ones(n + 1, dtype=np.uint8)
    cdef cnp.int64_t i, j, count = 0
    sieve[0] = 0
    sieve[1] = 0
    i = 2
    while i * i <= n:
        if sieve[i]:
            j = i * i
            while j <= n:
                sieve[j] = 0
                j += i
        i += 1
    for i in range(2, n + 1):
        if sieve[i]:
            count += 1
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(count, dtype=np.int64)
    j = 0
    for i in range(2, n + 1):
        if sieve[i]:
            out[j] = i
            j += 1
    return out


def smallest_prime_factors(cnp.int64_t n):
    """spf[k] = least prime factor of k (spf[0] = spf[1] = 0)."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1] spf = np.zeros(n + 1, dtype=np.int64)
    cdef cnp.int64_t i, j
    for i in range(2, n + 1, 2):
        spf[i] = 2
    i = 3
    while i <= n:
        if spf[i] == 0:
            spf[i] = i
            j = i * i
            while j <= n:
                if spf[j] == 0:
                    spf[j] = i
                j += 2 * i
        i += 2
    return spf


def expand_multiplicative_int(cnp.int64_t nmax, primes, kmaxes, coeffs_flat):
    """Coefficients of prod_p (1 + sum_k c_p[k] x_p^k) up to index nmax."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ps = np.ascontiguousarray(primes, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ks = np.ascontiguousarray(kmaxes, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cs = np.ascontiguousarray(coeffs_flat, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] vals = np.zeros(nmax + 1, dtype=np.int64)
    cdef cnp.int64_t i, p, kmax, pos = 0, pk, k, c, m, t
    if nmax >= 1:
        vals[1] = 1
    for i in range(ps.shape[0]):
        p = ps[i]
        kmax = ks[i]
        if p > nmax:
            pos += kmax
            continue
        pk = p
        for k in range(1, kmax + 1):
            if pk > nmax:
                break
            c = cs[pos + k - 1]
            if c != 0:
                t = nmax // pk
                for m in range(1, t + 1):
                    if m % p != 0 and vals[m] != 0:
                        vals[m * pk] += vals[m] * c
            pk *= p
        pos += kmax
    return vals


def bounded_products_grid(offsets, values_flat, counts_flat, grid):
    """For each ascending grid boundary X, the weighted count of products < X."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1] starts = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] vals = np.ascontiguousarray(values_flat, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cnts = np.ascontiguousarray(counts_flat, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] gr = np.ascontiguousarray(grid, dtype=np.int64)
    cdef cnp.int64_t nplaces = starts.shape[0] - 1
    cdef cnp.int64_t ngrid = gr.shape[0]
    cdef cnp.int64_t limit = gr[ngrid - 1] if ngrid else 0
    cdef cnp.ndarray[cnp.int64_t, ndim=1] hist = np.zeros(ngrid + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] suffmin = np.empty(nplaces + 1, dtype=np.int64)
    cdef cnp.int64_t j, idx, own

    suffmin[nplaces] = limit + 1
    for j in range(nplaces - 1, -1, -1):
        own = limit + 1
        for idx in range(starts[j], starts[j + 1]):
            if vals[idx] < own:
                own = vals[idx]
        suffmin[j] = own if own < suffmin[j + 1] else suffmin[j + 1]

    if limit > 1:
        _rec_grid(0, 1, 1, &starts[0], &vals[0], &cnts[0], &suffmin[0],
                  &gr[0], &hist[0], nplaces, limit, ngrid)
        hist[_bisect(&gr[0], ngrid, 1)] += 1

    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.zeros(ngrid, dtype=np.int64)
    cdef cnp.int64_t run = 0
    for j in range(ngrid):
        run += hist[j]
        out[j] = run
    return out


cdef cnp.int64_t _bisect(cnp.int64_t* gr, cnp.int64_t ngrid, cnp.int64_t w) noexcept nogil:
    # first index i with gr[i] > w (bisect_right over ascending grid)
    cdef cnp.int64_t lo = 0, hi = ngrid, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if gr[mid] <= w:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef void _rec_grid(cnp.int64_t i, cnp.int64_t v, cnp.int64_t c,
                    cnp.int64_t* starts, cnp.int64_t* vals, cnp.int64_t* cnts,
                    cnp.int64_t* suffmin, cnp.int64_t* gr, cnp.int64_t* hist,
                    cnp.int64_t nplaces, cnp.int64_t limit, cnp.int64_t ngrid) noexcept nogil:
    # compare through the quotient cap so w = v * item never overflows int64
    cdef cnp.int64_t j, idx, w, wc, cap = (limit - 1) // v
    for j in range(i, nplaces):
        if suffmin[j] > cap:
            break
        for idx in range(starts[j], starts[j + 1]):
            if vals[idx] <= cap:
                w = v * vals[idx]
                wc = c * cnts[idx]
                hist[_bisect(gr, ngrid, w)] += wc
                _rec_grid(j + 1, w, wc, starts, vals, cnts, suffmin,
                          gr, hist, nplaces, limit, ngrid)


def bounded_products_exact(offsets, values_flat, counts_flat, cnp.int64_t limit):
    """All sub-limit products as (values, counts) arrays, unsorted."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1] starts = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] vals = np.ascontiguousarray(values_flat, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cnts = np.ascontiguousarray(counts_flat, dtype=np.int64)
    cdef cnp.int64_t nplaces = starts.shape[0] - 1
    cdef cnp.ndarray[cnp.int64_t, ndim=1] suffmin = np.empty(nplaces + 1, dtype=np.int64)
    cdef cnp.int64_t j, idx, own

    suffmin[nplaces] = limit + 1
    for j in range(nplaces - 1, -1, -1):
        own = limit + 1
        for idx in range(starts[j], starts[j + 1]):
            if vals[idx] < own:
                own = vals[idx]
        suffmin[j] = own if own < suffmin[j + 1] else suffmin[j + 1]

    out_v = []
    out_c = []
    if limit > 1:
        out_v.append(1)
        out_c.append(1)
        _rec_exact(0, 1, 1, starts, vals, cnts, suffmin, nplaces, limit,
                   out_v, out_c)
    return (np.asarray(out_v, dtype=np.int64), np.asarray(out_c, dtype=np.int64))


cdef void _rec_exact(cnp.int64_t i, cnp.int64_t v, cnp.int64_t c,
                     cnp.ndarray[cnp.int64_t, ndim=1] starts,
                     cnp.ndarray[cnp.int64_t, ndim=1] vals,
                     cnp.ndarray[cnp.int64_t, ndim=1] cnts,
                     cnp.ndarray[cnp.int64_t, ndim=1] suffmin,
                     cnp.int64_t nplaces, cnp.int64_t limit,
                     list out_v, list out_c):
    cdef cnp.int64_t j, idx, w, wc, cap = (limit - 1) // v
    for j in range(i, nplaces):
        if suffmin[j] > cap:
            break
        for idx in range(starts[j], starts[j + 1]):
            if vals[idx] <= cap:
                w = v * vals[idx]
                wc = c * cnts[idx]
                out_v.append(w)
                out_c.append(wc)
                _rec_exact(j + 1, w, wc, starts, vals, cnts, suffmin,
                           nplaces, limit, out_v, out_c)
