"""Hot loops of the expansion engine and the tournament census.

Every kernel exists twice: a numba ``@njit`` version and a pure-numpy
version with identical semantics.  The numba path is used when numba imports
cleanly and the environment variable ``CT_WORKBENCH_PURE_NUMPY`` is unset (or
``0``); setting it to ``1`` forces the numpy path everywhere.

All arithmetic here is on int64.  Callers are responsible for proving that no
coefficient can overflow (see ``ct_workbench._expand``); the kernels never
check.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

PURE_NUMPY_ENV = "CT_WORKBENCH_PURE_NUMPY"


def numba_enabled() -> bool:
    if numba is None:
        return False
    return os.environ.get(PURE_NUMPY_ENV, "0") in ("", "0")


# ---------------------------------------------------------------------------
# merge: f * (1 + c * M)  where M shifts every key by ``delta``
# ---------------------------------------------------------------------------

def merge_binomial_numpy(keys, coeffs, delta, c):
    """Return the sorted, zero-free terms of ``f + c * shift(f, delta)``.

    ``keys`` must be sorted ascending and duplicate free.
    """
    if keys.size == 0:
        return keys.copy(), coeffs.copy()
    all_keys = np.concatenate((keys, keys + delta))
    all_coeffs = np.concatenate((coeffs, coeffs * c))
    order = np.argsort(all_keys, kind="stable")
    all_keys = all_keys[order]
    all_coeffs = all_coeffs[order]
    starts = np.flatnonzero(np.r_[True, all_keys[1:] != all_keys[:-1]])
    sums = np.add.reduceat(all_coeffs, starts)
    out_keys = all_keys[starts]
    nz = sums != 0
    return out_keys[nz], sums[nz]


def _merge_binomial_py(keys, coeffs, delta, c):
    n = keys.shape[0]
    out_k = np.empty(2 * n, dtype=np.int64)
    out_c = np.empty(2 * n, dtype=np.int64)
    i = 0
    j = 0
    m = 0
    while i < n or j < n:
        if j >= n:
            k = keys[i]
            v = coeffs[i]
            i += 1
        elif i >= n:
            k = keys[j] + delta
            v = coeffs[j] * c
            j += 1
        else:
            ka = keys[i]
            kb = keys[j] + delta
            if ka < kb:
                k = ka
                v = coeffs[i]
                i += 1
            elif kb < ka:
                k = kb
                v = coeffs[j] * c
                j += 1
            else:
                k = ka
                v = coeffs[i] + coeffs[j] * c
                i += 1
                j += 1
        if v != 0:
            out_k[m] = k
            out_c[m] = v
            m += 1
    return out_k[:m].copy(), out_c[:m].copy()


# ---------------------------------------------------------------------------
# prune: keep terms whose x-coordinates lie in a per-coordinate window
# ---------------------------------------------------------------------------

def prune_window_numpy(keys, coeffs, shifts, masks, offsets, lo, hi):
    keep = np.ones(keys.shape[0], dtype=np.bool_)
    for c in range(shifts.shape[0]):
        e = ((keys >> shifts[c]) & masks[c]) + offsets[c]
        keep &= (e >= lo[c]) & (e <= hi[c])
    return keys[keep], coeffs[keep]


def _prune_window_py(keys, coeffs, shifts, masks, offsets, lo, hi):
    n = keys.shape[0]
    out_k = np.empty(n, dtype=np.int64)
    out_c = np.empty(n, dtype=np.int64)
    m = 0
    ncoord = shifts.shape[0]
    for t in range(n):
        key = keys[t]
        ok = True
        for c in range(ncoord):
            e = ((key >> shifts[c]) & masks[c]) + offsets[c]
            if e < lo[c] or e > hi[c]:
                ok = False
                break
        if ok:
            out_k[m] = key
            out_c[m] = coeffs[t]
            m += 1
    return out_k[:m].copy(), out_c[:m].copy()


# ---------------------------------------------------------------------------
# tournament census over all 2^C(n,2) orientations
# ---------------------------------------------------------------------------

def _pair_tables(n):
    pi = []
    pj = []
    for i in range(n):
        for j in range(i + 1, n):
            pi.append(i)
            pj.append(j)
    return np.array(pi, dtype=np.int64), np.array(pj, dtype=np.int64)


def tournament_census_numpy(n):
    """Per orientation: (is_transitive, number of dominant sets).

    Orientation ``bits`` flips pair t (in lexicographic pair order) when bit t
    is set.  Transitivity is decided by the score sequence: a tournament is
    transitive iff its out-degrees are pairwise distinct.
    """
    pi, pj = _pair_tables(n)
    npairs = pi.shape[0]
    total = 1 << npairs
    bits = np.arange(total, dtype=np.int64)
    out = np.zeros((total, n), dtype=np.int64)
    for t in range(npairs):
        flipped = (bits >> t) & 1
        out[:, pi[t]] |= np.where(flipped == 0, 1 << pj[t], 0)
        out[:, pj[t]] |= np.where(flipped == 1, 1 << pi[t], 0)
    degrees = np.zeros((total, n), dtype=np.int64)
    for v in range(n):
        x = out[:, v].copy()
        while np.any(x):
            degrees[:, v] += x & 1
            x >>= 1
    degrees.sort(axis=1)
    transitive = np.all(degrees == np.arange(n), axis=1)
    full = (1 << n) - 1
    counts = np.zeros(total, dtype=np.int64)
    for r in range(1, full + 1):
        outside = full & ~r
        dominant = np.ones(total, dtype=np.bool_)
        for v in range(n):
            if (r >> v) & 1:
                dominant &= (out[:, v] & outside) == outside
        counts += dominant
    return transitive, counts


def _tournament_census_py(n):
    npairs = n * (n - 1) // 2
    pi = np.empty(npairs, dtype=np.int64)
    pj = np.empty(npairs, dtype=np.int64)
    t = 0
    for i in range(n):
        for j in range(i + 1, n):
            pi[t] = i
            pj[t] = j
            t += 1
    total = 1 << npairs
    full = (1 << n) - 1
    transitive = np.zeros(total, dtype=np.bool_)
    counts = np.zeros(total, dtype=np.int64)
    out = np.zeros(n, dtype=np.int64)
    seen = np.zeros(n, dtype=np.bool_)
    for bits in range(total):
        out[:] = 0
        for t in range(npairs):
            if (bits >> t) & 1:
                out[pj[t]] |= 1 << pi[t]
            else:
                out[pi[t]] |= 1 << pj[t]
        seen[:] = False
        ok = True
        for v in range(n):
            d = 0
            x = out[v]
            while x:
                d += x & 1
                x >>= 1
            if seen[d]:
                ok = False
            seen[d] = True
        transitive[bits] = ok
        c = 0
        for r in range(1, full + 1):
            outside = full & ~r
            dom = True
            for v in range(n):
                if (r >> v) & 1 and (out[v] & outside) != outside:
                    dom = False
                    break
            if dom:
                c += 1
        counts[bits] = c
    return transitive, counts


if numba is not None:
    _jit = numba.njit(cache=True, nogil=True)
    merge_binomial_numba = _jit(_merge_binomial_py)
    prune_window_numba = _jit(_prune_window_py)
    tournament_census_numba = _jit(_tournament_census_py)
else:  # pragma: no cover
    merge_binomial_numba = _merge_binomial_py
    prune_window_numba = _prune_window_py
    tournament_census_numba = _tournament_census_py


def merge_binomial(keys, coeffs, delta, c):
    if numba_enabled():
        return merge_binomial_numba(keys, coeffs, np.int64(delta), np.int64(c))
    return merge_binomial_numpy(keys, coeffs, np.int64(delta), np.int64(c))


def prune_window(keys, coeffs, shifts, masks, offsets, lo, hi):
    if numba_enabled():
        return prune_window_numba(keys, coeffs, shifts, masks, offsets, lo, hi)
    return prune_window_numpy(keys, coeffs, shifts, masks, offsets, lo, hi)


def tournament_census(n):
    if numba_enabled():
        return tournament_census_numba(n)
    return tournament_census_numpy(n)
