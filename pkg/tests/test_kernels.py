from __future__ import annotations

import numpy as np
import pytest

from ct_workbench import kernels
from ct_workbench.tournament import all_tournaments


def _random_terms(rng, size, span):
    keys = np.unique(rng.integers(0, span, size=size, dtype=np.int64))
    coeffs = rng.integers(-9, 10, size=keys.size, dtype=np.int64)
    coeffs[coeffs == 0] = 3
    return keys, coeffs


def _dict_merge(keys, coeffs, delta, c):
    acc = dict(zip(keys.tolist(), coeffs.tolist()))
    for k, v in zip(keys.tolist(), coeffs.tolist()):
        acc[k + delta] = acc.get(k + delta, 0) + c * v
    items = sorted((k, v) for k, v in acc.items() if v)
    return [k for k, _ in items], [v for _, v in items]


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("delta,c", [(1, -1), (7, -1), (-5, 2), (0, -1), (300, 1)])
def test_merge_matches_dict_reference(seed, delta, c):
    rng = np.random.default_rng(seed)
    keys, coeffs = _random_terms(rng, 200, 600)
    ref_k, ref_c = _dict_merge(keys, coeffs, delta, c)
    for impl in (kernels.merge_binomial_numpy, kernels.merge_binomial_numba):
        k, v = impl(keys, coeffs, np.int64(delta), np.int64(c))
        assert k.tolist() == ref_k
        assert v.tolist() == ref_c


def test_merge_empty_input():
    empty = np.empty(0, dtype=np.int64)
    for impl in (kernels.merge_binomial_numpy, kernels.merge_binomial_numba):
        k, v = impl(empty, empty, np.int64(3), np.int64(-1))
        assert k.size == 0 and v.size == 0


def test_merge_full_cancellation():
    keys = np.array([0, 1], dtype=np.int64)
    coeffs = np.array([1, 1], dtype=np.int64)
    # (1 + x)(1 - x) with delta 1 and the x-term already present: 1 + x - x - x^2
    for impl in (kernels.merge_binomial_numpy, kernels.merge_binomial_numba):
        k, v = impl(keys, coeffs, np.int64(1), np.int64(-1))
        assert k.tolist() == [0, 2] and v.tolist() == [1, -1]


@pytest.mark.parametrize("seed", range(4))
def test_prune_parity(seed):
    rng = np.random.default_rng(seed)
    keys, coeffs = _random_terms(rng, 500, 1 << 12)
    shifts = np.array([8, 4], dtype=np.int64)
    masks = np.array([15, 15], dtype=np.int64)
    offsets = np.array([-3, -7], dtype=np.int64)
    lo = np.array([-2, -3], dtype=np.int64)
    hi = np.array([5, 2], dtype=np.int64)
    a = kernels.prune_window_numpy(keys, coeffs, shifts, masks, offsets, lo, hi)
    b = kernels.prune_window_numba(keys, coeffs, shifts, masks, offsets, lo, hi)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    e0 = ((a[0] >> 8) & 15) - 3
    e1 = ((a[0] >> 4) & 15) - 7
    assert np.all((e0 >= -2) & (e0 <= 5) & (e1 >= -3) & (e1 <= 2))
    assert 0 < a[0].size < keys.size


@pytest.mark.parametrize("n", range(1, 6))
def test_census_parity(n):
    t1, c1 = kernels.tournament_census_numpy(n)
    t2, c2 = kernels.tournament_census_numba(n)
    assert np.array_equal(t1, t2) and np.array_equal(c1, c2)


@pytest.mark.parametrize("n", range(1, 5))
def test_census_rows_match_tournament_objects(n):
    transitive, counts = kernels.tournament_census(n)
    for bits, T in enumerate(all_tournaments(n)):
        assert bool(transitive[bits]) == T.is_transitive()
        assert int(counts[bits]) == len(T.dominant_sets())


def test_env_flag_selects_path(monkeypatch):
    monkeypatch.setenv(kernels.PURE_NUMPY_ENV, "1")
    assert not kernels.numba_enabled()
    monkeypatch.setenv(kernels.PURE_NUMPY_ENV, "0")
    assert kernels.numba_enabled() == (kernels.numba is not None)
    monkeypatch.delenv(kernels.PURE_NUMPY_ENV)
    assert kernels.numba_enabled() == (kernels.numba is not None)
