"""Compare the numba kernels with the pure-numpy fallback.

    python benchmarks/bench_kernels.py --repeat 5

Each case runs once per path to warm up (numba compiles or loads its cache),
then ``--repeat`` timed runs; the best time is reported.  Results of the two
paths are asserted identical before any timing is printed.
"""

from __future__ import annotations

import argparse
import os
import time

import numpy as np

from ct_workbench import kernels
from ct_workbench.laurent import andrews_spec, dn_spec, expand_product


def _with_path(pure: bool, fn):
    old = os.environ.get(kernels.PURE_NUMPY_ENV)
    os.environ[kernels.PURE_NUMPY_ENV] = "1" if pure else "0"
    try:
        return fn()
    finally:
        if old is None:
            del os.environ[kernels.PURE_NUMPY_ENV]
        else:
            os.environ[kernels.PURE_NUMPY_ENV] = old


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _merge_case(size, seed=0):
    rng = np.random.default_rng(seed)
    keys = np.unique(rng.integers(0, 40 * size, size=size, dtype=np.int64))
    coeffs = rng.integers(-50, 50, size=keys.size, dtype=np.int64)
    coeffs[coeffs == 0] = 1
    return lambda: kernels.merge_binomial(keys, coeffs, 17, -1)


def _same(a, b):
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return a == b


CASES = {
    "merge 1e5 terms": lambda: _merge_case(100_000),
    "merge 1e6 terms": lambda: _merge_case(1_000_000),
    "expand D_4 a=(1,2,2,2,2)": lambda: (
        lambda: expand_product(dn_spec((1, 2, 2, 2, 2))).ct()
    ),
    "CT q-Dyson a=(2,2,2,2)": lambda: (
        lambda: expand_product(andrews_spec((2, 2, 2, 2)), ct_only=True).ct()
    ),
    "tournament census n=6": lambda: (lambda: kernels.tournament_census(6)),
    "tournament census n=7": lambda: (lambda: kernels.tournament_census(7)),
}


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--only", help="substring filter on case names")
    args = p.parse_args(argv)

    if kernels.numba is None:
        print("numba is not importable; only the numpy path can run")
    print(f"{'case':32s} {'numba ms':>10s} {'numpy ms':>10s} {'speedup':>8s}")
    for name, make in CASES.items():
        if args.only and args.only not in name:
            continue
        fn = make()
        r_numba = _with_path(False, fn)
        r_numpy = _with_path(True, fn)
        assert _same(r_numba, r_numpy), f"paths disagree on {name}"
        t_numba = _with_path(False, lambda: _best(fn, args.repeat))
        t_numpy = _with_path(True, lambda: _best(fn, args.repeat))
        print(f"{name:32s} {t_numba * 1e3:10.2f} {t_numpy * 1e3:10.2f} {t_numpy / t_numba:8.2f}x")


if __name__ == "__main__":
    main()
