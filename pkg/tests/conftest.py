from __future__ import annotations

import pytest
from hypothesis import strategies as st

from ct_workbench import kernels
from ct_workbench.laurent import LaurentPoly
from ct_workbench.qring import QPoly


@pytest.fixture(params=["numba", "numpy"])
def kernel_path(request, monkeypatch):
    """Run a test once per kernel implementation."""
    if request.param == "numba" and kernels.numba is None:
        pytest.skip("numba not importable")
    monkeypatch.setenv(kernels.PURE_NUMPY_ENV, "1" if request.param == "numpy" else "0")
    return request.param


qpolys = st.dictionaries(st.integers(0, 8), st.integers(-6, 6), max_size=5).map(QPoly)
nonzero_qpolys = qpolys.filter(lambda p: not p.is_zero())


def laurent_polys(nvars: int = 3):
    exps = st.tuples(*[st.integers(-2, 2)] * nvars)
    return st.dictionaries(exps, nonzero_qpolys, max_size=6).map(lambda t: LaurentPoly(nvars, t))
