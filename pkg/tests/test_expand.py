from __future__ import annotations

import numpy as np
import pytest

from ct_workbench._expand import CeilingExceeded, Layout, Step, coefficient_bound, expand, plan_layout
from ct_workbench.laurent import andrews_spec, dn_spec, dyson_classical_spec, expand_product
from ct_workbench.qring import QPoly, qmultinomial

SPECS = [
    dn_spec((1, 2, 1)),
    dn_spec((0, 2, 2, 1)),
    andrews_spec((2, 1, 2)),
    dyson_classical_spec((1, 2, 1)),
]


def test_layout_pack_round_trip():
    lay = Layout((-3, 0, -2), (4, 5, 9))
    for e in [(-3, 0, -2), (4, 5, 9), (0, 2, 3)]:
        assert lay.unpack(lay.pack(e)) == e
    keys = np.array([lay.pack(e) for e in [(-3, 0, -2), (1, 1, 1)]], dtype=np.int64)
    assert lay.decode(keys).tolist() == [[-3, 0, -2], [1, 1, 1]]


def test_key_order_is_lexicographic():
    lay = Layout((-2, -2, 0), (2, 2, 3))
    vecs = [(a, b, c) for a in range(-2, 3) for b in range(-2, 3) for c in range(4)]
    keys = [lay.pack(v) for v in vecs]
    assert sorted(range(len(vecs)), key=keys.__getitem__) == sorted(range(len(vecs)), key=vecs.__getitem__)


def test_plan_layout_covers_intermediates():
    steps = [Step((1, -1, 0), -1, True), Step((-2, 2, 1), 1, False)]
    lay = plan_layout(2, steps)
    assert lay.lo[0] <= -2 and lay.hi[0] >= 1


def test_coefficient_bound():
    assert coefficient_bound([Step((1, 0), -1, True)] * 3) == 8
    assert coefficient_bound([Step((1, 0), -5, False)]) == 5


@pytest.mark.parametrize("spec", SPECS)
def test_big_path_matches_int64_path(spec, kernel_path):
    small = expand_product(spec)
    big = expand_product(spec, force_big=True)
    assert not small.big and big.big
    assert small.same_terms(big)


@pytest.mark.parametrize("spec", SPECS)
def test_pruned_ct_matches_full_expansion(spec, kernel_path):
    assert expand_product(spec, ct_only=True).ct() == expand_product(spec).ct()
    assert expand_product(spec, ct_only=True, force_big=True).ct() == expand_product(spec).ct()


def test_pruning_actually_drops_terms():
    spec = dn_spec((2, 2, 2, 2))
    assert len(expand_product(spec, ct_only=True)) < len(expand_product(spec))


def test_ct_absent_when_zero_unreachable():
    steps = [Step((1, -1, 0), 1, False)]
    assert expand(2, steps).ct() == QPoly()
    assert expand(2, steps, ct_only=True).ct() == QPoly()


def test_ceiling_raises():
    with pytest.raises(CeilingExceeded) as info:
        expand_product(dn_spec((2, 2, 2, 2)), ceiling=10)
    assert info.value.ceiling == 10 and info.value.terms > 10


def test_large_coefficients_fall_back_to_big_ints():
    # (1 - 3^40 x)(1 - 3^40 x) overflows int64 in the x^2 coefficient
    c = -(3**40)
    steps = [Step((1, 0), c, True), Step((1, 0), c, True)]
    ex = expand(1, steps)
    assert ex.big
    assert dict(((e[0], v) for e, v in ex.terms())) == {0: 1, 1: 2 * c, 2: c * c}


def test_ct_of_q_dyson_product(kernel_path):
    assert expand_product(andrews_spec((2, 2, 1)), ct_only=True).ct() == qmultinomial((2, 2, 1))
