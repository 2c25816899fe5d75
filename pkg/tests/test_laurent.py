from __future__ import annotations

from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import laurent_polys
from ct_workbench.laurent import (
    LaurentPoly,
    Monomial,
    Pochhammer,
    ProductSpec,
    andrews_spec,
    build_product,
    ct_all,
    ct_product,
    ct_var,
    dn_product,
    dn_spec,
    dyson_classical_spec,
    dyson_product_classical,
    eval_q,
    monomial_prefactor,
    prefactor_exps,
    relabel,
)
from ct_workbench.qring import ONE, Q, QPoly, qfac, qmultinomial


def X(*exps, c=1):
    return LaurentPoly.monomial(exps, c)


def naive_product(spec: ProductSpec) -> LaurentPoly:
    """Factor-by-factor multiplication with the dict-based LaurentPoly ring;
    shares nothing with the packed-key engine."""
    out = LaurentPoly.one(spec.nvars)
    for f in spec.factors:
        if isinstance(f, Monomial):
            out = out * LaurentPoly.monomial(f.exps, QPoly.monomial(f.qshift, f.sign))
            continue
        d = [0] * spec.nvars
        d[f.i], d[f.j] = 1, -1
        for t in range(f.order):
            out = out * (LaurentPoly.one(spec.nvars) - LaurentPoly.monomial(d, QPoly.monomial(f.qshift + t)))
    return out


class TestArithmetic:
    def test_identity(self):
        f = X(1, -1) + X(0, 2, c=Q)
        assert f * LaurentPoly.one(2) == f

    def test_hand_expansion(self):
        f = (LaurentPoly.one(2) - X(1, -1)) * (LaurentPoly.one(2) - X(-1, 1, c=Q))
        expected = LaurentPoly(2, {(0, 0): ONE + Q, (1, -1): -1, (-1, 1): -Q})
        assert f == expected

    def test_additive_inverse(self):
        f = X(1, -1) + X(0, 2, c=Q)
        assert (f + (-f)).is_zero()

    def test_nvars_mismatch(self):
        with pytest.raises(ValueError):
            X(1, -1) + X(1, 0, -1)

    def test_zero_coefficients_not_stored(self):
        assert len(LaurentPoly(2, {(1, 0): 0, (0, 0): 1})) == 1

    def test_text_form(self):
        f = build_product(andrews_spec((1, 1)))
        assert str(f) == "(-q) * x0^-1 x1^1 + (1 + q) + (-1) * x0^1 x1^-1"
        assert str(LaurentPoly(2)) == "0"

    def test_json_round_trip(self):
        f = build_product(dn_spec((2, 1, 2)))
        assert LaurentPoly.from_json(3, f.to_json()) == f


class TestBuilders:
    def test_empty_spec_is_one(self):
        assert build_product(ProductSpec(3)) == LaurentPoly.one(3)

    def test_order_zero_factor(self):
        assert build_product(ProductSpec(2, (Pochhammer(0, 1, 1, 0),))) == LaurentPoly.one(2)

    def test_d1(self):
        assert dn_product((1, 1)) == LaurentPoly.one(2) - X(1, -1)
        assert dn_product((0, 1)) == LaurentPoly.one(2)

    def test_d2_is_three_binomials(self):
        one = LaurentPoly.one(3)
        expected = (one - X(1, -1, 0)) * (one - X(1, 0, -1)) * (one - X(0, 1, -1))
        assert dn_product((1, 1, 1)) == expected
        assert len(expected) == 6

    def test_andrews_two_variables(self):
        f = build_product(andrews_spec((1, 1)))
        assert f == LaurentPoly(2, {(0, 0): ONE + Q, (1, -1): -1, (-1, 1): -Q})
        assert ct_all(f) == qmultinomial((1, 1))

    def test_classical_dyson(self):
        f = dyson_product_classical((1, 1))
        assert f == LaurentPoly(2, {(0, 0): 2, (1, -1): -1, (-1, 1): -1})
        assert dyson_product_classical((0, 0, 0)) == LaurentPoly.one(3)
        g = dyson_product_classical((1, 1, 1))
        assert all(c.degree <= 0 for c in g.terms.values())
        assert ct_all(g) == QPoly(6)
        assert len(g) == 19

    def test_dn_rejects_zero_order(self):
        with pytest.raises(ValueError):
            dn_spec((1, 0, 2))

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            ProductSpec(2, (Pochhammer(0, 0, 0, 1),))
        with pytest.raises(ValueError):
            ProductSpec(2, (Pochhammer(0, 2, 0, 1),))
        with pytest.raises(ValueError):
            ProductSpec(2, (Monomial((1, 0, 0)),))
        with pytest.raises(ValueError):
            ProductSpec(2, (Pochhammer(0, 1, 0, -1),))

    def test_spec_json_round_trip(self):
        spec = ProductSpec(3, (Monomial((1, -1, 0), -1, 2),)) + dn_spec((1, 2, 1))
        assert ProductSpec.from_json(spec.to_json()) == spec

    def test_prefactors(self):
        assert monomial_prefactor(4) == LaurentPoly.one(4)
        assert monomial_prefactor(4, [(1, 3)]) == X(0, -1, 0, 1)
        assert monomial_prefactor(4, [(2, 3)], extra=(0, 1)) == X(1, -1, -1, 1)
        assert prefactor_exps(3, [(1, 2)], reverse=True) == (0, 1, -1)


@pytest.mark.parametrize(
    "spec",
    [
        dn_spec((1, 2, 1)),
        dn_spec((0, 2, 1, 2)),
        andrews_spec((2, 1, 1)),
        dyson_classical_spec((2, 1, 1)),
        ProductSpec(3, (Monomial((1, -1, 0), -2, 1),)) + dn_spec((2, 2, 1)),
    ],
)
def test_engine_matches_naive_multiplication(spec, kernel_path):
    assert build_product(spec) == naive_product(spec)
    assert ct_product(spec) == ct_all(naive_product(spec))


class TestConstantTerms:
    def test_examples(self):
        assert ct_all(LaurentPoly.one(2) - X(1, -1)) == ONE
        assert ct_all(X(1, -1)) == QPoly()
        assert ct_var(LaurentPoly.one(2) - X(1, -1), 0) == LaurentPoly.one(2)

    def test_iterated_ct_var_is_ct_all(self):
        f = build_product(dn_spec((2, 1, 2)))
        g = f
        for i in range(3):
            g = ct_var(g, i)
        assert ct_all(g) == ct_all(f) and len(g) <= 1


@settings(max_examples=80, deadline=None)
@given(laurent_polys(3), st.sampled_from([(0, 1), (0, 2), (1, 2)]))
def test_ct_var_commutes(f, ij):
    i, j = ij
    assert ct_var(ct_var(f, i), j) == ct_var(ct_var(f, j), i)


@settings(max_examples=80, deadline=None)
@given(laurent_polys(3), laurent_polys(3))
def test_ct_is_linear(f, g):
    assert ct_all(f + g) == ct_all(f) + ct_all(g)


@settings(max_examples=60, deadline=None)
@given(laurent_polys(3), st.permutations([0, 1, 2]))
def test_ct_invariant_under_relabeling(f, sigma):
    assert ct_all(relabel(f, sigma)) == ct_all(f)


class TestRelabel:
    def test_identity(self):
        f = build_product(dn_spec((1, 2, 1)))
        assert relabel(f, [0, 1, 2]) == f

    def test_transposition(self):
        assert relabel(X(1, -1, 0), {1: 2, 2: 1}) == X(1, 0, -1)

    def test_non_bijection_rejected(self):
        with pytest.raises(ValueError):
            relabel(X(1, -1, 0), {1: 2, 2: 2})
        with pytest.raises(ValueError):
            relabel(X(1, -1, 0), {1: 2})

    def test_relabeled_product_equals_product_of_relabeled_factors(self):
        spec = dn_spec((0, 1, 2, 2), first=1)
        f = build_product(spec)
        for sigma in permutations((1, 2, 3)):
            smap = dict(zip((1, 2, 3), sigma))
            moved = ProductSpec(4, tuple(Pochhammer(smap[p.i], smap[p.j], p.qshift, p.order) for p in spec.factors))
            assert relabel(f, smap) == build_product(moved)


class TestEvalQ:
    def test_examples(self):
        assert eval_q(ONE + Q, 2) == 3
        assert eval_q(qfac(2), 1) == 0
        assert eval_q(qmultinomial((1, 1, 1)), 1) == 6

    def test_laurent_eval(self):
        f = build_product(andrews_spec((1, 1)))
        assert eval_q(f, Fraction(1, 2)) == {(0, 0): Fraction(3, 2), (1, -1): -1, (-1, 1): Fraction(-1, 2)}

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            eval_q(ONE, 0)
