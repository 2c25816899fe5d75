from __future__ import annotations

import math

import pytest

from ct_workbench.identities import (
    IdentityInstance,
    InvalidInstance,
    PoleError,
    Theorem,
    bg_rhs,
    cor_i_rhs,
    cor_ii_rhs,
    dixon_lhs,
    dixon_rhs,
    dyson_rhs,
    main1_rhs,
    main2_rhs,
    qdyson_rhs,
    rhs,
    rhs_at_a0,
    rhs_at_b,
    rhs_pole_points,
    rhs_zero_points,
    x1_rhs,
    x2_rhs,
)
from ct_workbench.qring import ONE, QPoly, QRat, one_minus_q_pow, qbinom, qmultinomial


def P(text):
    return QPoly.parse(text)


def qp(e):
    return QPoly.monomial(e)


class TestIntegerIdentities:
    def test_dixon(self):
        assert (dixon_lhs(0), dixon_rhs(0)) == (1, 1)
        assert dixon_lhs(1) == -1 + 8 - 1 == 6 == dixon_rhs(1)
        assert dixon_lhs(2) == 90 == math.factorial(6) // 8

    def test_dyson(self):
        assert dyson_rhs((5,)) == 1
        assert dyson_rhs((1, 1)) == 2
        assert dyson_rhs((1, 1, 1)) == 6

    def test_qdyson(self):
        assert qdyson_rhs((1, 1)) == P("1 + q")
        assert qdyson_rhs((0, 0, 0)) == ONE
        assert qdyson_rhs((2, 1)) == qbinom(3, 1)


class TestBG:
    def test_single_vertex(self):
        assert bg_rhs((3,), ()) == QRat(1)

    def test_cycle_gives_zero(self):
        assert bg_rhs((1, 1, 1), ((1, 3),)).is_zero()

    def test_two_vertices(self):
        assert bg_rhs((1, 1), ()) == QRat(1)

    def test_flipped_pair(self):
        # Q={(1,2)}: sigma=(2,1); value checked against the expansion oracle
        assert bg_rhs((2, 1, 2), ((1, 2),)) == QRat(P("-1 - 2*q - 2*q^2 - 2*q^3 - q^4"))

    def test_numerator_product_is_permutation_invariant(self):
        a = (1, 3, 2, 2)
        for sigma in [(1, 2, 3, 4), (4, 2, 1, 3), (3, 4, 2, 1)]:
            lhs = math.prod((one_minus_q_pow(a[i - 1]) for i in range(1, 5)), start=ONE)
            rhs_ = math.prod((one_minus_q_pow(a[s - 1]) for s in sigma), start=ONE)
            assert lhs == rhs_


class TestMain1:
    def test_equal_leading_values_vanish(self):
        assert main1_rhs((1, 1, 1), ()).is_zero()

    def test_stated_example(self):
        expected = (
            QRat(qp(2) - qp(1), one_minus_q_pow(2))
            * qmultinomial((1, 1, 2))
            * QRat(one_minus_q_pow(2) * one_minus_q_pow(1), one_minus_q_pow(3) * one_minus_q_pow(4))
        )
        assert main1_rhs((1, 2, 1), ()) == expected
        assert main1_rhs((1, 2, 1), ()) == QRat(P("-q"))

    def test_n3_always_transitive(self):
        for Q in [(), ((2, 3),)]:
            inst = IdentityInstance.make("MAIN1", (0, 1, 2, 1), Q)
            assert inst.qset() is not None
        from ct_workbench.tournament import all_qsets, e_bar
        assert all(e_bar(qs).is_transitive() for qs in all_qsets(3, 2))
        assert not all(e_bar(qs).is_transitive() for qs in all_qsets(4, 2))

    def test_antisymmetry(self):
        # sigma = id: swapping a_1 and a_2 flips q^{a_1} - q^{a_2}; the
        # denominators (1-q^{a_0+a_2})(1-q^{a_0+a_1}) are symmetric
        for a in [(2, 1, 3, 2), (0, 2, 1), (1, 1, 3, 2, 1)]:
            b = (a[0], a[2], a[1]) + a[3:]
            assert main1_rhs(a, ()) == -main1_rhs(b, ())

    def test_nontransitive_zero(self):
        assert main1_rhs((1, 1, 2, 1, 2), ((2, 4),)).is_zero()


class TestMain2:
    def test_equal_values_vanish(self):
        assert main2_rhs((1, 2, 1, 1), ()).is_zero()

    def test_stated_example(self):
        assert main2_rhs((1, 1, 2, 1), ()) == QRat(P("-q - q^2"))

    def test_flipped_pair_uses_reordered_sigma(self):
        # sigma = (1,2,4,3): a_sigma(2) = a_2 = a_sigma(3) = a_4 vanishes
        assert main2_rhs((1, 1, 2, 1, 2), ((3, 4),)).is_zero()
        assert not main2_rhs((1, 1, 2, 1, 1), ((3, 4),)).is_zero()

    def test_antisymmetry(self):
        # sigma = id: swapping a_2 and a_3 flips q^{a_2} - q^{a_3}
        for a in [(1, 2, 1, 3), (0, 1, 2, 3, 1)]:
            b = (a[0], a[1], a[3], a[2]) + a[4:]
            assert main2_rhs(a, ()) == -main2_rhs(b, ())


class TestCorollary:
    def test_identity_sigma_part_i_is_main1_shifted(self):
        # the (a_1..a_n) setting with sigma = id is the (a_0..a_n) setting with a_0 := a_1, Q1 empty
        for a in [(1, 2, 1), (2, 1, 2), (2, 2, 1, 1)]:
            assert cor_i_rhs(a, tuple(range(1, len(a) + 1))) == main1_rhs(a, ())

    def test_identity_sigma_part_ii_is_main2_shifted(self):
        for a in [(1, 1, 2, 1), (2, 1, 2, 1)]:
            assert cor_ii_rhs(a, tuple(range(1, len(a) + 1))) == main2_rhs(a, ())

    def test_lemma_values_are_main_at_zero(self):
        for a in [(1, 2, 1), (2, 1, 2)]:
            assert x1_rhs(a) == main1_rhs((0,) + a, ())
        for a in [(1, 2, 1), (2, 1, 1, 2)]:
            assert x2_rhs(a) == main2_rhs((0,) + a, ())

    def test_equal_values_vanish(self):
        assert cor_i_rhs((1, 2, 2), (1, 2, 3)).is_zero()
        assert cor_i_rhs((2, 1, 2), (2, 1, 3)).is_zero()
        assert not cor_i_rhs((1, 2, 2), (2, 3, 1)).is_zero()

    def test_sigma_example(self):
        assert cor_i_rhs((1, 2, 2), (2, 3, 1)) == QRat(P("-q"))
        assert cor_ii_rhs((2, 1, 1, 2), (1, 3, 2, 4)) == QRat(P("-q - q^2"))


class TestInstances:
    def test_make_and_json(self):
        inst = IdentityInstance.make("main1", (1, 2, 1), [(2, 3)][:0])
        assert inst.n == 2 and inst.theorem is Theorem.MAIN1
        assert IdentityInstance.from_json(inst.to_json()) == inst
        assert inst.to_json() == {"theorem": "MAIN1", "a": [1, 2, 1], "Q": []}

    def test_json_shapes(self):
        assert IdentityInstance.make("DIXON", n=3).to_json() == {"theorem": "DIXON", "n": 3}
        cor = IdentityInstance.make("COR_I", (1, 2, 1), sigma=(2, 1, 3))
        assert IdentityInstance.from_json(cor.to_json()) == cor

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(theorem="MAIN1", a=(1, 2, 1), Q=[(1, 2)]),
            dict(theorem="MAIN2", a=(1, 1, 1)),
            dict(theorem="BG", a=(1, 0, 1)),
            dict(theorem="COR_I", a=(1, 2, 1), sigma=(1, 1, 2)),
            dict(theorem="COR_II", a=(1, 2, 1), sigma=(1, 2, 3)),
            dict(theorem="QDYSON", a=(1, 1), Q=[(0, 1)]),
            dict(theorem="NOPE", a=(1,)),
            dict(theorem="BG", a=(1, 1), n=3),
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidInstance):
            IdentityInstance.make(**kwargs)

    def test_from_json_errors(self):
        with pytest.raises(InvalidInstance):
            IdentityInstance.from_json("{not json")
        with pytest.raises(InvalidInstance):
            IdentityInstance.from_json({"a": [1, 1]})

    def test_partial_sums_are_derived(self):
        inst = IdentityInstance.make("BG", (2, 1, 3))
        assert inst.partial_sums((3, 1, 2)) == [3, 5, 6]


class TestZeroPoints:
    def test_examples(self):
        inst = IdentityInstance.make("MAIN1", (0, 1, 2))
        assert rhs_pole_points(inst) == {1, 2, 3}
        assert rhs_zero_points(inst) == set()
        inst = IdentityInstance.make("MAIN1", (0, 2, 1))
        assert rhs_zero_points(inst) == set()
        inst = IdentityInstance.make("MAIN1", (0, 1, 2, 2))
        assert rhs_zero_points(inst) == {4}

    def test_pole_rejected(self):
        inst = IdentityInstance.make("MAIN1", (0, 1, 2))
        with pytest.raises(PoleError):
            rhs_at_b(inst, 1)

    def test_nontransitive_rejected(self):
        inst = IdentityInstance.make("MAIN1", (0, 1, 1, 2, 2), [(2, 4)])
        with pytest.raises(InvalidInstance):
            rhs_zero_points(inst)

    def test_rhs_at_nonnegative_a0_matches_closed_form(self):
        for a in [(1, 2, 1), (2, 1, 3), (1, 2, 1, 2)]:
            inst = IdentityInstance.make("MAIN1", (0,) + a)
            for a0 in range(4):
                assert rhs_at_a0(inst, a0) == main1_rhs((a0,) + a, ())
        inst = IdentityInstance.make("MAIN2", (0, 1, 2, 1, 2), [(3, 4)])
        for a0 in range(3):
            assert rhs_at_a0(inst, a0) == main2_rhs((a0, 1, 2, 1, 2), [(3, 4)])

    def test_zero_points_vanish(self):
        for a, Q, th in [((0, 1, 2, 2), (), "MAIN1"), ((0, 2, 1, 1, 2), ((3, 4),), "MAIN2"),
                         ((0, 1, 3, 2), ((2, 3),), "MAIN1")]:
            inst = IdentityInstance.make(th, a, Q)
            zs = rhs_zero_points(inst)
            for b in zs:
                assert rhs_at_b(inst, b).is_zero()


def test_rhs_dispatch_covers_every_theorem():
    cases = {
        Theorem.DIXON: IdentityInstance.make("DIXON", n=2),
        Theorem.DYSON: IdentityInstance.make("DYSON", (1, 1)),
        Theorem.QDYSON: IdentityInstance.make("QDYSON", (1, 1)),
        Theorem.BG: IdentityInstance.make("BG", (1, 1)),
        Theorem.MAIN1: IdentityInstance.make("MAIN1", (1, 2, 1)),
        Theorem.MAIN2: IdentityInstance.make("MAIN2", (1, 1, 2, 1)),
        Theorem.COR_I: IdentityInstance.make("COR_I", (1, 2, 2), sigma=(2, 3, 1)),
        Theorem.COR_II: IdentityInstance.make("COR_II", (2, 1, 1, 2), sigma=(1, 3, 2, 4)),
        Theorem.X1: IdentityInstance.make("X1", (1, 2)),
        Theorem.X2: IdentityInstance.make("X2", (1, 2, 1)),
    }
    assert set(cases) == set(Theorem)
    assert rhs(cases[Theorem.DIXON]) == QRat(90)
    assert rhs(cases[Theorem.QDYSON]) == QRat(P("1 + q"))
    for inst in cases.values():
        rhs(inst)
