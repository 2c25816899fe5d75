"""Constant terms cross-checked against sympy's symbolic expansion, an oracle
that shares no code with the packed-key engine."""

from __future__ import annotations

import pytest

sympy = pytest.importorskip("sympy")

from ct_workbench.laurent import ProductSpec, andrews_spec, ct_product, dn_spec, Monomial  # noqa: E402
from ct_workbench.qring import QPoly  # noqa: E402


def sympy_ct(spec: ProductSpec) -> QPoly:
    q = sympy.Symbol("q")
    xs = sympy.symbols(f"x0:{spec.nvars}")
    expr = sympy.Integer(1)
    for f in spec.factors:
        if isinstance(f, Monomial):
            m = f.sign * q**f.qshift
            for x, e in zip(xs, f.exps):
                m *= x**e
            expr *= m
        else:
            for t in range(f.order):
                expr *= 1 - xs[f.i] / xs[f.j] * q ** (f.qshift + t)
    poly = sympy.Poly(sympy.expand(expr * sympy.prod([x**40 for x in xs])), *xs, q)
    out = {}
    for monom, coeff in poly.terms():
        if all(e == 40 for e in monom[:-1]):
            out[monom[-1]] = int(coeff)
    return QPoly(out)


@pytest.mark.parametrize(
    "spec",
    [
        andrews_spec((1, 2, 1)),
        dn_spec((2, 1, 2)),
        ProductSpec(3, (Monomial((1, -1, 0)),)) + dn_spec((1, 2, 1)),
        ProductSpec(4, (Monomial((1, 0, -1, 0)),)) + dn_spec((1, 1, 2, 1)),
        ProductSpec(4, (Monomial((0, 1, -1, 0)), Monomial((0, -1, 0, 1)))) + dn_spec((0, 2, 1, 1), first=1),
    ],
)
def test_ct_matches_sympy(spec):
    assert ct_product(spec) == sympy_ct(spec)
