"""Sparse Laurent polynomials in x_0..x_n over Z[q], product builders, and
constant-term extraction."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence, Union

from . import _expand
from ._expand import CeilingExceeded, Expansion, Step
from .qring import ONE, QPoly

__all__ = [
    "CeilingExceeded",
    "LaurentPoly",
    "Monomial",
    "Pochhammer",
    "ProductSpec",
    "build_product",
    "expand_product",
    "ct_product",
    "dyson_product_classical",
    "dyson_classical_spec",
    "andrews_spec",
    "dn_spec",
    "dn_product",
    "pair_factors",
    "flipped_pair_factors",
    "prefactor_exps",
    "monomial_prefactor",
    "ct_all",
    "ct_var",
    "relabel",
    "eval_q",
]


class LaurentPoly:
    """``{exponent vector: QPoly}`` over ``nvars`` variables x_0..x_{nvars-1}."""

    __slots__ = ("nvars", "_t")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], QPoly | int] | None = None):
        self.nvars = nvars
        t: dict[tuple[int, ...], QPoly] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(v) for v in e)
            if len(e) != nvars:
                raise ValueError(f"exponent vector {e} does not have length {nvars}")
            c = c if isinstance(c, QPoly) else QPoly(c)
            if not c.is_zero():
                t[e] = c
        self._t = t

    @classmethod
    def _raw(cls, nvars, t):
        f = cls.__new__(cls)
        f.nvars = nvars
        f._t = t
        return f

    @classmethod
    def one(cls, nvars: int) -> "LaurentPoly":
        return cls._raw(nvars, {(0,) * nvars: ONE})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: QPoly | int = 1) -> "LaurentPoly":
        return cls(len(exps), {tuple(exps): coeff})

    @property
    def terms(self) -> dict[tuple[int, ...], QPoly]:
        return dict(self._t)

    def __len__(self):
        return len(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def _check(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if other.nvars != self.nvars:
            raise ValueError(f"nvars mismatch: {self.nvars} vs {other.nvars}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        t = dict(self._t)
        for e, c in other._t.items():
            s = t[e] + c if e in t else c
            if s.is_zero():
                t.pop(e, None)
            else:
                t[e] = s
        return LaurentPoly._raw(self.nvars, t)

    def __neg__(self):
        return LaurentPoly._raw(self.nvars, {e: -c for e, c in self._t.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (QPoly, int)):
            c = other if isinstance(other, QPoly) else QPoly(other)
            return LaurentPoly(self.nvars, {e: v * c for e, v in self._t.items()})
        other = self._check(other)
        if other is NotImplemented:
            return other
        t: dict[tuple[int, ...], QPoly] = {}
        for e1, c1 in self._t.items():
            for e2, c2 in other._t.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                p = c1 * c2
                t[e] = t[e] + p if e in t else p
        return LaurentPoly._raw(self.nvars, {e: c for e, c in t.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.nvars == other.nvars and self._t == other._t

    __hash__ = None

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for e in sorted(self._t):
            c = self._t[e]
            mono = " ".join(f"x{i}^{v}" for i, v in enumerate(e) if v)
            coeff = str(c)
            if not mono:
                parts.append(f"({coeff})")
            else:
                parts.append(f"({coeff}) * {mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"LaurentPoly(nvars={self.nvars}, {str(self)})"

    def to_json(self) -> list:
        return [[list(e), str(self._t[e])] for e in sorted(self._t)]

    @classmethod
    def from_json(cls, nvars: int, obj: list) -> "LaurentPoly":
        return cls(nvars, {tuple(e): QPoly.parse(c) for e, c in obj})


# ---------------------------------------------------------------------------
# ProductSpec
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Monomial:
    """``sign * q^qshift * x^exps``."""

    exps: tuple[int, ...]
    sign: int = 1
    qshift: int = 0


@dataclass(frozen=True)
class Pochhammer:
    """``(x_i/x_j * q^qshift)_order``."""

    i: int
    j: int
    qshift: int
    order: int


Factor = Union[Monomial, Pochhammer]


@dataclass(frozen=True)
class ProductSpec:
    nvars: int
    factors: tuple[Factor, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        for f in self.factors:
            if isinstance(f, Monomial):
                if len(f.exps) != self.nvars:
                    raise ValueError(f"monomial {f} has wrong length for nvars={self.nvars}")
                if f.sign == 0 or f.qshift < 0:
                    raise ValueError(f"invalid monomial factor {f}")
            elif isinstance(f, Pochhammer):
                if not (0 <= f.i < self.nvars and 0 <= f.j < self.nvars) or f.i == f.j:
                    raise ValueError(f"invalid variable pair in {f}")
                if f.order < 0 or f.qshift < 0:
                    raise ValueError(f"invalid order/qshift in {f}")
            else:
                raise TypeError(f"unknown factor {f!r}")

    def __add__(self, other: "ProductSpec") -> "ProductSpec":
        if other.nvars != self.nvars:
            raise ValueError("nvars mismatch")
        return ProductSpec(self.nvars, self.factors + other.factors)

    def steps(self) -> list[Step]:
        out = []
        for f in self.factors:
            if isinstance(f, Monomial):
                out.append(Step(tuple(f.exps) + (f.qshift,), f.sign, binomial=False))
            else:
                d = [0] * self.nvars
                d[f.i] += 1
                d[f.j] -= 1
                for t in range(f.order):
                    out.append(Step(tuple(d) + (f.qshift + t,), -1, binomial=True))
        return out

    def to_json(self) -> dict:
        fs = []
        for f in self.factors:
            if isinstance(f, Monomial):
                fs.append({"type": "monomial", "exps": list(f.exps), "sign": f.sign, "qshift": f.qshift})
            else:
                fs.append({"type": "pochhammer", "i": f.i, "j": f.j, "qshift": f.qshift, "order": f.order})
        return {"nvars": self.nvars, "factors": fs}

    @classmethod
    def from_json(cls, obj: Mapping | str) -> "ProductSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        fs = []
        for f in obj.get("factors", []):
            kind = f.get("type")
            if kind == "monomial":
                fs.append(Monomial(tuple(f["exps"]), int(f.get("sign", 1)), int(f.get("qshift", 0))))
            elif kind == "pochhammer":
                fs.append(Pochhammer(int(f["i"]), int(f["j"]), int(f.get("qshift", 0)), int(f["order"])))
            else:
                raise ValueError(f"unknown factor type {kind!r}")
        return cls(int(obj["nvars"]), tuple(fs))


def expand_product(spec: ProductSpec, *, ct_only=False, ceiling=None, force_big=False) -> Expansion:
    return _expand.expand(spec.nvars, spec.steps(), ct_only=ct_only, ceiling=ceiling, force_big=force_big)


def expansion_to_laurent(ex: Expansion) -> LaurentPoly:
    t: dict[tuple[int, ...], dict[int, int]] = {}
    for e, v in ex.terms():
        t.setdefault(e[:-1], {})[e[-1]] = v
    return LaurentPoly._raw(ex.nvars, {e: QPoly(c) for e, c in t.items()})


def build_product(spec: ProductSpec, *, ceiling: int | None = None) -> LaurentPoly:
    """Fully expanded product; the empty spec gives 1."""
    return expansion_to_laurent(expand_product(spec, ceiling=ceiling))


def ct_product(spec: ProductSpec, *, ceiling: int | None = None) -> QPoly:
    """Constant term of the product, dropping terms that cannot reach x^0."""
    return expand_product(spec, ct_only=True, ceiling=ceiling).ct()


# ---------------------------------------------------------------------------
# product builders
# ---------------------------------------------------------------------------


def pair_factors(a: Sequence[int], i: int, j: int) -> list[Pochhammer]:
    """(x_i/x_j)_{a_i} (q x_j/x_i)_{a_j - 1}."""
    return [Pochhammer(i, j, 0, a[i]), Pochhammer(j, i, 1, a[j] - 1)]


def flipped_pair_factors(a: Sequence[int], i: int, j: int) -> list[Pochhammer]:
    """(q x_i/x_j)_{a_i - 1} (x_j/x_i)_{a_j}: the reflected form of a pair."""
    return [Pochhammer(i, j, 1, a[i] - 1), Pochhammer(j, i, 0, a[j])]


def dyson_classical_spec(a: Sequence[int]) -> ProductSpec:
    """prod_{i != j} (1 - x_i/x_j)^{a_i}."""
    if any(v < 0 for v in a):
        raise ValueError("Dyson exponents must be nonnegative")
    nv = len(a)
    fs = []
    for i in range(nv):
        for j in range(nv):
            if i != j:
                fs.extend([Pochhammer(i, j, 0, 1)] * a[i])
    return ProductSpec(nv, tuple(fs))


def dyson_product_classical(a: Sequence[int], nvars: int | None = None) -> LaurentPoly:
    if nvars is not None and nvars != len(a):
        raise ValueError("len(a) must equal nvars")
    return build_product(dyson_classical_spec(a))


def andrews_spec(a: Sequence[int]) -> ProductSpec:
    """prod_{i<j} (x_i/x_j)_{a_i} (q x_j/x_i)_{a_j}."""
    if any(v < 0 for v in a):
        raise ValueError("q-Dyson exponents must be nonnegative")
    nv = len(a)
    fs = []
    for i, j in combinations(range(nv), 2):
        fs.append(Pochhammer(i, j, 0, a[i]))
        fs.append(Pochhammer(j, i, 1, a[j]))
    return ProductSpec(nv, tuple(fs))


def dn_spec(a: Sequence[int], first: int = 0) -> ProductSpec:
    """q-Dyson style product over pairs first <= i < j <= n, in nvars = len(a).

    With ``first=1`` the variable x_0 is a spectator; this is the product of
    the Bressoud-Goulden identity in x_1..x_n.
    """
    nv = len(a)
    for j in range(first, nv):
        if a[j] < 0 or (j > first and a[j] < 1):
            raise ValueError(f"a_{j} = {a[j]} makes a Pochhammer order negative")
    fs = []
    for i, j in combinations(range(first, nv), 2):
        fs.extend(pair_factors(a, i, j))
    return ProductSpec(nv, tuple(fs))


def dn_product(a: Sequence[int]) -> LaurentPoly:
    """D_n(x, a, q) with second Pochhammer order a_j - 1."""
    return build_product(dn_spec(a))


def prefactor_exps(nvars: int, Q: Iterable[tuple[int, int]] = (), extra: tuple[int, int] | None = None,
                   reverse: bool = False) -> tuple[int, ...]:
    """Exponents of prod_{(i,j) in Q} x_j/x_i, times x_u/x_v for extra=(u, v).

    ``reverse`` uses x_i/x_j per pair instead.
    """
    e = [0] * nvars
    for i, j in Q:
        if not (0 <= i < nvars and 0 <= j < nvars):
            raise ValueError(f"pair {(i, j)} out of range")
        up, down = (i, j) if reverse else (j, i)
        e[up] += 1
        e[down] -= 1
    if extra is not None:
        u, v = extra
        e[u] += 1
        e[v] -= 1
    return tuple(e)


def monomial_prefactor(nvars: int, Q: Iterable[tuple[int, int]] = (),
                       extra: tuple[int, int] | None = None) -> LaurentPoly:
    return LaurentPoly.monomial(prefactor_exps(nvars, Q, extra))


# ---------------------------------------------------------------------------
# constant terms, relabeling, evaluation
# ---------------------------------------------------------------------------


def ct_all(f: LaurentPoly) -> QPoly:
    return f._t.get((0,) * f.nvars, QPoly())


def ct_var(f: LaurentPoly, i: int) -> LaurentPoly:
    if not 0 <= i < f.nvars:
        raise ValueError(f"variable index {i} out of range")
    return LaurentPoly._raw(f.nvars, {e: c for e, c in f._t.items() if e[i] == 0})


def relabel(f: LaurentPoly, sigma: Mapping[int, int] | Sequence[int]) -> LaurentPoly:
    """Substitute x_i -> x_{sigma(i)}.

    ``sigma`` is a mapping on a subset of indices that must be a bijection of
    that subset onto itself; a sequence is read as the full map i -> sigma[i].
    """
    if not isinstance(sigma, Mapping):
        sigma = dict(enumerate(sigma))
    dom = set(sigma)
    if set(sigma.values()) != dom or len(dom) != len(sigma):
        raise ValueError("relabeling must be a bijection on its index set")
    if any(not 0 <= i < f.nvars for i in dom):
        raise ValueError("relabeling index out of range")
    t = {}
    for e, c in f._t.items():
        new = list(e)
        for i, j in sigma.items():
            new[j] = e[i]
        t[tuple(new)] = c
    return LaurentPoly._raw(f.nvars, t)


def eval_q(f: LaurentPoly | QPoly, q0) -> Fraction | dict[tuple[int, ...], Fraction]:
    """Substitute an exact rational for q."""
    q0 = Fraction(q0)
    if q0 == 0:
        raise ValueError("q0 must be nonzero")
    if isinstance(f, QPoly):
        return f.eval(q0)
    out = {}
    for e, c in f._t.items():
        v = c.eval(q0)
        if v:
            out[e] = v
    return out
