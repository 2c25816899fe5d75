"""Closed-form right-hand sides of the constant term identities, as exact
``QRat`` values, and the instance type that names one identity at one
parameter point."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from itertools import accumulate, combinations
from typing import Iterable, Mapping, Sequence

from .qring import ONE, QPoly, QRat, one_minus_q_pow, qfac, qmultinomial
from .tournament import QSet, e_bar, inversion_set


class Theorem(str, enum.Enum):
    DIXON = "DIXON"
    DYSON = "DYSON"
    QDYSON = "QDYSON"
    BG = "BG"
    MAIN1 = "MAIN1"
    MAIN2 = "MAIN2"
    COR_I = "COR_I"
    COR_II = "COR_II"
    X1 = "X1"
    X2 = "X2"

    @classmethod
    def parse(cls, name: str) -> "Theorem":
        try:
            return cls(name.strip().upper().replace("-", "_"))
        except ValueError:
            raise InvalidInstance(f"unknown theorem {name!r}") from None


class InvalidInstance(ValueError):
    pass


class PoleError(ZeroDivisionError):
    """The closed form has a vanishing denominator factor at this point."""


# first vertex of the Q ground set, per theorem
_GROUND_FIRST = {Theorem.BG: 1, Theorem.MAIN1: 2, Theorem.MAIN2: 3}
# theorems whose a-vector starts at a_0
_HAS_A0 = {Theorem.DYSON, Theorem.QDYSON, Theorem.MAIN1, Theorem.MAIN2}
_MIN_N = {
    Theorem.DIXON: 0, Theorem.DYSON: 0, Theorem.QDYSON: 0, Theorem.BG: 1,
    Theorem.MAIN1: 2, Theorem.MAIN2: 3, Theorem.COR_I: 3, Theorem.COR_II: 4,
    Theorem.X1: 2, Theorem.X2: 3,
}


@dataclass(frozen=True)
class IdentityInstance:
    """One identity at one parameter point.

    ``a`` includes a_0 for DYSON, QDYSON, MAIN1 and MAIN2 and is (a_1..a_n)
    otherwise.  ``Q`` holds pairs (i, j) with i < j; for COR_I/COR_II it is
    derived from ``sigma`` and must not be given.
    """

    theorem: Theorem
    n: int
    a: tuple[int, ...] = ()
    Q: tuple[tuple[int, int], ...] = ()
    sigma: tuple[int, ...] | None = None

    @classmethod
    def make(cls, theorem, a: Sequence[int] = (), Q: Iterable = (), sigma=None, n: int | None = None):
        th = theorem if isinstance(theorem, Theorem) else Theorem.parse(str(theorem))
        a = tuple(int(v) for v in a)
        if th is Theorem.DIXON:
            if n is None:
                raise InvalidInstance("DIXON needs n")
            derived = int(n)
        else:
            if not a:
                raise InvalidInstance(f"{th.value} needs an a-vector")
            derived = len(a) - 1 if th in _HAS_A0 else len(a)
            if n is not None and int(n) != derived:
                raise InvalidInstance(f"n={n} does not match len(a)={len(a)} for {th.value}")
        try:
            pairs = tuple(sorted((int(i), int(j)) for i, j in Q))
        except (TypeError, ValueError):
            raise InvalidInstance(f"malformed Q {Q!r}") from None
        sig = tuple(int(v) for v in sigma) if sigma is not None else None
        inst = cls(th, derived, a, pairs, sig)
        inst.validate()
        return inst

    def validate(self) -> None:
        th, n, a = self.theorem, self.n, self.a
        if n < _MIN_N[th]:
            raise InvalidInstance(f"{th.value} needs n >= {_MIN_N[th]}, got n={n}")
        if any(v < 0 for v in a):
            raise InvalidInstance("a-vector entries must be nonnegative")
        if th in (Theorem.BG, Theorem.COR_I, Theorem.COR_II, Theorem.X1, Theorem.X2):
            if any(v < 1 for v in a):
                raise InvalidInstance(f"{th.value} needs a_i >= 1")
        if th in (Theorem.MAIN1, Theorem.MAIN2) and any(v < 1 for v in a[1:]):
            raise InvalidInstance(f"{th.value} needs a_j >= 1 for j >= 1")
        if th in _GROUND_FIRST:
            first = _GROUND_FIRST[th]
            for i, j in self.Q:
                if not (first <= i < j <= n):
                    raise InvalidInstance(
                        f"pair {(i, j)} outside {{(i,j) | {first} <= i < j <= {n}}} for {th.value}"
                    )
            if len(set(self.Q)) != len(self.Q):
                raise InvalidInstance("repeated pair in Q")
        elif self.Q:
            raise InvalidInstance(f"{th.value} takes no Q")
        if th in (Theorem.COR_I, Theorem.COR_II):
            if self.sigma is None or sorted(self.sigma) != list(range(1, n + 1)):
                raise InvalidInstance(f"{th.value} needs sigma, a permutation of 1..{n}")
        elif self.sigma is not None:
            raise InvalidInstance(f"{th.value} takes no sigma")

    # derived quantities ----------------------------------------------------

    def qset(self) -> QSet | None:
        if self.theorem in _GROUND_FIRST:
            return QSet(self.n, frozenset(self.Q), _GROUND_FIRST[self.theorem])
        return None

    def cor_pairs(self) -> frozenset:
        return inversion_set(self.sigma)

    def vertex_a(self) -> tuple[int, ...]:
        """a indexed by variable: entry v is a_v (a_0 = 0 when absent)."""
        return self.a if self.theorem in _HAS_A0 else (0,) + self.a

    def partial_sums(self, sigma: Sequence[int]) -> list[int]:
        """sigma_k = a_{sigma(1)} + ... + a_{sigma(k)}."""
        av = self.vertex_a()
        return list(accumulate(av[v] for v in sigma))

    # serialization ------------------------------------------------------

    def to_json(self) -> dict:
        obj: dict = {"theorem": self.theorem.value}
        if self.theorem is Theorem.DIXON:
            obj["n"] = self.n
        else:
            obj["a"] = list(self.a)
        if self.theorem in _GROUND_FIRST:
            obj["Q"] = [list(p) for p in self.Q]
        if self.sigma is not None:
            obj["sigma"] = list(self.sigma)
        return obj

    @classmethod
    def from_json(cls, obj: Mapping | str) -> "IdentityInstance":
        if isinstance(obj, str):
            try:
                obj = json.loads(obj)
            except json.JSONDecodeError as exc:
                raise InvalidInstance(f"malformed JSON: {exc}") from None
        if not isinstance(obj, Mapping):
            raise InvalidInstance("instance must be a JSON object")
        if "instance" in obj and "theorem" not in obj:
            obj = obj["instance"]
        if "theorem" not in obj:
            raise InvalidInstance("instance has no theorem")
        return cls.make(obj["theorem"], obj.get("a", ()), obj.get("Q", ()), obj.get("sigma"), obj.get("n"))

    def label(self) -> str:
        parts = [self.theorem.value]
        if self.theorem is Theorem.DIXON:
            parts.append(f"n={self.n}")
        else:
            parts.append("a=(" + ",".join(map(str, self.a)) + ")")
        if self.Q:
            parts.append("Q=" + json.dumps([list(p) for p in self.Q], separators=(",", ":")))
        if self.sigma is not None:
            parts.append("sigma=(" + ",".join(map(str, self.sigma)) + ")")
        return " ".join(parts)


# ---------------------------------------------------------------------------
# integer identities
# ---------------------------------------------------------------------------


def dixon_lhs(n: int) -> int:
    return sum((-1) ** k * math.comb(2 * n, k + n) ** 3 for k in range(-n, n + 1))


def dixon_rhs(n: int) -> int:
    return math.factorial(3 * n) // math.factorial(n) ** 3


def dyson_rhs(a: Sequence[int]) -> int:
    out = math.factorial(sum(a))
    for v in a:
        out //= math.factorial(v)
    return out


def qdyson_rhs(a: Sequence[int]) -> QPoly:
    return qmultinomial(a)


# ---------------------------------------------------------------------------
# closed forms with a winner permutation
# ---------------------------------------------------------------------------


def _qpow(e: int) -> QPoly:
    return QPoly.monomial(e)


def _sigma_tail(av: Sequence[int], sigma: Sequence[int], a0: int) -> QRat:
    """(q)_{a0+|a|}/((q)_{a0} prod (q)_{a_i}) * prod_i (1-q^{a_sigma(i)})/(1-q^{a0+sigma_i}).

    ``av`` is indexed by vertex (entry 0 unused); ``sigma`` lists vertices 1..n.
    """
    parts = [a0] + [av[v] for v in range(1, len(av))]
    num = qmultinomial(parts)
    den = ONE
    for s_k, v in zip(accumulate(av[v] for v in sigma), sigma):
        num = num * one_minus_q_pow(av[v])
        den = den * one_minus_q_pow(a0 + s_k)
    return QRat(num, den)


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _winner(n: int, Q) -> tuple[int, ...] | None:
    T = e_bar(Q, n) if not isinstance(Q, QSet) else e_bar(Q)
    return T.winner_permutation() if T.is_transitive() else None


def _pairs(Q) -> frozenset:
    return Q.pairs if isinstance(Q, QSet) else frozenset(tuple(p) for p in Q)


def bg_rhs(a: Sequence[int], Q) -> QRat:
    """Bressoud-Goulden value for a = (a_1..a_n) and Q within {1 <= i < j <= n}."""
    n = len(a)
    pairs = _pairs(Q)
    QSet(n, pairs, 1)
    sigma = _winner(n, pairs)
    if sigma is None:
        return QRat(0)
    av = (0,) + tuple(a)
    return _sigma_tail(av, sigma, 0) * _sign(len(pairs))


def main1_rhs(a: Sequence[int], Q1) -> QRat:
    """a = (a_0..a_n), Q1 within {2 <= i < j <= n}."""
    n = len(a) - 1
    pairs = _pairs(Q1)
    if n < 2:
        raise InvalidInstance("MAIN1 needs n >= 2")
    QSet(n, pairs, 2)
    sigma = _winner(n, pairs)
    if sigma is None:
        return QRat(0)
    a0 = a[0]
    lead = QRat(_qpow(a[sigma[0]]) - _qpow(a[sigma[1]]), one_minus_q_pow(a0 + a[sigma[1]]))
    return lead * _sigma_tail(a, sigma, a0) * _sign(len(pairs))


def main2_rhs(a: Sequence[int], Q2) -> QRat:
    """a = (a_0..a_n), Q2 within {3 <= i < j <= n}."""
    n = len(a) - 1
    pairs = _pairs(Q2)
    if n < 3:
        raise InvalidInstance("MAIN2 needs n >= 3")
    QSet(n, pairs, 3)
    sigma = _winner(n, pairs)
    if sigma is None:
        return QRat(0)
    a0 = a[0]
    s1, s2, s3 = (a[v] for v in sigma[:3])
    lead = QRat((ONE + _qpow(s1)) * (_qpow(s2) - _qpow(s3)), one_minus_q_pow(a0 + s1 + s3))
    return lead * _sigma_tail(a, sigma, a0) * _sign(len(pairs))


def _check_sigma(sigma, n, min_n, name):
    if n < min_n:
        raise InvalidInstance(f"{name} needs n >= {min_n}")
    if sorted(sigma) != list(range(1, n + 1)):
        raise InvalidInstance("sigma must be a permutation of 1..n")


def cor_i_rhs(a: Sequence[int], sigma: Sequence[int]) -> QRat:
    """a = (a_1..a_n); Q is the inversion set of sigma."""
    n = len(a)
    _check_sigma(sigma, n, 3, "COR_I")
    av = (0,) + tuple(a)
    s1, s2, s3 = (av[v] for v in sigma[:3])
    lead = QRat(_qpow(s2) - _qpow(s3), one_minus_q_pow(s1 + s3))
    return lead * _sigma_tail(av, sigma, 0) * _sign(len(inversion_set(sigma)))


def cor_ii_rhs(a: Sequence[int], sigma: Sequence[int]) -> QRat:
    n = len(a)
    _check_sigma(sigma, n, 4, "COR_II")
    av = (0,) + tuple(a)
    s1, s2, s3, s4 = (av[v] for v in sigma[:4])
    lead = QRat((ONE + _qpow(s2)) * (_qpow(s3) - _qpow(s4)), one_minus_q_pow(s1 + s2 + s4))
    return lead * _sigma_tail(av, sigma, 0) * _sign(len(inversion_set(sigma)))


def _x_tail(a: Sequence[int]) -> QRat:
    num = qfac(sum(a))
    den = ONE
    for v in a:
        den = den * qfac(v)
    for v, s in zip(a, accumulate(a)):
        num = num * one_minus_q_pow(v)
        den = den * one_minus_q_pow(s)
    return QRat(num, den)


def x1_rhs(a: Sequence[int]) -> QRat:
    """Constant term of the b = 0 product with prefactor x_0/x_1; a = (a_1..a_n)."""
    if len(a) < 2:
        raise InvalidInstance("X1 needs n >= 2")
    return QRat(_qpow(a[0]) - _qpow(a[1]), one_minus_q_pow(a[1])) * _x_tail(a)


def x2_rhs(a: Sequence[int]) -> QRat:
    """Same with prefactor x_0/x_2."""
    if len(a) < 3:
        raise InvalidInstance("X2 needs n >= 3")
    lead = QRat((ONE + _qpow(a[0])) * (_qpow(a[1]) - _qpow(a[2])), one_minus_q_pow(a[0] + a[2]))
    return lead * _x_tail(a)


def rhs(inst: IdentityInstance) -> QRat:
    th = inst.theorem
    if th is Theorem.DIXON:
        return QRat(dixon_rhs(inst.n))
    if th is Theorem.DYSON:
        return QRat(dyson_rhs(inst.a))
    if th is Theorem.QDYSON:
        return QRat(qdyson_rhs(inst.a))
    if th is Theorem.BG:
        return bg_rhs(inst.a, inst.Q)
    if th is Theorem.MAIN1:
        return main1_rhs(inst.a, inst.Q)
    if th is Theorem.MAIN2:
        return main2_rhs(inst.a, inst.Q)
    if th is Theorem.COR_I:
        return cor_i_rhs(inst.a, inst.sigma)
    if th is Theorem.COR_II:
        return cor_ii_rhs(inst.a, inst.sigma)
    if th is Theorem.X1:
        return x1_rhs(inst.a)
    if th is Theorem.X2:
        return x2_rhs(inst.a)
    raise InvalidInstance(f"no closed form for {th}")


# ---------------------------------------------------------------------------
# the main closed forms as functions of t = q^{a_0}, a_0 = -b
# ---------------------------------------------------------------------------


def _factor(e: int) -> tuple[QPoly, QPoly]:
    """1 - q^e for any integer e, as (num, den) with den a power of q."""
    if e >= 0:
        return one_minus_q_pow(e), ONE
    return _qpow(-e) - ONE, _qpow(-e)


def _main_data(inst: IdentityInstance):
    if inst.theorem not in (Theorem.MAIN1, Theorem.MAIN2):
        raise InvalidInstance("zero points are defined for MAIN1/MAIN2 instances")
    sigma = _winner(inst.n, inst.Q)
    if sigma is None:
        raise InvalidInstance("zero points need a transitive instance")
    a = inst.a
    sums = list(accumulate(a[v] for v in sigma))
    if inst.theorem is Theorem.MAIN1:
        extra = a[sigma[1]]
    else:
        extra = a[sigma[0]] + a[sigma[2]]
    return sigma, sums, extra


def rhs_zero_points(inst: IdentityInstance) -> set[int]:
    """b in 1..|a| where the closed form with q^{a_0} -> q^{-b} vanishes."""
    sigma, sums, extra = _main_data(inst)
    total = sum(inst.a[1:])
    return set(range(1, total + 1)) - set(sums) - {extra}


def rhs_pole_points(inst: IdentityInstance) -> set[int]:
    """b where a denominator factor of the closed form vanishes."""
    sigma, sums, extra = _main_data(inst)
    return set(sums) | {extra}


def rhs_at_a0(inst: IdentityInstance, a0: int) -> QRat:
    """MAIN1/MAIN2 closed form at an arbitrary integer a_0.

    (q)_{a_0+|a|}/(q)_{a_0} is taken as prod_{i=1}^{|a|} (1 - q^{a_0+i}),
    which is the Pochhammer quotient for every integer a_0.  Raises
    ``PoleError`` when a denominator factor vanishes.
    """
    sigma, sums, extra = _main_data(inst)
    a = inst.a
    num_factors = []
    den_factors = [_factor(a0 + extra)] + [_factor(a0 + s) for s in sums]
    if any(d[0].is_zero() for d in den_factors):
        raise PoleError(f"denominator vanishes at a_0 = {a0}")
    if inst.theorem is Theorem.MAIN1:
        lead = _qpow(a[sigma[0]]) - _qpow(a[sigma[1]])
    else:
        s1, s2, s3 = (a[v] for v in sigma[:3])
        lead = (ONE + _qpow(s1)) * (_qpow(s2) - _qpow(s3))
    num = lead * _sign(len(inst.Q))
    den = ONE
    total = sum(a[1:])
    num_factors.extend(_factor(a0 + i) for i in range(1, total + 1))
    num_factors.extend(_factor(v) for v in a[1:])
    for v in a[1:]:
        den = den * qfac(v)
    for fn, fd in num_factors:
        num = num * fn
        den = den * fd
    for fn, fd in den_factors:
        num = num * fd
        den = den * fn
    return QRat(num, den)


def rhs_at_b(inst: IdentityInstance, b: int) -> QRat:
    return rhs_at_a0(inst, -b)
