"""Exact arithmetic in Z[q] and its fraction field, plus q-series primitives.

``QPoly`` is a sparse polynomial in q with Python-int coefficients.  ``QRat``
is an unreduced quotient of two ``QPoly``; equality is decided by
cross-multiplication, so no polynomial GCD is ever needed.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping


class QPoly:
    """Polynomial in q with integer coefficients, stored as ``{exponent: coeff}``.

    Instances are immutable; zero coefficients are never stored.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | int | None = None):
        if coeffs is None:
            c = {}
        elif isinstance(coeffs, int):
            c = {0: coeffs} if coeffs else {}
        else:
            c = {}
            for e, v in coeffs.items():
                if e < 0:
                    raise ValueError(f"negative q-exponent {e}")
                if v:
                    c[int(e)] = int(v)
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: dict) -> "QPoly":
        p = cls.__new__(cls)
        p._c = c
        p._hash = None
        return p

    @classmethod
    def monomial(cls, e: int, coeff: int = 1) -> "QPoly":
        return cls({e: coeff})

    @classmethod
    def from_list(cls, coeffs: Iterable[int]) -> "QPoly":
        """Dense constructor: ``coeffs[i]`` is the coefficient of q^i."""
        return cls(dict(enumerate(coeffs)))

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items())

    def is_zero(self) -> bool:
        return not self._c

    @property
    def degree(self) -> float | int:
        # -inf sentinel for the zero polynomial
        return max(self._c) if self._c else -math.inf

    def coeff(self, e: int) -> int:
        return self._c.get(e, 0)

    def leading(self) -> int:
        return self._c[max(self._c)]

    # ring operations -----------------------------------------------------

    def __add__(self, other):
        other = _as_qpoly(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for e, v in other._c.items():
            s = c.get(e, 0) + v
            if s:
                c[e] = s
            else:
                c.pop(e, None)
        return QPoly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return QPoly._raw({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        other = _as_qpoly(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_qpoly(other)
        if other is NotImplemented:
            return other
        c: dict[int, int] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + v1 * v2
        return QPoly._raw({e: v for e, v in c.items() if v})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = QPoly(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> "QPoly":
        """Multiply by q^k (k may be negative if the result stays polynomial)."""
        if self._c and min(self._c) + k < 0:
            raise ValueError("shift would produce a negative q-exponent")
        return QPoly._raw({e + k: v for e, v in self._c.items()})

    def divmod(self, other: "QPoly") -> tuple["QPoly", "QPoly"]:
        """Long division over Z.  Raises if a quotient coefficient is not integral."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        dlead_e = max(other._c)
        dlead = other._c[dlead_e]
        rem = dict(self._c)
        quo: dict[int, int] = {}
        while rem:
            top = max(rem)
            if top < dlead_e:
                break
            v = rem[top]
            if v % dlead:
                raise ArithmeticError("non-integral quotient coefficient")
            qv = v // dlead
            qe = top - dlead_e
            quo[qe] = qv
            for e, dv in other._c.items():
                k = e + qe
                s = rem.get(k, 0) - qv * dv
                if s:
                    rem[k] = s
                else:
                    rem.pop(k, None)
        return QPoly._raw(quo), QPoly._raw(rem)

    def exact_div(self, other: "QPoly") -> "QPoly":
        quo, rem = self.divmod(other)
        if not rem.is_zero():
            raise ArithmeticError(f"inexact division: ({self}) / ({other})")
        return quo

    # evaluation ----------------------------------------------------------

    def __call__(self, q0) -> Fraction:
        return self.eval(q0)

    def eval(self, q0) -> Fraction:
        q0 = Fraction(q0)
        return sum((Fraction(v) * q0**e for e, v in self._c.items()), Fraction(0))

    # comparison / hashing -------------------------------------------------

    def __eq__(self, other):
        other = _as_qpoly(other)
        if other is NotImplemented:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __bool__(self):
        return bool(self._c)

    # text ------------------------------------------------------------------

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e, v in sorted(self._c.items()):
            mag = abs(v)
            if e == 0:
                body = str(mag)
            else:
                qpart = "q" if e == 1 else f"q^{e}"
                body = qpart if mag == 1 else f"{mag}*{qpart}"
            if not parts:
                parts.append(body if v > 0 else f"-{body}")
            else:
                parts.append(f"{'+' if v > 0 else '-'} {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"QPoly({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "QPoly":
        """Inverse of ``str``; also tolerates missing spaces."""
        s = text.replace(" ", "")
        if s in ("", "0"):
            return cls()
        if s[0] not in "+-":
            s = "+" + s
        c: dict[int, int] = {}
        pos = 0
        for m in _TERM_RE.finditer(s):
            if m.start() != pos:
                raise ValueError(f"cannot parse QPoly {text!r}")
            pos = m.end()
            sign = -1 if m.group(1) == "-" else 1
            num, has_q, exp = m.group(2), m.group(3), m.group(4)
            if not num and not has_q:
                raise ValueError(f"cannot parse QPoly {text!r}")
            v = int(num) if num else 1
            e = (int(exp) if exp else 1) if has_q else 0
            c[e] = c.get(e, 0) + sign * v
        if pos != len(s):
            raise ValueError(f"cannot parse QPoly {text!r}")
        return cls(c)


_TERM_RE = re.compile(r"([+-])(\d+)?(?:\*?(q)(?:\^(\d+))?)?")


def _as_qpoly(x):
    if isinstance(x, QPoly):
        return x
    if isinstance(x, int):
        return QPoly(x)
    return NotImplemented


ZERO = QPoly()
ONE = QPoly(1)
Q = QPoly({1: 1})


def one_minus_q_pow(e: int) -> QPoly:
    """1 - q^e for e >= 0 (zero when e == 0)."""
    if e < 0:
        raise ValueError("exponent must be nonnegative")
    return ONE - QPoly.monomial(e)


class QRat:
    """Quotient num/den of two QPoly, kept unreduced."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = _as_qpoly(num)
        den = _as_qpoly(den)
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("QRat parts must be QPoly or int")
        if den.is_zero():
            raise ZeroDivisionError("QRat with zero denominator")
        self.num = num
        self.den = den

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, (QPoly, int)):
            other = QRat(other)
        if not isinstance(other, QRat):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None  # equality is not structural

    def __mul__(self, other):
        if isinstance(other, (QPoly, int)):
            return QRat(self.num * other, self.den)
        if isinstance(other, QRat):
            return QRat(self.num * other.num, self.den * other.den)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (QPoly, int)):
            other = QRat(other)
        if not isinstance(other, QRat):
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero QRat")
        return QRat(self.num * other.den, self.den * other.num)

    def __add__(self, other):
        if isinstance(other, (QPoly, int)):
            other = QRat(other)
        if not isinstance(other, QRat):
            return NotImplemented
        return QRat(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return QRat(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def eval(self, q0) -> Fraction:
        d = self.den.eval(q0)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at q = {q0}")
        return self.num.eval(q0) / d

    def to_poly(self) -> QPoly:
        """Exact quotient as a polynomial; raises if den does not divide num."""
        return self.num.exact_div(self.den)

    def to_json(self) -> dict:
        return {"num": str(self.num), "den": str(self.den)}

    @classmethod
    def from_json(cls, obj: Mapping) -> "QRat":
        return cls(QPoly.parse(obj["num"]), QPoly.parse(obj["den"]))

    def __repr__(self):
        return f"QRat(({self.num}) / ({self.den}))"

    def __str__(self):
        if self.den == ONE or self.num.is_zero():
            return str(self.num)
        return f"({self.num}) / ({self.den})"


# q-series primitives --------------------------------------------------------


@lru_cache(maxsize=None)
def qfac(k: int) -> QPoly:
    """(q)_k = (1-q)(1-q^2)...(1-q^k)."""
    if k < 0:
        raise ValueError("qfac needs k >= 0")
    if k == 0:
        return ONE
    return qfac(k - 1) * one_minus_q_pow(k)


def qpochhammer_shifted(start: int, k: int) -> QPoly:
    """(q^start)_k = prod_{t<k} (1 - q^(start+t)) for start >= 0."""
    out = ONE
    for t in range(k):
        out = out * one_minus_q_pow(start + t)
    return out


@lru_cache(maxsize=None)
def qbinom(m: int, n: int) -> QPoly:
    """Gaussian binomial [m n] = (q^(m-n+1))_n / (q)_n as an exact polynomial."""
    if n < 0:
        raise ValueError("qbinom needs n >= 0")
    if n == 0:
        return ONE
    if m < 0:
        # (q^(m-n+1))_n has negative q-powers: a Laurent polynomial, not in Z[q]
        raise ValueError("qbinom with negative m is not a polynomial in q")
    if m < n:
        return ZERO
    return qpochhammer_shifted(m - n + 1, n).exact_div(qfac(n))


def qmultinomial(a: Iterable[int]) -> QPoly:
    """(q)_{a_0+...+a_n} / prod (q)_{a_i}, built as a product of q-binomials."""
    out = ONE
    total = 0
    for ai in a:
        if ai < 0:
            raise ValueError("qmultinomial needs nonnegative parts")
        total += ai
        out = out * qbinom(total, ai)
    return out


def pochhammer_expand_identity_check(n: int) -> bool:
    """Check (u)_n == sum_k q^(k(k-1)/2) [n k] (-u)^k as polynomials in u and q."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    # polynomials in u: list index = power of u
    lhs = [ONE]
    for t in range(n):
        nxt = [ZERO] * (len(lhs) + 1)
        for k, c in enumerate(lhs):
            nxt[k] = nxt[k] + c
            nxt[k + 1] = nxt[k + 1] - c.shift(t)
        lhs = nxt
    rhs = []
    for k in range(n + 1):
        term = qbinom(n, k).shift(k * (k - 1) // 2)
        rhs.append(term if k % 2 == 0 else -term)
    return lhs == rhs
