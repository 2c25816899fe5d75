"""Packed-key expansion of products of monomials and binomials.

A term x_0^e_0 ... x_n^e_n q^e_q is encoded as one integer key: every
coordinate gets a bit field of fixed width, x_0 in the most significant field
and q in the least significant.  With nonnegative field offsets, ascending key
order is lexicographic order of the exponent vectors, and multiplying by a
monomial is adding a constant to every key.

Two storage paths share this encoding:

* int64 numpy arrays driven by the kernels in ``ct_workbench.kernels``;
  chosen only when the key fits in 62 bits and the worst-case coefficient
  growth is provably below 2**62;
* Python ints in sorted lists, used otherwise.  Nothing is ever truncated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .qring import QPoly

INT64_SAFE_BITS = 62
INT64_SAFE_BOUND = 1 << 62


class CeilingExceeded(RuntimeError):
    """Raised when an expansion stores more terms than the configured ceiling."""

    def __init__(self, terms: int, ceiling: int):
        super().__init__(f"expansion reached {terms} terms (ceiling {ceiling})")
        self.terms = terms
        self.ceiling = ceiling


@dataclass(frozen=True)
class Layout:
    lo: tuple[int, ...]
    hi: tuple[int, ...]

    def __post_init__(self):
        widths = tuple((h - l).bit_length() for l, h in zip(self.lo, self.hi))
        shifts = [0] * len(widths)
        for c in range(len(widths) - 2, -1, -1):
            shifts[c] = shifts[c + 1] + widths[c + 1]
        object.__setattr__(self, "widths", widths)
        object.__setattr__(self, "shifts", tuple(shifts))

    @property
    def ncoords(self) -> int:
        return len(self.lo)

    @property
    def bits(self) -> int:
        return self.shifts[0] + self.widths[0] if self.lo else 0

    def pack(self, exps) -> int:
        key = 0
        for e, l, s in zip(exps, self.lo, self.shifts):
            key += (e - l) << s
        return key

    def delta(self, d) -> int:
        return sum(v << s for v, s in zip(d, self.shifts))

    def unpack(self, key: int) -> tuple[int, ...]:
        return tuple(
            ((key >> s) & ((1 << w) - 1)) + l
            for s, w, l in zip(self.shifts, self.widths, self.lo)
        )

    def decode(self, keys: np.ndarray) -> np.ndarray:
        out = np.empty((keys.shape[0], self.ncoords), dtype=np.int64)
        for c, (s, w, l) in enumerate(zip(self.shifts, self.widths, self.lo)):
            out[:, c] = ((keys >> s) & ((1 << w) - 1)) + l
        return out

    def kernel_tables(self, ncoords: int):
        """shift/mask/offset arrays for the first ``ncoords`` coordinates."""
        shifts = np.array(self.shifts[:ncoords], dtype=np.int64)
        masks = np.array([(1 << w) - 1 for w in self.widths[:ncoords]], dtype=np.int64)
        offsets = np.array(self.lo[:ncoords], dtype=np.int64)
        return shifts, masks, offsets


@dataclass(frozen=True)
class Step:
    """Multiply by ``c * M`` (monomial step) or by ``1 + c * M`` (binomial step).

    ``d`` is the exponent vector of M including the trailing q-exponent.
    """

    d: tuple[int, ...]
    c: int
    binomial: bool


class Expansion:
    """Fully expanded product in packed form (see module docstring)."""

    def __init__(self, layout: Layout, keys, coeffs, big: bool):
        self.layout = layout
        self.keys = keys
        self.coeffs = coeffs
        self.big = big

    def __len__(self):
        return len(self.keys)

    @property
    def nvars(self) -> int:
        return self.layout.ncoords - 1

    def terms(self):
        """Yield ``(exponent tuple incl. q, int coefficient)`` in key order."""
        if self.big:
            for k, v in zip(self.keys, self.coeffs):
                yield self.layout.unpack(k), v
        else:
            mat = self.layout.decode(self.keys)
            for row, v in zip(mat.tolist(), self.coeffs.tolist()):
                yield tuple(row), v

    def decoded(self):
        if self.big:
            return [self.layout.unpack(k) for k in self.keys], list(self.coeffs)
        return self.layout.decode(self.keys).tolist(), self.coeffs.tolist()

    def same_terms(self, other: "Expansion") -> bool:
        if len(self) != len(other):
            return False
        if not self.big and not other.big:
            return np.array_equal(
                self.layout.decode(self.keys), other.layout.decode(other.keys)
            ) and np.array_equal(self.coeffs, other.coeffs)
        e1, c1 = self.decoded()
        e2, c2 = other.decoded()
        return [tuple(r) for r in e1] == [tuple(r) for r in e2] and c1 == c2

    def ct(self) -> QPoly:
        """Coefficient of x^0 as a polynomial in q."""
        lay = self.layout
        nx = lay.ncoords - 1
        if any(not (lay.lo[c] <= 0 <= lay.hi[c]) for c in range(nx)):
            return QPoly()
        base = lay.pack([0] * nx + [lay.lo[nx]])
        top = base + (1 << lay.widths[nx])
        qlo = lay.lo[nx]
        if self.big:
            import bisect

            i = bisect.bisect_left(self.keys, base)
            j = bisect.bisect_left(self.keys, top)
            return QPoly({k - base + qlo: self.coeffs[t] for t, k in zip(range(i, j), self.keys[i:j])})
        i, j = np.searchsorted(self.keys, [base, top])
        ks = self.keys[i:j] - base + qlo
        return QPoly(dict(zip(ks.tolist(), self.coeffs[i:j].tolist())))


def plan_layout(nvars: int, steps: list[Step]) -> Layout:
    """Coordinate envelope over every intermediate product, starting from 1."""
    m = nvars + 1
    cur_lo = [0] * m
    cur_hi = [0] * m
    env_lo = [0] * m
    env_hi = [0] * m
    for st in steps:
        for c, v in enumerate(st.d):
            if st.binomial:
                cur_lo[c] += min(0, v)
                cur_hi[c] += max(0, v)
            else:
                cur_lo[c] += v
                cur_hi[c] += v
            env_lo[c] = min(env_lo[c], cur_lo[c])
            env_hi[c] = max(env_hi[c], cur_hi[c])
    return Layout(tuple(env_lo), tuple(env_hi))


def coefficient_bound(steps: list[Step]) -> int:
    """Upper bound on the l1-norm of every intermediate product."""
    bound = 1
    for st in steps:
        bound *= (1 + abs(st.c)) if st.binomial else abs(st.c)
    return bound


def ct_windows(nvars: int, steps: list[Step]):
    """Per step, the x-coordinate window outside which a term can never
    return to exponent zero under the remaining steps."""
    rem_lo = [0] * nvars
    rem_hi = [0] * nvars
    windows = [None] * len(steps)
    for s in range(len(steps) - 1, -1, -1):
        windows[s] = ([-h for h in rem_hi], [-l for l in rem_lo])
        st = steps[s]
        for c in range(nvars):
            v = st.d[c]
            if st.binomial:
                rem_lo[c] += min(0, v)
                rem_hi[c] += max(0, v)
            else:
                rem_lo[c] += v
                rem_hi[c] += v
    initial = ([-h for h in rem_hi], [-l for l in rem_lo])
    return initial, windows


def expand(
    nvars: int,
    steps: list[Step],
    *,
    ct_only: bool = False,
    ceiling: int | None = None,
    force_big: bool = False,
) -> Expansion:
    """Multiply out ``steps`` starting from 1.

    With ``ct_only`` the result is exact only in its x^0 part: terms that can
    no longer reach x^0 are dropped after every step.
    """
    layout = plan_layout(nvars, steps)
    big = (
        force_big
        or layout.bits > INT64_SAFE_BITS
        or coefficient_bound(steps) >= INT64_SAFE_BOUND
    )
    initial, windows = ct_windows(nvars, steps) if ct_only else (None, None)
    if ct_only and any(l > 0 or h < 0 for l, h in zip(*initial)):
        return Expansion(layout, [] if big else np.empty(0, np.int64),
                         [] if big else np.empty(0, np.int64), big)
    zero_key = layout.pack([0] * (nvars + 1))
    if big:
        return _expand_big(layout, steps, zero_key, windows, ceiling)
    return _expand_int64(layout, steps, zero_key, windows, ceiling)


def _expand_int64(layout, steps, zero_key, windows, ceiling):
    nvars = layout.ncoords - 1
    keys = np.array([zero_key], dtype=np.int64)
    coeffs = np.array([1], dtype=np.int64)
    shifts, masks, offsets = layout.kernel_tables(nvars)
    cur_lo = [0] * nvars
    cur_hi = [0] * nvars
    for s, st in enumerate(steps):
        delta = layout.delta(st.d)
        if st.binomial:
            keys, coeffs = kernels.merge_binomial(keys, coeffs, delta, st.c)
        else:
            keys = keys + np.int64(delta)
            coeffs = coeffs * np.int64(st.c)
        for c in range(nvars):
            v = st.d[c]
            cur_lo[c] += min(0, v) if st.binomial else v
            cur_hi[c] += max(0, v) if st.binomial else v
        if windows is not None:
            wlo, whi = windows[s]
            if any(cur_lo[c] < wlo[c] or cur_hi[c] > whi[c] for c in range(nvars)):
                keys, coeffs = kernels.prune_window(
                    keys, coeffs, shifts, masks, offsets,
                    np.array(wlo, dtype=np.int64), np.array(whi, dtype=np.int64),
                )
                cur_lo = [max(a, b) for a, b in zip(cur_lo, wlo)]
                cur_hi = [min(a, b) for a, b in zip(cur_hi, whi)]
        if ceiling is not None and keys.shape[0] > ceiling:
            raise CeilingExceeded(int(keys.shape[0]), ceiling)
    return Expansion(layout, keys, coeffs, big=False)


def _expand_big(layout, steps, zero_key, windows, ceiling):
    nvars = layout.ncoords - 1
    terms = {zero_key: 1}
    for s, st in enumerate(steps):
        delta = layout.delta(st.d)
        if st.binomial:
            new = dict(terms)
            for k, v in terms.items():
                nk = k + delta
                t = new.get(nk, 0) + st.c * v
                if t:
                    new[nk] = t
                else:
                    new.pop(nk, None)
            terms = new
        else:
            terms = {k + delta: v * st.c for k, v in terms.items()}
        if windows is not None:
            wlo, whi = windows[s]
            kept = {}
            for k, v in terms.items():
                e = layout.unpack(k)
                if all(wlo[c] <= e[c] <= whi[c] for c in range(nvars)):
                    kept[k] = v
            terms = kept
        if ceiling is not None and len(terms) > ceiling:
            raise CeilingExceeded(len(terms), ceiling)
    keys = sorted(terms)
    return Expansion(layout, keys, [terms[k] for k in keys], big=True)
