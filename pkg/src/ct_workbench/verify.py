"""Brute-force oracle, instance sweeps, lemma checks and reports."""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Iterable, Sequence

import numpy as np

from . import identities as ids
from .identities import IdentityInstance, InvalidInstance, PoleError, Theorem
from .laurent import (
    CeilingExceeded,
    Monomial,
    Pochhammer,
    ProductSpec,
    andrews_spec,
    ct_product,
    dn_spec,
    dyson_classical_spec,
    expand_product,
    flipped_pair_factors,
    pair_factors,
    prefactor_exps,
)
from .qring import QPoly, QRat
from .tournament import (
    QSet,
    all_qsets,
    all_tournaments,
    census,
    e_bar,
    r1_family,
    r2_family,
    subsets_of,
)

DEFAULT_CEILING = 5_000_000
CEILING_ENV = "CT_WORKBENCH_CEILING"
DEFAULT_Q0 = Fraction(7, 5)


def default_ceiling() -> int:
    raw = os.environ.get(CEILING_ENV)
    if raw is None or raw == "":
        return DEFAULT_CEILING
    value = int(raw)
    if value < 1:
        raise ValueError(f"{CEILING_ENV} must be >= 1")
    return value


# ---------------------------------------------------------------------------
# left-hand sides
# ---------------------------------------------------------------------------


def lhs_spec(inst: IdentityInstance) -> ProductSpec:
    """The Laurent product whose constant term is the identity's left side.

    Variables are x_0..x_n throughout; identities stated in x_1..x_n leave
    x_0 as a spectator so that vertex v is variable x_v.
    """
    th, n, a = inst.theorem, inst.n, inst.a
    nv = n + 1
    if th is Theorem.DYSON:
        return dyson_classical_spec(a)
    if th is Theorem.QDYSON:
        return andrews_spec(a)
    if th is Theorem.BG:
        pre = Monomial(prefactor_exps(nv, inst.Q))
        return ProductSpec(nv, (pre,)) + dn_spec((0,) + a, first=1)
    if th is Theorem.MAIN1:
        pre = Monomial(prefactor_exps(nv, inst.Q, extra=(0, 1)))
        return ProductSpec(nv, (pre,)) + dn_spec(a)
    if th is Theorem.MAIN2:
        pre = Monomial(prefactor_exps(nv, inst.Q, extra=(0, 2)))
        return ProductSpec(nv, (pre,)) + dn_spec(a)
    if th in (Theorem.COR_I, Theorem.COR_II):
        s = inst.sigma
        top = s[1] if th is Theorem.COR_I else s[2]
        pre = Monomial(prefactor_exps(nv, inst.cor_pairs(), extra=(s[0], top), reverse=True))
        return ProductSpec(nv, (pre,)) + dn_spec((0,) + a, first=1)
    if th in (Theorem.X1, Theorem.X2):
        av = (0,) + a
        fs = [Monomial(prefactor_exps(nv, (), extra=(0, 1 if th is Theorem.X1 else 2)))]
        fs.extend(Pochhammer(j, 0, 1, av[j] - 1) for j in range(1, nv))
        return ProductSpec(nv, tuple(fs)) + dn_spec(av, first=1)
    raise InvalidInstance(f"{th.value} has no Laurent left-hand side")


def lhs_ct(inst: IdentityInstance, *, ceiling: int | None = None, prune: bool = True) -> QPoly:
    if inst.theorem is Theorem.DIXON:
        return QPoly({0: ids.dixon_lhs(inst.n)})
    spec = lhs_spec(inst)
    if prune:
        return ct_product(spec, ceiling=ceiling)
    return expand_product(spec, ceiling=ceiling).ct()


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

MATCH = "MATCH"
MISMATCH = "MISMATCH"
SKIPPED = "SKIPPED"


@dataclass
class VerificationReport:
    instance: IdentityInstance
    verdict: str
    lhs_ct: QPoly | None = None
    rhs: QRat | None = None
    reason: str | None = None
    timing_ms: float = 0.0
    transitive: bool | None = None
    sigma: tuple[int, ...] | None = None

    def to_json(self, timing: bool = True) -> dict:
        obj = {
            "instance": self.instance.to_json(),
            "verdict": self.verdict,
            "lhs_ct": None if self.lhs_ct is None else str(self.lhs_ct),
            "rhs": None if self.rhs is None else self.rhs.to_json(),
            "transitive": self.transitive,
            "sigma": None if self.sigma is None else list(self.sigma),
        }
        if self.reason is not None:
            obj["reason"] = self.reason
        if timing:
            obj["timing_ms"] = round(self.timing_ms, 3)
        return obj


def _structure(inst: IdentityInstance):
    if inst.theorem in (Theorem.BG, Theorem.MAIN1, Theorem.MAIN2):
        T = e_bar(inst.qset())
        tr = T.is_transitive()
        return tr, (T.winner_permutation() if tr else None)
    if inst.theorem in (Theorem.COR_I, Theorem.COR_II):
        return True, inst.sigma
    return None, None


def verify_instance(inst: IdentityInstance, *, ceiling: int | None = None, prune: bool = True) -> VerificationReport:
    """Expand the left side, take its constant term, and compare with the
    closed form by cross-multiplication."""
    start = time.perf_counter()
    if ceiling is None:
        ceiling = default_ceiling()
    try:
        inst.validate()
        transitive, sigma = _structure(inst)
        rhs = ids.rhs(inst)
        lhs = lhs_ct(inst, ceiling=ceiling, prune=prune)
    except InvalidInstance as exc:
        return VerificationReport(inst, SKIPPED, reason=f"invalid: {exc}",
                                  timing_ms=(time.perf_counter() - start) * 1e3)
    except CeilingExceeded as exc:
        return VerificationReport(inst, SKIPPED, reason=f"ceiling: {exc}",
                                  timing_ms=(time.perf_counter() - start) * 1e3)
    verdict = MATCH if lhs * rhs.den == rhs.num else MISMATCH
    return VerificationReport(
        inst, verdict, lhs_ct=lhs, rhs=rhs, transitive=transitive, sigma=sigma,
        timing_ms=(time.perf_counter() - start) * 1e3,
    )


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

ALL_SUBSETS = "ALL_SUBSETS"
EMPTY_ONLY = "EMPTY_ONLY"
LIST = "LIST"


@dataclass(frozen=True)
class SweepSpec:
    theorem: Theorem
    n_values: tuple[int, ...]
    amax: int = 2
    amin: int | None = None
    a0_values: tuple[int, ...] | None = None
    sum_max: int | None = None
    q_policy: str = ALL_SUBSETS
    q_list: tuple[tuple[tuple[int, int], ...], ...] = ()
    jobs: int = 1

    def __post_init__(self):
        if self.amax < 0 or (self.amin is not None and self.amin > self.amax):
            raise ValueError("bad a-bounds")
        if self.q_policy not in (ALL_SUBSETS, EMPTY_ONLY, LIST):
            raise ValueError(f"unknown Q policy {self.q_policy}")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if not self.n_values or min(self.n_values) < 0:
            raise ValueError("n values must be nonnegative and nonempty")

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem.value,
            "n": list(self.n_values),
            "amax": self.amax,
            "amin": self.amin,
            "a0": None if self.a0_values is None else list(self.a0_values),
            "sum_max": self.sum_max,
            "q_policy": self.q_policy,
            "q_list": [[list(p) for p in Q] for Q in self.q_list],
            "jobs": self.jobs,
        }

    @classmethod
    def from_json(cls, obj) -> "SweepSpec":
        n = obj["n"]
        return cls(
            theorem=Theorem.parse(obj["theorem"]),
            n_values=tuple(n) if isinstance(n, list) else (int(n),),
            amax=int(obj.get("amax", 2)),
            amin=obj.get("amin"),
            a0_values=None if obj.get("a0") is None else tuple(obj["a0"]),
            sum_max=obj.get("sum_max"),
            q_policy=obj.get("q_policy", ALL_SUBSETS),
            q_list=tuple(tuple((int(i), int(j)) for i, j in Q) for Q in obj.get("q_list", [])),
            jobs=int(obj.get("jobs", 1)),
        )


def _q_choices(spec: SweepSpec, n: int, first: int) -> list[frozenset]:
    if spec.q_policy == EMPTY_ONLY:
        return [frozenset()]
    if spec.q_policy == LIST:
        return [frozenset(tuple(p) for p in Q) for Q in spec.q_list]
    return subsets_of(list(combinations(range(first, n + 1), 2)))


def enumerate_instances(spec: SweepSpec) -> list[IdentityInstance]:
    """Deterministic order: n, then Q (lexicographic pair lists) or sigma,
    then a_0, then the a-vector lexicographically."""
    th = spec.theorem
    out: list[IdentityInstance] = []
    for n in spec.n_values:
        if th is Theorem.DIXON:
            out.append(IdentityInstance.make(th, n=n))
            continue
        if th in (Theorem.DYSON, Theorem.QDYSON):
            lo = 0 if spec.amin is None else spec.amin
            for a in product(range(lo, spec.amax + 1), repeat=n + 1):
                if spec.sum_max is None or sum(a) <= spec.sum_max:
                    out.append(IdentityInstance.make(th, a))
            continue
        lo = 1 if spec.amin is None else spec.amin
        vectors = [a for a in product(range(lo, spec.amax + 1), repeat=n)
                   if spec.sum_max is None or sum(a) <= spec.sum_max]
        if th in (Theorem.X1, Theorem.X2):
            out.extend(IdentityInstance.make(th, a) for a in vectors)
        elif th in (Theorem.COR_I, Theorem.COR_II):
            for sigma in permutations(range(1, n + 1)):
                out.extend(IdentityInstance.make(th, a, sigma=sigma) for a in vectors)
        elif th is Theorem.BG:
            for Q in _q_choices(spec, n, 1):
                out.extend(IdentityInstance.make(th, a, Q) for a in vectors)
        else:
            first = 2 if th is Theorem.MAIN1 else 3
            a0s = spec.a0_values if spec.a0_values is not None else tuple(range(0, spec.amax + 1))
            for Q in _q_choices(spec, n, first):
                for a0 in a0s:
                    out.extend(IdentityInstance.make(th, (a0,) + a, Q) for a in vectors)
    return out


def _verify_for_pool(args):
    inst, ceiling, prune = args
    return verify_instance(inst, ceiling=ceiling, prune=prune)


def run_instances(instances: Sequence[IdentityInstance], *, ceiling: int | None = None,
                  jobs: int = 1, prune: bool = True) -> list[VerificationReport]:
    """Verify every instance; output order equals input order."""
    if ceiling is None:
        ceiling = default_ceiling()
    if jobs <= 1 or len(instances) <= 1:
        return [verify_instance(i, ceiling=ceiling, prune=prune) for i in instances]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_verify_for_pool, [(i, ceiling, prune) for i in instances], chunksize=4))


def sweep(spec: SweepSpec, *, ceiling: int | None = None, prune: bool = True) -> list[VerificationReport]:
    return run_instances(enumerate_instances(spec), ceiling=ceiling, jobs=spec.jobs, prune=prune)


def summarize(reports: Iterable[VerificationReport]) -> dict:
    reports = list(reports)
    counts = {MATCH: 0, MISMATCH: 0, SKIPPED: 0}
    zero_rhs = 0
    nontransitive = 0
    for r in reports:
        counts[r.verdict] += 1
        if r.rhs is not None and r.rhs.is_zero():
            zero_rhs += 1
        if r.transitive is False:
            nontransitive += 1
    return {
        "instances": len(reports),
        "match": counts[MATCH],
        "mismatch": counts[MISMATCH],
        "skipped": counts[SKIPPED],
        "zero_rhs": zero_rhs,
        "nontransitive": nontransitive,
        "total_ms": round(sum(r.timing_ms for r in reports), 3),
    }


# ---------------------------------------------------------------------------
# degree bound in q^{a_0}
# ---------------------------------------------------------------------------


def interpolate(ts: Sequence[Fraction], vs: Sequence[Fraction]) -> list[Fraction]:
    """Newton divided differences: returns the coefficient table."""
    coef = list(vs)
    m = len(ts)
    for level in range(1, m):
        for i in range(m - 1, level - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (ts[i] - ts[i - level])
    return coef


def newton_eval(coef: Sequence[Fraction], ts: Sequence[Fraction], t: Fraction) -> Fraction:
    acc = Fraction(0)
    for i in range(len(coef) - 1, -1, -1):
        acc = acc * (t - ts[i]) + coef[i]
    return acc


@dataclass
class DegreeBoundReport:
    a: tuple[int, ...]
    k: int
    prefactor: tuple[int, ...]
    bound: int
    a0_values: tuple[int, ...]
    values: list[Fraction] = field(default_factory=list)
    ok: bool = False
    detail: str = ""


def compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def degree_bound_prefactors(n: int, k: int) -> list[tuple[int, ...]]:
    """x_0^k / (x_1^u_1 ... x_n^u_n) over compositions u of k."""
    return [(k,) + tuple(-u for u in comp) for comp in compositions(k, n)]


def check_degree_bound(a: Sequence[int], k: int, *, prefactor: Sequence[int] | None = None,
                       q0: Fraction = DEFAULT_Q0, a0_values: Sequence[int] | None = None,
                       ceiling: int | None = None) -> DegreeBoundReport:
    """Check that a_0 -> CT(x_0^k L D_n) at q = q0 is a polynomial in
    t = q0^{a_0} of degree at most |a| - k - n.

    ``a`` holds a_1..a_n.  The first bound+1 points fit the polynomial; every
    further point must be reproduced exactly.  A negative bound means the
    constant term must vanish at every point.
    """
    a = tuple(a)
    n = len(a)
    if any(v < 1 for v in a):
        raise ValueError("a_j >= 1 required")
    if k > sum(a):
        raise ValueError("k must not exceed |a|")
    q0 = Fraction(q0)
    if q0 in (0, 1, -1):
        raise ValueError("q0 must not be 0 or +-1")
    pre = tuple(prefactor) if prefactor is not None else (k,) + (0,) * (n - 1) + (-k,)
    if len(pre) != n + 1 or pre[0] != k:
        raise ValueError("prefactor must be x_0^k times a monomial in x_1..x_n")
    bound = sum(a) - k - n
    if a0_values is None:
        a0_values = range(0, max(bound + 2, 3))
    a0_values = tuple(a0_values)
    rep = DegreeBoundReport(a, k, pre, bound, a0_values)
    for a0 in a0_values:
        spec = ProductSpec(n + 1, (Monomial(pre),)) + dn_spec((a0,) + a)
        rep.values.append(ct_product(spec, ceiling=ceiling).eval(q0))
    if bound < 0:
        rep.ok = all(v == 0 for v in rep.values)
        rep.detail = "bound < 0: constant term must vanish"
        return rep
    if len(a0_values) < bound + 2:
        raise ValueError(f"need at least {bound + 2} values of a_0")
    ts = [q0 ** a0 for a0 in a0_values]
    coef = interpolate(ts[: bound + 1], rep.values[: bound + 1])
    bad = [a0 for a0, t, v in zip(a0_values[bound + 1:], ts[bound + 1:], rep.values[bound + 1:])
           if newton_eval(coef, ts[: bound + 1], t) != v]
    rep.ok = not bad
    rep.detail = "ok" if not bad else f"interpolant misses a_0 in {bad}"
    return rep


# ---------------------------------------------------------------------------
# integer lemma
# ---------------------------------------------------------------------------


@dataclass
class IntegerLemmaReport:
    ok: bool
    vectors_checked: int
    a_vectors: int
    counterexample: tuple | None = None


def integer_lemma_holds(a: Sequence[int], k: Sequence[int]) -> bool:
    s = len(a)
    if any(1 <= k[i] <= a[i] - 1 for i in range(s)):
        return True
    return any(1 - a[j] <= k[i] - k[j] <= a[i] - 1 for i in range(s) for j in range(i + 1, s))


def check_lemma_import1(s_max: int = 4, a_max: int = 3, a_min: int = 0) -> IntegerLemmaReport:
    """For every a with a_min <= a_i <= a_max (s <= s_max) and every k with
    1 <= k_i <= |a| - 1, one of the two clauses must hold."""
    checked = 0
    avecs = 0
    for s in range(1, s_max + 1):
        for a in product(range(a_min, a_max + 1), repeat=s):
            avecs += 1
            top = sum(a) - 1
            if top < 1:
                continue
            grid = np.stack(np.meshgrid(*[np.arange(1, top + 1)] * s, indexing="ij"), -1).reshape(-1, s)
            av = np.array(a)
            ok = np.any((grid >= 1) & (grid <= av - 1), axis=1)
            for i in range(s):
                for j in range(i + 1, s):
                    diff = grid[:, i] - grid[:, j]
                    ok |= (diff >= 1 - a[j]) & (diff <= a[i] - 1)
            checked += grid.shape[0]
            if not ok.all():
                k = tuple(int(v) for v in grid[np.argmin(ok)])
                return IntegerLemmaReport(False, checked, avecs, (a, k))
    return IntegerLemmaReport(True, checked, avecs)


# ---------------------------------------------------------------------------
# reflection identity
# ---------------------------------------------------------------------------


def reflection_specs(a: Sequence[int], Q: Iterable[tuple[int, int]]) -> tuple[ProductSpec, ProductSpec]:
    """Both sides of prod_{Q} x_j/x_i * D_n = (-1)^|Q| prod over E_0 with Q reversed."""
    a = tuple(a)
    nv = len(a)
    Q = frozenset(Q)
    lhs = ProductSpec(nv, (Monomial(prefactor_exps(nv, Q)),)) + dn_spec(a)
    fs: list = [Monomial((0,) * nv, sign=-1 if len(Q) % 2 else 1)]
    for i, j in combinations(range(nv), 2):
        fs.extend(flipped_pair_factors(a, i, j) if (i, j) in Q else pair_factors(a, i, j))
    return lhs, ProductSpec(nv, tuple(fs))


@dataclass
class ReflectionReport:
    ok: bool
    checked: int
    failures: list = field(default_factory=list)


def check_reflection(n_max: int = 3, a_values: Sequence[int] = (1, 2), n_min: int = 1) -> ReflectionReport:
    checked = 0
    failures = []
    for n in range(n_min, n_max + 1):
        E0 = list(combinations(range(n + 1), 2))
        for a in product(a_values, repeat=n + 1):
            for Q in subsets_of(E0):
                lhs, rhs = reflection_specs(a, Q)
                checked += 1
                if not expand_product(lhs).same_terms(expand_product(rhs)):
                    failures.append((a, sorted(Q)))
    return ReflectionReport(not failures, checked, failures)


# ---------------------------------------------------------------------------
# relabeling
# ---------------------------------------------------------------------------


def tournament_product_spec(av: Sequence[int], T, extra: tuple[int, int]) -> ProductSpec:
    """x_u/x_v times prod over edges (i, j) of T of (x_i/x_j)_{a_i}(q x_j/x_i)_{a_j-1}.

    ``av`` is indexed by variable; T lives on vertices 1..n; x_0 is a spectator.
    """
    nv = len(av)
    fs: list = [Monomial(prefactor_exps(nv, (), extra=extra))]
    for i, j in sorted(T.edges):
        fs.extend(pair_factors(av, i, j))
    return ProductSpec(nv, tuple(fs))


@dataclass
class RelabelReport:
    ok: bool
    checked: int
    failures: list = field(default_factory=list)


def check_relabeling(n_max: int = 3, a_values: Sequence[int] = (1, 2)) -> RelabelReport:
    """Relabeling x_i -> x_sigma(i) of the product for (T, a, x_m/x_k) gives the
    product for (sigma T, a o sigma^-1, x_sigma(m)/x_sigma(k)), term by term,
    and the constant term is unchanged."""
    from .laurent import build_product, ct_all, relabel
    from .tournament import Tournament

    checked = 0
    failures = []
    for n in range(2, n_max + 1):
        verts = range(1, n + 1)
        for T in all_tournaments(n):
            for a in product(a_values, repeat=n):
                av = (0,) + a
                for m, k in permutations(verts, 2):
                    f = build_product(tournament_product_spec(av, T, (m, k)))
                    for sigma in permutations(verts):
                        smap = {v: sigma[v - 1] for v in verts}
                        sT = Tournament(n, frozenset((smap[i], smap[j]) for i, j in T.edges))
                        sav = [0] * (n + 1)
                        for v in verts:
                            sav[smap[v]] = av[v]
                        g = build_product(tournament_product_spec(sav, sT, (smap[m], smap[k])))
                        rf = relabel(f, smap)
                        checked += 1
                        if rf != g or ct_all(rf) != ct_all(f):
                            failures.append((T.edge_list(), a, (m, k), sigma))
    return RelabelReport(not failures, checked, failures)


# ---------------------------------------------------------------------------
# zero points
# ---------------------------------------------------------------------------


@dataclass
class ZeroPointReport:
    instance: IdentityInstance
    zeros: list[int]
    poles: list[int]
    ok: bool
    detail: str = ""


def check_zero_points(inst: IdentityInstance) -> ZeroPointReport:
    """The closed form vanishes at q^{a_0} = q^{-b} for every listed zero b and
    has a vanishing denominator factor at every partial sum sigma_k."""
    zeros = sorted(ids.rhs_zero_points(inst))
    _, sums, _ = ids._main_data(inst)
    problems = []
    for b in zeros:
        if not ids.rhs_at_b(inst, b).is_zero():
            problems.append(f"nonzero at b={b}")
    for b in sorted(set(sums)):
        try:
            ids.rhs_at_b(inst, b)
        except PoleError:
            continue
        problems.append(f"no pole at b={b}")
    return ZeroPointReport(inst, zeros, sorted(set(sums)), not problems, "; ".join(problems))


# ---------------------------------------------------------------------------
# tournament checks
# ---------------------------------------------------------------------------


def check_dominance_bound(n_max: int = 6) -> list[dict]:
    """Exhaustive |R_T| <= n - 2 over nontransitive tournaments, n <= n_max."""
    return [census(n) for n in range(1, n_max + 1)]


def check_family_bounds(n_max: int = 5) -> dict:
    """|R_1| <= n - 1 and |R_2| <= n - 1 whenever the tournament is nontransitive."""
    out = {"r1": [], "r2": [], "ok": True}
    for n in range(2, n_max + 1):
        worst = None
        for Q1 in all_qsets(n, first=2):
            if not e_bar(Q1).is_transitive():
                size = len(r1_family(Q1))
                worst = size if worst is None else max(worst, size)
                if size > n - 1:
                    out["ok"] = False
        out["r1"].append({"n": n, "max_nontransitive": worst})
    for n in range(3, n_max + 1):
        worst = None
        for Q2 in all_qsets(n, first=3):
            if not e_bar(Q2).is_transitive():
                size = len(r2_family(Q2))
                worst = size if worst is None else max(worst, size)
                if size > n - 1:
                    out["ok"] = False
        out["r2"].append({"n": n, "max_nontransitive": worst})
    return out


def transitivity_census(n: int) -> dict:
    """Counts by triple enumeration, cross-checked against the score-sequence kernel."""
    by_triples = sum(1 for T in all_tournaments(n) if T.is_transitive())
    fast = census(n)
    if fast["transitive"] != by_triples:
        raise AssertionError(f"census disagreement at n={n}: {by_triples} vs {fast['transitive']}")
    return {"n": n, "tournaments": fast["tournaments"], "transitive": by_triples,
            "nontransitive": fast["tournaments"] - by_triples}


def q_one_bridge(a: Sequence[int], *, ceiling: int | None = None) -> bool:
    """q = 1 specialization of the q-Dyson constant term equals the classical
    Dyson constant term, both computed by expansion."""
    q_ct = ct_product(andrews_spec(a), ceiling=ceiling)
    classical = ct_product(dyson_classical_spec(a), ceiling=ceiling)
    return q_ct.eval(1) == classical.eval(1) == ids.dyson_rhs(a)
