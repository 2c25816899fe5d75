"""Tournaments on vertices 1..n, the reversed-pair construction, winner
permutations and dominant-set families."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Iterator

from . import kernels

Pair = tuple[int, int]
Family = frozenset  # frozenset[frozenset[int]]


class NotTransitiveError(ValueError):
    pass


@dataclass(frozen=True)
class Tournament:
    """Orientation of the complete graph on 1..n; (i, j) in edges means i beats j."""

    n: int
    edges: frozenset

    def __post_init__(self):
        edges = frozenset((int(i), int(j)) for i, j in self.edges)
        object.__setattr__(self, "edges", edges)
        for i, j in edges:
            if not (1 <= i <= self.n and 1 <= j <= self.n) or i == j:
                raise ValueError(f"bad edge {(i, j)} for n={self.n}")
        for i, j in combinations(range(1, self.n + 1), 2):
            if ((i, j) in edges) == ((j, i) in edges):
                raise ValueError(f"pair {{{i},{j}}} must be oriented exactly once")

    def beats(self, i: int, j: int) -> bool:
        return (i, j) in self.edges

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def out_degree(self, v: int) -> int:
        return sum(1 for i, _ in self.edges if i == v)

    def is_transitive(self) -> bool:
        e = self.edges
        for i, j, k in permutations(self.vertices(), 3):
            if (i, j) in e and (j, k) in e and (k, i) in e:
                return False
        return True

    def winner_permutation(self) -> tuple[int, ...]:
        """sigma with sigma(1) -> sigma(2) -> ... -> sigma(n)."""
        if not self.is_transitive():
            raise NotTransitiveError("winner permutation needs a transitive tournament")
        return tuple(sorted(self.vertices(), key=lambda v: -self.out_degree(v)))

    def dominant_sets(self) -> Family:
        """Nonempty R such that every member beats every non-member."""
        verts = list(self.vertices())
        found = []
        for r in range(1, self.n + 1):
            for R in combinations(verts, r):
                inside = set(R)
                if all(self.beats(x, m) for x in R for m in verts if m not in inside):
                    found.append(frozenset(R))
        return frozenset(found)

    def edge_list(self) -> list[list[int]]:
        return [list(p) for p in sorted(self.edges)]

    def to_json(self) -> dict:
        return {"n": self.n, "edges": self.edge_list()}


GROUNDS = {"E": 1, "E2": 2, "E3": 3}


@dataclass(frozen=True)
class QSet:
    """Pairs (i, j), i < j, from {(i, j) | first <= i < j <= n}."""

    n: int
    pairs: frozenset = frozenset()
    first: int = 1

    def __post_init__(self):
        pairs = frozenset((int(i), int(j)) for i, j in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        for i, j in pairs:
            if not (self.first <= i < j <= self.n):
                raise ValueError(
                    f"pair {(i, j)} is outside the ground set "
                    f"{{(i,j) | {self.first} <= i < j <= {self.n}}}"
                )

    def ground(self) -> list[Pair]:
        return list(combinations(range(self.first, self.n + 1), 2))

    def sorted_pairs(self) -> list[Pair]:
        return sorted(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def to_json(self) -> dict:
        return {"n": self.n, "Q": [list(p) for p in self.sorted_pairs()]}

    @classmethod
    def from_json(cls, obj, first: int = 1) -> "QSet":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(int(obj["n"]), frozenset(tuple(p) for p in obj.get("Q", [])), first)


def subsets_of(ground: list[Pair]) -> list[frozenset]:
    """All subsets, ordered lexicographically by their sorted pair lists."""
    subs = []
    for r in range(len(ground) + 1):
        subs.extend(combinations(ground, r))
    return [frozenset(s) for s in sorted((sorted(s) for s in subs))]


def all_qsets(n: int, first: int = 1) -> list[QSet]:
    ground = list(combinations(range(first, n + 1), 2))
    return [QSet(n, s, first) for s in subsets_of(ground)]


def e_bar(Q: QSet | Iterable[Pair], n: int | None = None) -> Tournament:
    """Natural order on 1..n with exactly the pairs of Q reversed."""
    if isinstance(Q, QSet):
        n, pairs = Q.n, Q.pairs
    else:
        pairs = frozenset(tuple(p) for p in Q)
        if n is None:
            raise ValueError("n is required when Q is a plain pair collection")
    edges = {(j, i) if (i, j) in pairs else (i, j) for i, j in combinations(range(1, n + 1), 2)}
    return Tournament(n, frozenset(edges))


def inversion_set(sigma) -> frozenset:
    """{(sigma(i), sigma(j)) | i < j, sigma(i) > sigma(j)} (1-based sigma tuple)."""
    return frozenset(
        (sigma[i], sigma[j])
        for i, j in combinations(range(len(sigma)), 2)
        if sigma[i] > sigma[j]
    )


def all_tournaments(n: int) -> Iterator[Tournament]:
    pairs = list(combinations(range(1, n + 1), 2))
    for bits in range(1 << len(pairs)):
        yield Tournament(
            n, frozenset((j, i) if bits >> t & 1 else (i, j) for t, (i, j) in enumerate(pairs))
        )


def r1_singletons(T: Tournament) -> Family:
    """{r} for r != 1 that beats every vertex except 1, which beats it."""
    out = []
    for r in T.vertices():
        if r == 1 or not T.beats(1, r):
            continue
        if all(T.beats(r, m) for m in T.vertices() if m not in (1, r)):
            out.append(frozenset({r}))
    return frozenset(out)


def _require_ground(Q: QSet, first: int):
    if any(i < first for i, _ in Q.pairs):
        raise ValueError(f"pairs must come from {{(i,j) | {first} <= i < j <= n}}")


def r1_family(Q1: QSet) -> Family:
    _require_ground(Q1, 2)
    T = e_bar(Q1)
    return T.dominant_sets() | r1_singletons(T)


def r2_extra_literal(T: Tournament) -> Family:
    """R with |R| <= 2, 2 not in R, where the only member/non-member pair
    violating domination is a single member beaten by vertex 2."""
    verts = list(T.vertices())
    out = []
    for size in (1, 2):
        for R in combinations(verts, size):
            if 2 in R:
                continue
            violations = [(r, m) for r in R for m in verts if m not in R and not T.beats(r, m)]
            if len(violations) == 1 and violations[0][1] == 2:
                out.append(frozenset(R))
    return frozenset(out)


def r2_extra_characterized(T: Tournament) -> Family:
    """{{1, r}} for r beating every vertex except 1 and 2 (and beaten by both)."""
    out = []
    if T.n < 2 or not T.beats(1, 2):
        return frozenset()
    for r in T.vertices():
        if r in (1, 2) or not (T.beats(1, r) and T.beats(2, r)):
            continue
        if all(T.beats(1, m) for m in T.vertices() if m != 1) and all(
            T.beats(r, m) for m in T.vertices() if m not in (1, 2, r)
        ):
            out.append(frozenset({1, r}))
    return frozenset(out)


class FamilyDisagreement(AssertionError):
    pass


def r2_family(Q2: QSet, check: bool = True) -> Family:
    _require_ground(Q2, 3)
    T = e_bar(Q2)
    extra = r2_extra_literal(T)
    if check:
        alt = r2_extra_characterized(T)
        if alt != extra:
            raise FamilyDisagreement(
                f"literal {sorted(map(sorted, extra))} vs characterized {sorted(map(sorted, alt))}"
            )
    return T.dominant_sets() | extra


def family_as_lists(fam: Family) -> list[list[int]]:
    return sorted((sorted(R) for R in fam), key=lambda R: (len(R), R))


def census(n: int) -> dict:
    """Transitive count and dominant-set counts over all tournaments on n vertices."""
    transitive, counts = kernels.tournament_census(n)
    nontrans = ~transitive
    return {
        "n": n,
        "tournaments": int(transitive.shape[0]),
        "transitive": int(transitive.sum()),
        "nontransitive": int(nontrans.sum()),
        "max_dominant_nontransitive": int(counts[nontrans].max()) if nontrans.any() else None,
        "transitive_dominant_counts": sorted(set(counts[transitive].tolist())),
        "violations_n_minus_2": int((counts[nontrans] > n - 2).sum()),
    }
