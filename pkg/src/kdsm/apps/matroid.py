"""Near-uniform matroids and weighted intersection under the minimum rank oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from ..core import EXHAUSTIVE_LIMIT, GroundSet, OracleFunction, SetFunction, mask_of
from ..minimizer import membership_zero
from ..ratlp import OPTIMAL, StandardFormLP, solve_standard_form


class MatroidError(ValueError):
    pass


class IntersectionError(RuntimeError):
    """The cutting-plane loop ended on a fractional vertex or repeated a cut."""


@dataclass
class Matroid:
    n: int
    r: int
    kind: str
    forbidden: tuple[int, ...] = ()
    ranks: tuple[int, ...] | None = None
    k: int | None = None

    def rank(self, t: int) -> int:
        if self.ranks is not None:
            return self.ranks[t]
        size = t.bit_count()
        if self.kind == "sparse_paving" and size == self.r and t in self._forbidden_set:
            return self.r - 1
        return min(size, self.r)

    @property
    def _forbidden_set(self) -> frozenset:
        fs = self.__dict__.get("_fs")
        if fs is None:
            fs = self.__dict__["_fs"] = frozenset(self.forbidden)
        return fs

    def is_independent(self, t: int) -> bool:
        return self.rank(t) == t.bit_count()

    def validate(self, limit: int = EXHAUSTIVE_LIMIT) -> None:
        """Exhaustive rank axioms: normalized, unit increase, local submodularity."""
        if self.n > limit:
            return
        n = self.n
        if self.rank(0) != 0:
            raise MatroidError("rank of the empty set must be 0")
        if self.rank((1 << n) - 1) != self.r:
            raise MatroidError(f"rank of the ground set is not {self.r}")
        for x in range(1 << n):
            rx = self.rank(x)
            for a in range(n):
                if x >> a & 1:
                    continue
                ra = self.rank(x | 1 << a)
                if ra - rx not in (0, 1):
                    raise MatroidError(f"rank jumps by {ra - rx} adding element {a} to mask {x}")
                for b in range(a + 1, n):
                    if x >> b & 1:
                        continue
                    if ra + self.rank(x | 1 << b) < self.rank(x | 1 << a | 1 << b) + rx:
                        raise MatroidError(f"rank is not submodular at mask {x}, elements {a},{b}")

    def hypothesis_violation(self, k: int) -> int | None:
        """First mask breaking ``rank = |X|`` below ``r-k`` or ``rank = r`` above ``r+k``."""
        for t in range(1 << self.n):
            size = t.bit_count()
            if size <= self.r - k and self.rank(t) != size:
                return t
            if size >= self.r + k and self.rank(t) != self.r:
                return t
        return None


def uniform(n: int, r: int) -> Matroid:
    if not 0 <= r <= n:
        raise MatroidError("uniform matroid needs 0 <= r <= n")
    return Matroid(n, r, "uniform")


def sparse_paving(n: int, r: int, forbidden: Sequence[Sequence[int] | int]) -> Matroid:
    """Rank ``r`` matroid whose dependent r-sets are exactly ``forbidden``.

    ``forbidden`` holds masks or element lists (0-based). They must be r-sets
    pairwise meeting in at most ``r - 2`` elements.
    """
    masks = []
    for s in forbidden:
        m = s if isinstance(s, int) else mask_of(s)
        if m.bit_count() != r or m >> n:
            raise MatroidError(f"forbidden set {s!r} is not an {r}-subset of the ground set")
        masks.append(m)
    if len(set(masks)) != len(masks):
        raise MatroidError("forbidden sets repeat")
    for a, b in combinations(masks, 2):
        if (a & b).bit_count() > r - 2:
            raise MatroidError(f"forbidden sets {a} and {b} share more than r-2 elements")
    m = Matroid(n, r, "sparse_paving", tuple(sorted(masks)))
    m.validate()
    return m


def near_uniform(n: int, r: int, k: int, ranks: Sequence[int]) -> Matroid:
    if len(ranks) != 1 << n:
        raise MatroidError(f"rank table needs {1 << n} entries")
    m = Matroid(n, r, "near_uniform", ranks=tuple(int(v) for v in ranks), k=k)
    m.validate()
    bad = m.hypothesis_violation(k)
    if bad is not None:
        raise MatroidError(f"rank table breaks the near-uniform condition at mask {bad}")
    return m


def truncated_partition(n: int, r: int, blocks: Sequence[Sequence[int]], caps: Sequence[int]) -> list[int]:
    """Rank table of the rank-``r`` truncation of a partition matroid."""
    bmasks = [mask_of(b) for b in blocks]
    return [min(r, sum(min((t & bm).bit_count(), c) for bm, c in zip(bmasks, caps)))
            for t in range(1 << n)]


def matroid_from_doc(doc: dict) -> Matroid:
    kind, n, r = doc.get("kind"), doc.get("n"), doc.get("r")
    if kind == "uniform":
        return uniform(n, r)
    if kind == "sparse_paving":
        return sparse_paving(n, r, [[e - 1 for e in s] for s in doc.get("forbidden", [])])
    if kind == "near_uniform":
        return near_uniform(n, r, doc["k"], doc["ranks"])
    raise MatroidError(f"unknown matroid kind {kind!r}")


def matroid_to_doc(m: Matroid) -> dict:
    doc = {"kind": m.kind, "n": m.n, "r": m.r}
    if m.kind == "sparse_paving":
        doc["forbidden"] = [[e + 1 for e in range(m.n) if t >> e & 1] for t in m.forbidden]
    elif m.kind == "near_uniform":
        doc["k"] = m.k
        doc["ranks"] = list(m.ranks)
    return doc


@dataclass
class MinRankInstance:
    m1: Matroid
    m2: Matroid
    rmin: SetFunction
    k: int


def build_min_rank(m1: Matroid, m2: Matroid, k: int) -> MinRankInstance:
    """``min(r1, r2)``, declared ``4k``-distant under the near-uniform hypothesis."""
    if m1.n != m2.n:
        raise MatroidError("matroids live on different ground sets")
    if m1.r != m2.r:
        raise MatroidError(f"ranks differ: r1(S) = {m1.r}, r2(S) = {m2.r}")
    if not 1 <= k <= m1.r:
        raise MatroidError(f"need 1 <= k <= r = {m1.r}")
    if 4 * k > m1.n:
        raise MatroidError(f"distance 4k = {4 * k} exceeds the ground set size {m1.n}")
    if m1.n <= EXHAUSTIVE_LIMIT:
        for name, m in (("m1", m1), ("m2", m2)):
            bad = m.hypothesis_violation(k)
            if bad is not None:
                raise MatroidError(f"{name} breaks the near-uniform condition at mask {bad}")
    rmin = OracleFunction(GroundSet(m1.n), 4 * k, lambda t: min(m1.rank(t), m2.rank(t)))
    return MinRankInstance(m1, m2, rmin, k)


@dataclass
class IntersectionResult:
    weight: int
    common_independent: int
    x: list[Fraction]
    rounds: int = 0
    cuts: list[int] = field(default_factory=list)

    def __iter__(self):
        return iter((self.weight, self.common_independent, self.x))


def solve_weighted_matroid_intersection(inst: MinRankInstance, w: Sequence[int], *,
                                        budget: int | None = None) -> IntersectionResult:
    """Cutting planes on ``max w^T x, x >= 0, x(T) <= rmin(T)``.

    Separation minimizes ``D * (rmin - x)`` (``D`` clears the denominators of
    the current vertex) with :func:`membership_zero`.
    """
    n = inst.rmin.n
    w = [int(v) for v in w]
    rmin = inst.rmin
    working = [1 << e for e in range(n)]
    dist = 4 * inst.k
    rounds = 0
    while True:
        rounds += 1
        x = _working_vertex(n, w, working, rmin)
        den = 1
        for v in x:
            den = math.lcm(den, v.denominator)
        xi = [int(v * den) for v in x]

        def sep(t: int, xi=xi, den=den) -> int:
            return den * int(rmin(t)) - sum(xi[e] for e in range(n) if t >> e & 1)

        g = OracleFunction(rmin.ground, dist, sep)
        verdict = membership_zero(g, dist, budget=budget)
        if verdict.nonnegative:
            break
        if verdict.witness in working:
            raise IntersectionError(f"separation returned mask {verdict.witness} twice")
        working.append(verdict.witness)
    if any(v.denominator != 1 or v not in (0, 1) for v in x):
        raise IntersectionError(f"terminal vertex {x} is not a 0/1 vector")
    support = sum(1 << e for e in range(n) if x[e] == 1)
    weight = sum(w[e] for e in range(n) if x[e] == 1)
    return IntersectionResult(weight, support, x, rounds, working[n:])


def _working_vertex(n, w, working, rmin) -> list[Fraction]:
    m = len(working)
    A = []
    for t in working:
        row = [Fraction(t >> e & 1) for e in range(n)] + [Fraction(0)] * m
        A.append(row)
    for i in range(m):
        A[i][n + i] = Fraction(1)
    b = [rmin(t) for t in working]
    c = [Fraction(-v) for v in w] + [Fraction(0)] * m
    lp = StandardFormLP(tuple(map(tuple, A)), tuple(b), tuple(c))
    slack_basis = list(range(n, n + m))
    sol = solve_standard_form(lp, basis=slack_basis)
    if sol.status != OPTIMAL:
        raise IntersectionError(f"working LP is {sol.status}")
    return sol.y[:n]
