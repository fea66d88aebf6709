"""Cut functions of weighted complete graphs and clique instances."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from ..core import GroundSet, OracleFunction, TableFunction, Verdict


class CutConditionError(ValueError):
    pass


@dataclass(frozen=True)
class WeightedCompleteGraph:
    nv: int
    w: Mapping[tuple[int, int], Fraction]

    @classmethod
    def from_edges(cls, nv: int, weights: Mapping[tuple[int, int], object], default=0):
        w = {}
        for u, v in combinations(range(nv), 2):
            val = weights.get((u, v), weights.get((v, u), default))
            w[(u, v)] = Fraction(val)
        return cls(nv, w)

    def weight(self, u: int, v: int) -> Fraction:
        return self.w[(u, v) if u < v else (v, u)]

    def incident(self, v: int) -> list[tuple[tuple[int, int], Fraction]]:
        return [((min(u, v), max(u, v)), self.weight(u, v)) for u in range(self.nv) if u != v]


def check_cut_condition(g: WeightedCompleteGraph, k: int) -> Verdict:
    """Every edge set ``X`` at a vertex with ``|X| >= k`` must have nonnegative weight.

    The lightest such ``X`` is the ``k`` lightest edges plus every other
    negative edge, so one sort per vertex decides it.
    """
    for v in range(g.nv):
        edges = sorted(g.incident(v), key=lambda e: (e[1], e[0]))
        if len(edges) < k:
            continue
        chosen = edges[:k] + [e for e in edges[k:] if e[1] < 0]
        if sum(e[1] for e in chosen) < 0:
            return Verdict(False, (v, [e[0] for e in chosen]))
    return Verdict(True)


def cut_value(g: WeightedCompleteGraph, t: int) -> Fraction:
    total = Fraction(0)
    for (u, v), wt in g.w.items():
        if (t >> u & 1) != (t >> v & 1):
            total += wt
    return total


def gen_cut_function(g: WeightedCompleteGraph, k: int, declared: int | None = None) -> TableFunction:
    """Cut function, declared ``(2k-1)``-distant (at least 2)."""
    verdict = check_cut_condition(g, k)
    if not verdict:
        v, edges = verdict.witness
        raise CutConditionError(f"cut condition fails at vertex {v} for edges {edges}")
    dist = max(2, 2 * k - 1) if declared is None else declared
    if dist > g.nv:
        raise ValueError(f"distance {dist} exceeds the {g.nv} vertices")
    return TableFunction(GroundSet(g.nv), dist, [cut_value(g, t) for t in range(1 << g.nv)])


def adjacency_from_edges(nv: int, edges: Sequence[tuple[int, int]]) -> list[int]:
    adj = [0] * nv
    for u, v in edges:
        if u == v:
            raise ValueError("self loops are not allowed")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return adj


def is_clique(adj: Sequence[int], t: int) -> bool:
    rest = t
    while rest:
        low = rest & -rest
        v = low.bit_length() - 1
        rest ^= low
        if rest & ~adj[v]:
            return False
    return True


def gen_clique_function(adj: Sequence[int], kc: int) -> OracleFunction:
    """``-1`` on kc-cliques, ``0`` on other sets of size <= kc, ``|V \\ X|`` above."""
    nv = len(adj)
    dist = 2 * kc + 1
    if kc < 1 or nv < dist:
        raise ValueError(f"need kc >= 1 and at least 2*kc+1 = {dist} vertices, got {nv}")

    def f(t: int) -> int:
        size = t.bit_count()
        if size == kc and is_clique(adj, t):
            return -1
        if size <= kc:
            return 0
        return nv - size

    return OracleFunction(GroundSet(nv), dist, f)


def has_clique(adj: Sequence[int], kc: int) -> bool:
    return any(is_clique(adj, sum(1 << v for v in c)) for c in combinations(range(len(adj)), kc))
