"""p/q-submodularity: indicator functions, the distance conversion and an exhaustive checker."""

from __future__ import annotations

from itertools import combinations
from math import comb

from ..core import GroundSet, InstanceTooLarge, SetFunction, TableFunction, Verdict


class IntractableRegime(ValueError):
    """p is at or below C(q-1, 2): minimization needs exponentially many oracle calls."""


def gen_indicator(t: int, n: int, k: int = 2) -> TableFunction:
    if t >> n:
        raise ValueError(f"mask {t} is not a subset of an {n}-element ground set")
    return TableFunction(GroundSet(n), k, [-1 if m == t else 0 for m in range(1 << n)])


def pq_to_distant(p: int, q: int) -> int:
    if q < 3:
        raise ValueError("q must be at least 3")
    if not 1 <= p <= comb(q, 2):
        raise ValueError(f"p must lie in [1, C(q,2)] = [1, {comb(q, 2)}]")
    if p < comb(q - 1, 2) + 1:
        raise IntractableRegime(
            f"p={p} <= C({q - 1},2): minimizing {p}/{q}-submodular functions "
            "requires exponentially many evaluation oracle calls")
    return 2 * q - 3


def violation_graph(f: SetFunction) -> list[int]:
    """Neighbour bitsets over masks: ``Y`` in ``adj[X]`` iff the pair violates submodularity."""
    size = 1 << f.n
    vals = f.table()
    adj = [0] * size
    for x in range(size):
        fx = vals[x]
        for y in range(x + 1, size):
            if x & y == x or x & y == y:
                continue
            if fx + vals[y] < vals[x | y] + vals[x & y]:
                adj[x] |= 1 << y
                adj[y] |= 1 << x
    return adj


def is_pq_submodular(f: SetFunction, p: int, q: int, n_limit: int = 6, q_limit: int = 4) -> Verdict:
    """Every ``q`` distinct subsets contain at least ``p`` submodular pairs.

    Failing verdicts carry a ``q``-tuple of masks with too few such pairs.
    """
    if f.n > n_limit or q > q_limit:
        raise InstanceTooLarge(f"p/q check limited to n <= {n_limit}, q <= {q_limit}")
    if q < 2 or not 1 <= p <= comb(q, 2):
        raise ValueError("need q >= 2 and 1 <= p <= C(q, 2)")
    size = 1 << f.n
    if size < q:
        return Verdict(True)
    allowed = comb(q, 2) - p  # violating pairs a q-tuple may contain
    adj = violation_graph(f)
    active = [v for v in range(size) if adj[v]]
    r = min(q, len(active))
    for combo in combinations(active, r):
        bad = 0
        for i in range(r):
            row = adj[combo[i]]
            for j in range(i + 1, r):
                if row >> combo[j] & 1:
                    bad += 1
        if bad > allowed:
            filler = [v for v in range(size) if v not in combo][: q - r]
            return Verdict(False, tuple(sorted(combo + tuple(filler))))
    return Verdict(True)
