"""Seeded supply of k-distant test instances.

Every strategy is deterministic in ``seed``. ``rejection`` samples beyond the
safe perturbation size and keeps only tables that pass the exhaustive check;
the other strategies are k-distant by construction.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from ..core import (GroundSet, SetFunction, TableFunction, is_k_distant,
                    shift_nonempty, subtract_modular)
from .graphs import WeightedCompleteGraph, check_cut_condition, gen_clique_function, gen_cut_function
from .matroid import (Matroid, build_min_rank, near_uniform, sparse_paving,
                      truncated_partition)

STRATEGIES = ("rejection", "cut", "minrank", "clique", "indicator_shifted")


class GenerationError(RuntimeError):
    pass


def margin_table(n: int, k: int, rng: random.Random, bump: int, nbumps: int) -> list[int]:
    """``|X| (n - |X|)`` plus a random modular part plus indicator bumps of size <= ``bump``.

    The base has slack ``2 |X\\Y| |Y\\X| >= 2(k-1)`` on every incomparable pair
    with ``|X ^ Y| >= k``, so bumps up to ``(k-1)/2`` keep the table k-distant.
    """
    mod = [rng.randint(-n, n // 2) for _ in range(n)]
    vals = []
    for t in range(1 << n):
        s = t.bit_count()
        vals.append(s * (n - s) + sum(mod[e] for e in range(n) if t >> e & 1))
    for t in rng.sample(range(1, 1 << n), min(nbumps, (1 << n) - 1)):
        vals[t] += rng.randint(-bump, bump)
    return vals


def gen_indicator_shifted(n: int, k: int, seed: int) -> SetFunction:
    rng = random.Random(seed)
    vals = margin_table(n, k, rng, (k - 1) // 2, n * 2)
    base = TableFunction(GroundSet(n), k, [v - vals[0] for v in vals])
    return TableFunction(GroundSet(n), k, shift_nonempty(base, rng.randint(0, 2)).table())


def gen_rejection(n: int, k: int, seed: int, tries: int = 2000) -> SetFunction:
    if n > 6:
        raise ValueError("rejection sampling is limited to n <= 6")
    rng = random.Random(seed)
    for _ in range(tries):
        vals = margin_table(n, k, rng, k, n * 3)
        f = TableFunction(GroundSet(n), k, [v - vals[0] for v in vals])
        if is_k_distant(f, k):
            return f
    raise GenerationError(f"no {k}-distant table found in {tries} tries")


def random_cut_graph(nv: int, kk: int, rng: random.Random) -> WeightedCompleteGraph:
    """Integer weights in [-4, 6], raised until the cut condition holds for ``kk``."""
    w = {e: Fraction(rng.randint(-4, 6)) for e in combinations(range(nv), 2)}
    g = WeightedCompleteGraph(nv, w)
    while True:
        verdict = check_cut_condition(g, kk)
        if verdict:
            return g
        _, edges = verdict.witness
        worst = min(edges, key=lambda e: (g.w[e], e))
        w[worst] += 1


def gen_cut(n: int, k: int, seed: int) -> SetFunction:
    kk = (k + 1) // 2
    g = random_cut_graph(n, kk, random.Random(seed))
    return gen_cut_function(g, kk, declared=k)


def random_sparse_paving(n: int, r: int, rng: random.Random, attempts: int = 40) -> Matroid:
    chosen: list[int] = []
    pool = [sum(1 << e for e in c) for c in combinations(range(n), r)]
    for _ in range(attempts):
        t = rng.choice(pool)
        if all((t & s).bit_count() <= r - 2 for s in chosen) and t not in chosen:
            chosen.append(t)
    return sparse_paving(n, r, chosen)


def random_near_uniform(n: int, r: int, k: int, rng: random.Random, attempts: int = 200) -> Matroid:
    """Truncated partition matroids, kept when they meet the near-uniform condition."""
    for _ in range(attempts):
        perm = list(range(n))
        rng.shuffle(perm)
        cut = rng.randint(1, n - 1)
        blocks = [perm[:cut], perm[cut:]]
        caps = [rng.randint(min(max(0, r - k), len(b)), len(b)) for b in blocks]
        ranks = truncated_partition(n, r, blocks, caps)
        if ranks[-1] != r:
            continue
        try:
            return near_uniform(n, r, k, ranks)
        except ValueError:
            continue
    raise GenerationError(f"no near-uniform matroid found for n={n}, r={r}, k={k}")


def random_matroid_pair(n: int, km: int, rng: random.Random) -> tuple[Matroid, Matroid]:
    r = rng.randint(max(km, 2), max(km, 2, n - 2))
    if km == 1:
        return random_sparse_paving(n, r, rng), random_sparse_paving(n, r, rng)
    return random_near_uniform(n, r, km, rng), random_near_uniform(n, r, km, rng)


def gen_minrank(n: int, k: int, seed: int) -> SetFunction:
    """``rmin - x`` for a random 0/1 vector ``x`` (the shape of a separation call)."""
    km = k // 4
    if km < 1:
        raise ValueError("minrank instances need k >= 4 (declared distance 4*km)")
    rng = random.Random(seed)
    m1, m2 = random_matroid_pair(n, km, rng)
    inst = build_min_rank(m1, m2, km)
    x = [rng.randint(0, 1) for _ in range(n)]
    g = subtract_modular(inst.rmin, x)
    return TableFunction(GroundSet(n), k, g.table())


def random_graph(nv: int, p: float, rng: random.Random) -> list[int]:
    adj = [0] * nv
    for u, v in combinations(range(nv), 2):
        if rng.random() < p:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    return adj


def gen_clique(n: int, k: int, seed: int) -> SetFunction:
    kc = (k - 1) // 2
    if kc < 1:
        raise ValueError("clique instances need k >= 3")
    rng = random.Random(seed)
    adj = random_graph(n, rng.choice([0.2, 0.35, 0.5, 0.7]), rng)
    f = gen_clique_function(adj, kc)
    return f.with_k(k)


_DISPATCH = {
    "rejection": gen_rejection,
    "cut": gen_cut,
    "minrank": gen_minrank,
    "clique": gen_clique,
    "indicator_shifted": gen_indicator_shifted,
}


def gen_random_kdistant(n: int, k: int, seed: int, strategy: str) -> SetFunction:
    if strategy not in _DISPATCH:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k={k}, n={n}")
    return _DISPATCH[strategy](n, k, seed)


def supports(strategy: str, n: int, k: int) -> bool:
    """Whether ``strategy`` can produce an (n, k) instance."""
    if not 2 <= k <= n:
        return False
    if strategy == "rejection":
        return n <= 6
    if strategy == "minrank":
        return k >= 4
    if strategy == "clique":
        return k >= 3
    return True
