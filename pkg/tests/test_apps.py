import random
from fractions import Fraction
from itertools import combinations
from math import comb

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import indicator, random_submodular, table
from kdsm.apps.generators import (STRATEGIES, GenerationError, gen_random_kdistant, random_cut_graph,
                                  random_matroid_pair, supports)
from kdsm.apps.graphs import (CutConditionError, WeightedCompleteGraph, adjacency_from_edges,
                              check_cut_condition, gen_clique_function, gen_cut_function,
                              has_clique, is_clique)
from kdsm.apps.matroid import (IntersectionResult, MatroidError, build_min_rank, matroid_from_doc,
                               matroid_to_doc, near_uniform, solve_weighted_matroid_intersection,
                               sparse_paving, truncated_partition, uniform)
from kdsm.apps.pq import IntractableRegime, gen_indicator, is_pq_submodular, pq_to_distant
from kdsm.core import InstanceTooLarge, is_k_distant
from kdsm.minimizer import bruteforce_minimize, minimize
from kdsm.reference import bruteforce_common_independent


def k_graph(nv, weights):
    return WeightedCompleteGraph.from_edges(nv, weights, default=1)


class TestCuts:
    def test_k3_positive(self):
        f = gen_cut_function(k_graph(3, {}), 1)
        assert f.k == 2
        assert [f(1 << v) for v in range(3)] == [2, 2, 2]
        assert f(0) == f(7) == 0

    def test_k4_one_negative_edge(self):
        g = k_graph(4, {(0, 1): -1})
        assert check_cut_condition(g, 2)
        f = gen_cut_function(g, 2)
        assert f.k == 3 and is_k_distant(f, 3)

    def test_k3_negative_edge_fails(self):
        g = k_graph(3, {(0, 1): -1})
        v = check_cut_condition(g, 1)
        assert not v and v.witness[0] in (0, 1) and (0, 1) in v.witness[1]
        with pytest.raises(CutConditionError, match="vertex"):
            gen_cut_function(g, 1)

    def test_declared_too_large(self):
        with pytest.raises(ValueError):
            gen_cut_function(k_graph(3, {}), 3)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**6), st.integers(3, 7), st.integers(1, 3))
    def test_condition_implies_distance(self, seed, nv, kk):
        assume(2 * kk - 1 <= nv)
        g = random_cut_graph(nv, kk, random.Random(seed))
        assert check_cut_condition(g, kk)
        assert is_k_distant(gen_cut_function(g, kk), max(2, 2 * kk - 1))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**6), st.integers(3, 6), st.integers(1, 3))
    def test_condition_matches_exhaustive(self, seed, nv, kk):
        rng = random.Random(seed)
        g = WeightedCompleteGraph(nv, {e: Fraction(rng.randint(-3, 4)) for e in combinations(range(nv), 2)})
        worst_ok = True
        for v in range(nv):
            inc = [w for _, w in g.incident(v)]
            for r in range(kk, len(inc) + 1):
                if any(sum(c) < 0 for c in combinations(inc, r)):
                    worst_ok = False
        assert bool(check_cut_condition(g, kk)) == worst_ok


class TestCliques:
    def test_complete_graph(self):
        adj = adjacency_from_edges(7, list(combinations(range(7), 2)))
        f = gen_clique_function(adj, 3)
        assert f.k == 7
        assert bruteforce_minimize(f)[0] == -1 and minimize(f).min_value == -1

    def test_cycle(self):
        adj = adjacency_from_edges(7, [(i, (i + 1) % 7) for i in range(7)])
        f = gen_clique_function(adj, 3)
        assert bruteforce_minimize(f) == (0, 0)
        assert minimize(f).min_value == 0

    def test_small_nonclique_is_zero(self):
        adj = adjacency_from_edges(7, [(0, 1)])
        f = gen_clique_function(adj, 3)
        assert f(0b111) == 0 and f(0b11) == 0 and f(0b1111) == 3

    def test_too_few_vertices(self):
        with pytest.raises(ValueError):
            gen_clique_function([0] * 6, 3)

    def test_self_loop(self):
        with pytest.raises(ValueError):
            adjacency_from_edges(3, [(1, 1)])

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 10**6), st.integers(5, 8), st.sampled_from([0.2, 0.4, 0.6]))
    def test_distance_and_minimum(self, seed, nv, p):
        kc = 2 if nv < 7 else 3
        rng = random.Random(seed)
        adj = [0] * nv
        for u, v in combinations(range(nv), 2):
            if rng.random() < p:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
        f = gen_clique_function(adj, kc)
        assert is_k_distant(f, 2 * kc + 1)
        res = minimize(f)
        assert (res.min_value == -1) == has_clique(adj, kc)
        if res.min_value == -1:
            assert is_clique(adj, res.argmin)


class TestPQ:
    def test_indicator_empty(self):
        f = gen_indicator(0, 3)
        assert f(0) == -1 and all(f(t) == 0 for t in range(1, 8))

    def test_indicator_full_is_submodular(self):
        assert is_k_distant(gen_indicator(7, 3), 2)

    def test_indicator_ab(self):
        f = gen_indicator(0b011, 3)
        assert not is_k_distant(f, 2) and not is_k_distant(f, 3)

    def test_indicator_outside(self):
        with pytest.raises(ValueError):
            gen_indicator(8, 3)

    @pytest.mark.parametrize("p,q,k", [(2, 3, 3), (4, 4, 5), (3, 3, 3), (6, 4, 5)])
    def test_conversion(self, p, q, k):
        assert pq_to_distant(p, q) == k

    @pytest.mark.parametrize("p,q", [(1, 3), (3, 4), (1, 4)])
    def test_intractable(self, p, q):
        with pytest.raises(IntractableRegime, match="exponentially"):
            pq_to_distant(p, q)

    @pytest.mark.parametrize("p,q", [(0, 3), (4, 3), (1, 2)])
    def test_invalid(self, p, q):
        with pytest.raises(ValueError):
            pq_to_distant(p, q)

    def test_submodular_holds(self, u23):
        for q in (3, 4):
            for p in range(1, comb(q, 2) + 1):
                assert is_pq_submodular(u23, p, q)

    def test_indicator_ab_one_of_three(self):
        assert is_pq_submodular(gen_indicator(0b011, 3), 1, 3)

    def test_indicator_ab_three_of_three(self):
        v = is_pq_submodular(gen_indicator(0b011, 3), 3, 3)
        assert not v and len(v.witness) == 3 and len(set(v.witness)) == 3

    def test_guard(self):
        with pytest.raises(InstanceTooLarge):
            is_pq_submodular(table(7, 2, [0] * 128), 2, 3)

    @pytest.mark.parametrize("q", [3, 4])
    def test_indicator_threshold(self, q):
        # f_T fails p/q only above C(q-1, 2): its violations form a star at T
        threshold = comb(q - 1, 2)
        for n in (3, 4):
            for t in range(1 << n):
                f = gen_indicator(t, n)
                for p in range(1, comb(q, 2) + 1):
                    holds = bool(is_pq_submodular(f, p, q))
                    if p <= threshold:
                        assert holds
                if not is_k_distant(f, 2):
                    assert not is_pq_submodular(f, threshold + 1, q)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10**6), st.integers(3, 5), st.sampled_from([3, 4]))
    def test_lemma_pq_to_distance(self, seed, n, q):
        rng = random.Random(seed)
        f = random_submodular(n, rng)
        vals = f.table()
        for t in rng.sample(range(1 << n), 2):
            vals[t] += rng.choice([-3, -1, 1, 3])
        f = table(n, 2, vals)
        p = comb(q - 1, 2) + 1
        if is_pq_submodular(f, p, q):
            assert is_k_distant(f, pq_to_distant(p, q))


class TestMatroids:
    def test_uniform(self):
        m = uniform(4, 2)
        assert m.rank(0b111) == 2 and m.is_independent(0b11)

    def test_sparse_paving(self):
        m = sparse_paving(4, 2, [[0, 1]])
        assert m.rank(0b11) == 1 and m.rank(0b101) == 2

    def test_sparse_paving_overlap(self):
        with pytest.raises(MatroidError, match="share"):
            sparse_paving(4, 3, [[0, 1, 2], [0, 1, 3]])

    def test_sparse_paving_bad_size(self):
        with pytest.raises(MatroidError):
            sparse_paving(4, 2, [[0, 1, 2]])

    def test_near_uniform_rejects_invalid(self):
        ranks = [min(t.bit_count(), 2) for t in range(16)]
        ranks[0b0011] = 0
        with pytest.raises(MatroidError):
            near_uniform(4, 2, 1, ranks)

    def test_truncated_partition_is_matroid(self):
        ranks = truncated_partition(6, 3, [[0, 1, 2], [3, 4, 5]], [2, 2])
        m = near_uniform(6, 3, 2, ranks)
        assert m.rank(0b111) == 2

    def test_doc_round_trip(self):
        m = sparse_paving(5, 3, [[0, 1, 2], [2, 3, 4]])
        doc = matroid_to_doc(m)
        assert doc["forbidden"] == [[1, 2, 3], [3, 4, 5]]
        assert matroid_from_doc(doc).forbidden == m.forbidden

    def test_unknown_kind(self):
        with pytest.raises(MatroidError):
            matroid_from_doc({"kind": "graphic", "n": 3, "r": 2})


class TestMinRank:
    def test_identical_uniform(self):
        inst = build_min_rank(uniform(4, 2), uniform(4, 2), 1)
        assert inst.rmin.k == 4
        assert is_k_distant(inst.rmin, 2)

    def test_sparse_paving_pair(self):
        inst = build_min_rank(sparse_paving(4, 2, [[0, 1]]), sparse_paving(4, 2, [[2, 3]]), 1)
        assert is_k_distant(inst.rmin, 4)

    def test_rank_mismatch(self):
        with pytest.raises(MatroidError, match="ranks differ"):
            build_min_rank(uniform(4, 2), uniform(4, 3), 1)

    def test_distance_exceeds_ground(self):
        with pytest.raises(MatroidError):
            build_min_rank(uniform(7, 3), uniform(7, 3), 2)

    def test_hypothesis_violation(self):
        ranks = truncated_partition(8, 4, [[0, 1, 2, 3], [4, 5, 6, 7]], [1, 4])
        m = near_uniform(8, 4, 4, ranks)
        with pytest.raises(MatroidError, match="near-uniform"):
            build_min_rank(m, uniform(8, 4), 1)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10**6), st.integers(4, 10))
    def test_lemma_distance(self, seed, n):
        rng = random.Random(seed)
        km = 1 if n < 8 else rng.choice([1, 2])
        m1, m2 = random_matroid_pair(n, km, rng)
        inst = build_min_rank(m1, m2, km)
        assert m1.hypothesis_violation(km) is None and m2.hypothesis_violation(km) is None
        assert is_k_distant(inst.rmin, 4 * km)


class TestIntersection:
    def test_identical_uniform(self):
        inst = build_min_rank(uniform(4, 2), uniform(4, 2), 1)
        res = solve_weighted_matroid_intersection(inst, [4, 3, 2, 1])
        assert isinstance(res, IntersectionResult)
        weight, mask, x = res
        assert (weight, mask) == (7, 0b0011) and x == [1, 1, 0, 0]

    def test_sparse_paving_pair(self):
        inst = build_min_rank(sparse_paving(4, 2, [[0, 1]]), sparse_paving(4, 2, [[2, 3]]), 1)
        weight, mask, _ = solve_weighted_matroid_intersection(inst, [1, 1, 1, 1])
        assert weight == 2
        assert inst.m1.is_independent(mask) and inst.m2.is_independent(mask)

    def test_zero_weights(self):
        inst = build_min_rank(uniform(4, 2), uniform(4, 2), 1)
        weight, mask, _ = solve_weighted_matroid_intersection(inst, [0, 0, 0, 0])
        assert weight == 0

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10**6), st.integers(4, 8))
    def test_matches_exhaustive(self, seed, n):
        rng = random.Random(seed)
        km = 1 if n < 8 else rng.choice([1, 2])
        m1, m2 = random_matroid_pair(n, km, rng)
        inst = build_min_rank(m1, m2, km)
        w = [rng.randint(0, 9) for _ in range(n)]
        res = solve_weighted_matroid_intersection(inst, w)
        assert res.weight == bruteforce_common_independent(m1, m2, w)[0]
        assert all(v in (0, 1) for v in res.x)
        assert m1.is_independent(res.common_independent) and m2.is_independent(res.common_independent)


class TestGenerators:
    @pytest.mark.parametrize("n,k,seed,strategy", [(4, 3, 1, "rejection"), (7, 7, 2, "clique"),
                                                   (6, 3, 3, "cut")])
    def test_examples(self, n, k, seed, strategy):
        f = gen_random_kdistant(n, k, seed, strategy)
        assert f.n == n and f.k == k
        assert is_k_distant(f, k)

    def test_unknown_strategy(self):
        with pytest.raises(ValueError):
            gen_random_kdistant(4, 2, 0, "magic")

    def test_rejection_limit(self):
        with pytest.raises(ValueError):
            gen_random_kdistant(7, 2, 0, "rejection")

    def test_k_range(self):
        with pytest.raises(ValueError):
            gen_random_kdistant(4, 5, 0, "cut")

    def test_rejection_budget(self):
        with pytest.raises(GenerationError):
            from kdsm.apps.generators import gen_rejection
            gen_rejection(6, 2, 0, tries=0)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**6), st.integers(4, 8), st.integers(2, 6), st.sampled_from(STRATEGIES))
    def test_checker_gate_and_determinism(self, seed, n, k, strategy):
        assume(k <= n and supports(strategy, n, k))
        f = gen_random_kdistant(n, k, seed, strategy)
        assert is_k_distant(f, k)
        assert f.table() == gen_random_kdistant(n, k, seed, strategy).table()
        assert all(v.denominator == 1 for v in f.table())
