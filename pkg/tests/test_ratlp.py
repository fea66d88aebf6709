from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import uniform_rank
from kdsm.family import build_family, sort_elements
from kdsm.optimizer import primal_from_dual_basis
from kdsm.ratlp import (INFEASIBLE, OPTIMAL, UNBOUNDED, SingularBasis, StandardFormLP,
                        check_standard_form, solve_square, solve_standard_form)

F = Fraction


def lp(A, b, c):
    return StandardFormLP.build(A, b, c)


def reduced_costs_nonnegative(prob, sol):
    """Optimality certificate: duals from the basis give c - A^T pi >= 0."""
    B = [[prob.A[i][j] for j in sol.basis] for i in range(len(prob.b))]
    Bt = [list(r) for r in zip(*B)]
    pi = solve_square(Bt, [prob.c[j] for j in sol.basis])
    return all(prob.c[j] - sum(pi[i] * prob.A[i][j] for i in range(len(pi))) >= 0
               for j in range(len(prob.c)))


class TestSolve:
    def test_single_equality(self):
        sol = solve_standard_form(lp([[1]], [1], [1]))
        assert sol.status == OPTIMAL and sol.y == [1] and sol.objective == 1

    def test_unbounded(self):
        assert solve_standard_form(lp([[0]], [0], [-1])).status == UNBOUNDED

    def test_infeasible(self):
        assert solve_standard_form(lp([[1, 1]], [-1], [0, 0])).status == INFEASIBLE

    def test_empty(self):
        sol = solve_standard_form(lp([], [], [1, 2]))
        assert sol.status == OPTIMAL and sol.y == [0, 0]

    def test_redundant_rows(self):
        sol = solve_standard_form(lp([[1, 1], [2, 2]], [1, 2], [1, 2]))
        assert sol.status == OPTIMAL and sol.y == [1, 0]

    def test_negative_rhs(self):
        sol = solve_standard_form(lp([[-1, 1]], [-2], [1, 3]))
        assert sol.status == OPTIMAL and sol.y == [2, 0]

    def test_unknown_rule(self):
        with pytest.raises(ValueError):
            solve_standard_form(lp([[1]], [1], [1]), rule="steepest")

    @pytest.mark.parametrize("rule", ["bland", "dantzig"])
    def test_beale_cycling_example(self, rule):
        # cycles under textbook Dantzig pivoting from the slack basis
        A = [[F(1, 4), -8, -1, 9, 1, 0, 0],
             [F(1, 2), -12, F(-1, 2), 3, 0, 1, 0],
             [0, 0, 1, 0, 0, 0, 1]]
        c = [F(-3, 4), 20, F(-1, 2), 6, 0, 0, 0]
        prob = lp(A, [0, 0, 1], c)
        sol = solve_standard_form(prob, basis=[4, 5, 6], rule=rule)
        assert sol.status == OPTIMAL
        assert sol.objective == F(-5, 4)
        assert check_standard_form(prob, sol.y)
        assert reduced_costs_nonnegative(prob, sol)

    def test_dual_prime_uniform_rank(self):
        f = uniform_rank(3, 2)
        fam = build_family(sort_elements([3, 2, 1]), 2)
        members = [t for t in fam.members if t]
        A = [[t >> e & 1 for t in members] for e in range(3)]
        prob = lp(A, [3, 2, 1], [f(t) for t in members])
        sol = solve_standard_form(prob)
        assert sol.objective == 5
        assert {members[j]: v for j, v in enumerate(sol.y) if v} == {0b001: 1, 0b011: 1, 0b111: 1}

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 4), st.integers(1, 6), st.data())
    def test_random_feasible(self, m, extra, data):
        d = m + extra
        small = st.fractions(min_value=-4, max_value=4, max_denominator=3)
        A = [data.draw(st.lists(small, min_size=d, max_size=d)) for _ in range(m)]
        y0 = data.draw(st.lists(st.fractions(min_value=0, max_value=3, max_denominator=2),
                                min_size=d, max_size=d))
        c = data.draw(st.lists(st.integers(0, 5), min_size=d, max_size=d))
        b = [sum(a * v for a, v in zip(row, y0)) for row in A]
        prob = lp(A, b, c)
        sol = solve_standard_form(prob, rule=data.draw(st.sampled_from(["bland", "dantzig"])))
        assert sol.status == OPTIMAL  # c >= 0 keeps the objective bounded
        assert check_standard_form(prob, sol.y)
        assert sol.objective <= sum(a * v for a, v in zip(c, y0))
        assert all(sol.y[j] == 0 for j in range(d) if j not in sol.basis)
        if len(sol.basis) == m:
            assert reduced_costs_nonnegative(prob, sol)


class TestSquare:
    def test_solve(self):
        assert solve_square([[F(2), F(1)], [F(1), F(3)]], [F(3), F(5)]) == [F(4, 5), F(7, 5)]

    def test_singular(self):
        with pytest.raises(SingularBasis):
            solve_square([[F(1), F(2)], [F(2), F(4)]], [F(1), F(2)])


class TestPrimalFromBasis:
    def test_chain_is_greedy(self, rng):
        vals = [F(0)] + [F(rng.randint(-5, 5)) for _ in range(7)]
        from conftest import table
        f = table(3, 2, vals)
        o = sort_elements([5, 1, 3])
        members = list(build_family(o, 2).members)
        basis = [members.index(s) for s in o.prefixes[1:]]
        x = primal_from_dual_basis(members, f, basis)
        for i, e in enumerate(o.perm):
            assert x[e] == f(o.prefixes[i + 1]) - f(o.prefixes[i])

    def test_uniform_rank_chain(self):
        f = uniform_rank(3, 2)
        fam = build_family(sort_elements([3, 2, 1]), 2)
        basis = [fam.members.index(s) for s in (1, 3, 7)]
        assert primal_from_dual_basis(fam, f, basis) == [1, 1, 0]

    def test_empty_set_row_is_singular(self):
        f = uniform_rank(3, 2)
        fam = build_family(sort_elements([3, 2, 1]), 2)
        with pytest.raises(SingularBasis):
            primal_from_dual_basis(fam, f, [0, 1, 2])
