"""Brute-force anchors: the full-constraint LP and exhaustive matroid search."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import InstanceTooLarge, SetFunction, normalize
from .optimizer import primal_from_dual_basis
from .ratlp import OPTIMAL, StandardFormLP, solve_standard_form


@dataclass
class FullLPOracleResult:
    value: Fraction
    x: list[Fraction]
    tight: list[int]


def bruteforce_maximize_full(f: SetFunction, w: Sequence, limit: int = 12) -> FullLPOracleResult:
    """Solve ``max w^T x, x(T) <= f(T) for all T`` through its dual over all 2^n sets.

    Runs the generic two-phase simplex (no warm start), so it shares nothing
    with the optimizer beyond the pivoting engine.
    """
    n = f.n
    if n > limit:
        raise InstanceTooLarge(f"full LP oracle limited to n <= {limit}")
    w = [Fraction(v) for v in w]
    if len(w) != n or any(v < 0 for v in w):
        raise ValueError("w must be a nonnegative vector with one entry per element")
    f, _ = normalize(f)
    masks = list(range(1, 1 << n))
    A = tuple(tuple(Fraction(t >> e & 1) for t in masks) for e in range(n))
    lp = StandardFormLP(A, tuple(w), tuple(f(t) for t in masks))
    sol = solve_standard_form(lp, rule="bland")
    if sol.status != OPTIMAL:
        raise RuntimeError(f"full dual LP is {sol.status}")
    x = primal_from_dual_basis(masks, f, sol.basis)
    tight = [t for t in range(1 << n)
             if sum(x[e] for e in range(n) if t >> e & 1) == f(t)]
    value = sum((a * b for a, b in zip(w, x)), Fraction(0))
    if value != sol.objective:
        raise RuntimeError("full LP: primal and dual values disagree")
    return FullLPOracleResult(value, x, tight)


def in_polyhedron(f: SetFunction, x: Sequence) -> int | None:
    """First mask ``T`` with ``x(T) > f(T)``, or None when ``x`` lies in ``P(f)``."""
    n = f.n
    sums = [Fraction(0)] * (1 << n)
    for t in range(1, 1 << n):
        low = t & -t
        sums[t] = sums[t ^ low] + x[low.bit_length() - 1]
        if sums[t] > f(t):
            return t
    return None if f(0) >= 0 else 0


def bruteforce_common_independent(m1, m2, w: Sequence[int], limit: int = 8) -> tuple[int, int]:
    """Heaviest mask independent in both matroids; ties go to the smallest mask."""
    n = m1.n
    if n > limit:
        raise InstanceTooLarge(f"exhaustive intersection limited to n <= {limit}")
    best, arg = 0, 0
    for t in range(1 << n):
        size = t.bit_count()
        if m1.rank(t) != size or m2.rank(t) != size:
            continue
        wt = sum(w[e] for e in range(n) if t >> e & 1)
        if wt > best:
            best, arg = wt, t
    return best, arg
