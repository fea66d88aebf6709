"""Exact two-phase simplex for ``min c^T y  s.t.  A y = b, y >= 0``.

The tableau is kept fraction-free: every entry is an integer and the real
tableau is ``T / D`` for a single positive integer ``D``. Pivoting on ``p``
replaces each non-pivot row by ``(p * row - row[s] * pivot_row) // D`` and sets
``D = p``; the divisions are exact (every entry is a minor of the scaled input).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class SingularBasis(ArithmeticError):
    pass


@dataclass(frozen=True)
class StandardFormLP:
    A: tuple[tuple[Fraction | int, ...], ...]
    b: tuple[Fraction, ...]
    c: tuple[Fraction, ...]

    @classmethod
    def build(cls, A, b, c) -> "StandardFormLP":
        A = tuple(tuple(Fraction(v) for v in row) for row in A)
        b = tuple(Fraction(v) for v in b)
        c = tuple(Fraction(v) for v in c)
        if len(A) != len(b):
            raise ValueError("A and b disagree on the number of rows")
        if any(len(row) != len(c) for row in A):
            raise ValueError("every row of A needs one entry per column of c")
        return cls(A, b, c)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.b), len(self.c)


@dataclass
class LPSolution:
    status: str
    y: list[Fraction] = field(default_factory=list)
    basis: list[int] = field(default_factory=list)
    objective: Fraction | None = None
    pivots: int = 0


def _lcm_den(values) -> int:
    d = 1
    for v in values:
        d = math.lcm(d, v.denominator)
    return d


class _Tableau:
    """Integer tableau with structural columns, artificials, then the rhs."""

    def __init__(self, lp: StandardFormLP, rule: str):
        m, d = lp.shape
        self.m, self.d = m, d
        self.rule = rule
        self.bland = rule == "bland"
        self.pivots = 0
        # rows are cleared of their own denominators; the rhs column gets one
        # common scale so that unimodular bases keep the tableau small
        scales = [_lcm_den(lp.A[i]) for i in range(m)]
        self.rhs_scale = _lcm_den(lp.b[i] * scales[i] for i in range(m))
        rows = []
        for i in range(m):
            scale = scales[i]
            sign = -1 if lp.b[i] < 0 else 1
            row = [int(a * scale) * sign for a in lp.A[i]]
            art = [0] * m
            art[i] = 1
            rows.append(row + art + [int(lp.b[i] * scale * self.rhs_scale) * sign])
        self.T = rows
        self.D = 1
        self.basis = [d + i for i in range(m)]
        cs = _lcm_den(lp.c)
        self.cost = [int(v * cs) for v in lp.c] + [0] * m
        self.cost_scale = cs
        self.z: list[int] = []
        self.active_rows = list(range(m))

    # -- pivoting -----------------------------------------------------------

    def pivot(self, r: int, s: int):
        T, D = self.T, self.D
        prow = T[r]
        p = prow[s]
        if p < 0:
            prow = [-v for v in prow]
            T[r] = prow
            p = -p
        for i in self.active_rows:
            if i == r:
                continue
            row = T[i]
            t = row[s]
            if t == 0:
                if p != D:
                    T[i] = [v * p // D for v in row]
            else:
                T[i] = [(v * p - t * q) // D for v, q in zip(row, prow)]
        t = self.z[s] if self.z else 0
        if self.z:
            self.z = [(v * p - t * q) // D for v, q in zip(self.z, prow)]
        self.D = p
        self.basis[r] = s
        self.pivots += 1

    def set_objective(self, cost: Sequence[int]):
        """Reduced-cost row ``D*c - c_B^T T`` (rhs entry is ``-D * objective``)."""
        D = self.D
        width = self.d + self.m + 1
        z = [D * cost[j] for j in range(width - 1)] + [0]
        for i in self.active_rows:
            cb = cost[self.basis[i]]
            if cb:
                row = self.T[i]
                z = [a - cb * b for a, b in zip(z, row)]
        self.z = z

    def entering(self, allowed: int) -> int | None:
        z = self.z
        if self.bland:
            for j in range(allowed):
                if z[j] < 0:
                    return j
            return None
        best, arg = 0, None
        for j in range(allowed):
            if z[j] < best:
                best, arg = z[j], j
        return arg

    def leaving(self, s: int) -> int | None:
        best = None
        for i in self.active_rows:
            a = self.T[i][s]
            if a <= 0:
                continue
            rhs = self.T[i][-1]
            if best is None:
                best = (i, rhs, a)
                continue
            _, brhs, ba = best
            lhs, rhs_ = rhs * ba, brhs * a
            if lhs < rhs_ or (lhs == rhs_ and self.basis[i] < self.basis[best[0]]):
                best = (i, rhs, a)
        return None if best is None else best[0]

    def run(self, allowed: int) -> str:
        while True:
            s = self.entering(allowed)
            if s is None:
                return OPTIMAL
            r = self.leaving(s)
            if r is None:
                return UNBOUNDED
            if self.T[r][-1] == 0 and not self.bland:
                # degenerate step: Bland's rule from here on guarantees termination
                self.bland = True
            self.pivot(r, s)

    # -- phases -------------------------------------------------------------

    def warm_start(self, columns: Sequence[int]) -> bool:
        """Pivot ``columns`` into the basis; False if they are singular or infeasible."""
        used = set()
        for s in columns:
            r = None
            for i in self.active_rows:
                if i not in used and self.T[i][s] != 0:
                    r = i
                    break
            if r is None:
                return False
            self.z = []
            self.pivot(r, s)
            used.add(r)
        return all(self.T[i][-1] >= 0 for i in self.active_rows)

    def phase_one(self) -> bool:
        m, d = self.m, self.d
        self.set_objective([0] * d + [1] * m)
        self.run(d)
        if self.z[-1] != 0:
            return False
        for i in list(self.active_rows):
            if self.basis[i] < d:
                continue
            col = next((j for j in range(d) if self.T[i][j] != 0), None)
            if col is None:
                self.active_rows.remove(i)  # redundant equality
            else:
                self.pivot(i, col)
        return True

    def solution(self) -> list[Fraction]:
        y = [Fraction(0)] * self.d
        for i in self.active_rows:
            y[self.basis[i]] = Fraction(self.T[i][-1], self.D * self.rhs_scale)
        return y


def solve_standard_form(lp: StandardFormLP, basis: Sequence[int] | None = None,
                        rule: str = "dantzig") -> LPSolution:
    """Solve ``min c^T y, A y = b, y >= 0`` exactly.

    ``basis`` optionally names ``m`` columns forming a primal feasible starting
    basis (phase one is skipped). ``rule`` is ``"bland"`` or ``"dantzig"``; the
    latter falls back to Bland's rule permanently at the first degenerate pivot.
    """
    if rule not in ("bland", "dantzig"):
        raise ValueError(f"unknown pivot rule {rule!r}")
    m, d = lp.shape
    tab = _Tableau(lp, rule)
    if m == 0:
        if any(c < 0 for c in lp.c):
            return LPSolution(UNBOUNDED)
        return LPSolution(OPTIMAL, [Fraction(0)] * d, [], Fraction(0))
    started = basis is not None and len(basis) == m and tab.warm_start(basis)
    if not started:
        if basis is not None:
            tab = _Tableau(lp, rule)
        if not tab.phase_one():
            return LPSolution(INFEASIBLE, pivots=tab.pivots)
    tab.set_objective(tab.cost)
    status = tab.run(d)
    if status == UNBOUNDED:
        return LPSolution(UNBOUNDED, pivots=tab.pivots)
    y = tab.solution()
    obj = sum((c * v for c, v in zip(lp.c, y) if v), Fraction(0))
    basis_cols = [tab.basis[i] for i in tab.active_rows]
    return LPSolution(OPTIMAL, y, basis_cols, obj, tab.pivots)


def solve_square(M: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    """Gaussian elimination over the rationals; raises SingularBasis."""
    n = len(M)
    aug = [[Fraction(v) for v in row] + [Fraction(r)] for row, r in zip(M, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise SingularBasis("basis matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        prow = aug[col]
        inv = 1 / prow[col]
        for r in range(n):
            if r == col or aug[r][col] == 0:
                continue
            f = aug[r][col] * inv
            row = aug[r]
            aug[r] = [a - f * b for a, b in zip(row, prow)]
    return [aug[i][n] / aug[i][i] for i in range(n)]


def check_standard_form(lp: StandardFormLP, y: Sequence[Fraction]) -> bool:
    """``A y = b`` and ``y >= 0`` with exact equality."""
    if any(v < 0 for v in y):
        return False
    for row, b in zip(lp.A, lp.b):
        if sum((a * v for a, v in zip(row, y) if a and v), Fraction(0)) != b:
            return False
    return True
