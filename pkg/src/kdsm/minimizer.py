"""Minimization of integer-valued k-distant functions.

``membership_zero`` decides whether ``0`` lies in ``P(g)``, i.e. whether ``g``
is nonnegative. It searches the weight box ``[0, 1]^n`` with an ellipsoid for
a point ``w`` where ``h(w) = max{w^T x : x in P(g)}`` is negative; ``h`` is
evaluated exactly by :func:`maximize_over_Pf`, whose dual certificate then
names a set with ``g(T) < 0``. Such witnesses are checked by direct evaluation.

``minimize`` binary-searches the smallest shift ``c`` making
``g = f + c`` (off the empty set) nonnegative.
"""

from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .core import (InstanceTooLarge, SetFunction, ValueBounds, lemma_bound,
                   normalize, shift_nonempty)
from .family import build_family, sort_elements
from .optimizer import maximize_over_Pf
from .ratlp import OPTIMAL, StandardFormLP, solve_standard_form

log = logging.getLogger(__name__)

BUDGET_ENV = "KDSM_BUDGET"

NONNEGATIVE = "nonnegative"
WITNESS = "witness"


class ConsistencyError(RuntimeError):
    """A membership answer contradicts an exhaustive check."""


@dataclass
class MembershipVerdict:
    kind: str
    witness: int | None = None
    value: Fraction | None = None
    oracle_calls: int = 0
    iterations: int = 0
    reason: str = ""
    pivots: int = 0

    @property
    def nonnegative(self) -> bool:
        return self.kind == NONNEGATIVE


@dataclass
class EllipsoidState:
    """``{w : (w - center)^T shape^{-1} (w - center) <= 1}``."""

    center: list[Fraction]
    shape: list[list[Fraction]]
    iteration: int = 0
    lam_low: Fraction = Fraction(0)  # lower bound on the smallest eigenvalue of shape

    @classmethod
    def box_ball(cls, n: int) -> "EllipsoidState":
        r2 = Fraction(n, 4) + Fraction(1, 4)
        shape = [[r2 if i == j else Fraction(0) for j in range(n)] for i in range(n)]
        return cls([Fraction(1, 2)] * n, shape, 0, r2)

    def is_positive_definite(self) -> bool:
        """Exact test via leading principal minors."""
        n = len(self.shape)
        M = [row[:] for row in self.shape]
        for i in range(n):
            if M[i][i] <= 0:
                return False
            for r in range(i + 1, n):
                f = M[r][i] / M[i][i]
                if f:
                    M[r] = [a - f * b for a, b in zip(M[r], M[i])]
        return True


@dataclass
class MinimizeResult:
    min_value: Fraction
    argmin: int
    trace: list[tuple[Fraction, MembershipVerdict]] = field(default_factory=list)
    offset: Fraction = Fraction(0)

    @property
    def oracle_calls(self) -> int:
        return sum(v.oracle_calls for _, v in self.trace)

    @property
    def pivots(self) -> int:
        return sum(v.pivots for _, v in self.trace)


def default_budget(n: int, Bg) -> int:
    """``ceil(8 n (n+1) (n ln 2 + ln(8 n^2 Xmax)))`` with ``Xmax = n! * Bg``."""
    env = os.environ.get(BUDGET_ENV)
    if env:
        return int(env)
    xmax = math.factorial(n) * max(Fraction(Bg), Fraction(1))
    logx = math.log(xmax.numerator) - math.log(xmax.denominator)
    return math.ceil(8 * n * (n + 1) * (n * math.log(2) + math.log(8 * n * n) + logx))


# ---------------------------------------------------------------------------
# ellipsoid arithmetic


def _round(q: Fraction, bits: int, up: bool = False) -> Fraction:
    scaled = q * (1 << bits)
    v = math.ceil(scaled) if up else math.floor(scaled + Fraction(1, 2))
    return Fraction(v, 1 << bits)


def _sqrt_upper(q: Fraction, bits: int) -> Fraction:
    """Rational ``s >= sqrt(q)`` with absolute error at most ``2^-bits``."""
    scale = 1 << (2 * bits)
    r = math.isqrt(q.numerator * scale // q.denominator)
    return Fraction(r + 1, 1 << bits)


def _bits_for(x: Fraction) -> int:
    """Smallest b with 2^-b <= x (x > 0)."""
    return max(0, x.denominator.bit_length() - x.numerator.bit_length() + 1)


def ellipsoid_cut(state: EllipsoidState, a: Sequence[Fraction], beta: Fraction) -> bool:
    """Shrink ``state`` to contain ``state ∩ {w : a^T w <= beta}``.

    Returns False when that intersection is empty. Arithmetic is rounded to
    a dyadic grid; the shape is padded so the new ellipsoid only grows.
    """
    n = len(a)
    Q, c = state.shape, state.center
    Qa = [sum((q * x for q, x in zip(row, a) if x), Fraction(0)) for row in Q]
    aQa = sum((x * y for x, y in zip(a, Qa) if x), Fraction(0))
    if aQa <= 0:
        raise ArithmeticError("ellipsoid shape lost positive definiteness")
    prec = 40 + 2 * n + _bits_for(aQa)
    s = _sqrt_upper(aQa, prec)
    gap = sum((x * y for x, y in zip(a, c) if x), Fraction(0)) - beta
    alpha = gap / s
    if alpha >= 1:
        return False
    if alpha <= Fraction(-1, n):
        return True  # cut misses the useful part of the ellipsoid; nothing to shrink
    b = [v / s for v in Qa]
    tau = (1 + n * alpha) / (n + 1)
    sigma = 2 * (1 + n * alpha) / ((n + 1) * (1 + alpha))
    delta = Fraction(n * n, n * n - 1) * (1 - alpha * alpha) * (1 + Fraction(1, 2 * n * n))

    lam = delta * (1 - sigma) * state.lam_low
    bits = 24 + _bits_for(lam / n) if lam > 0 else 64 + 4 * state.iteration
    pad = Fraction(n, 1 << bits)
    state.center = [_round(ci - tau * bi, bits) for ci, bi in zip(c, b)]
    newQ = []
    for i in range(n):
        bi = sigma * b[i]
        row = [_round(delta * (Q[i][j] - bi * b[j]), bits) for j in range(n)]
        row[i] += pad
        newQ.append(row)
    for i in range(n):
        for j in range(i):
            newQ[i][j] = newQ[j][i]
    state.shape = newQ
    state.lam_low = lam
    return True


# ---------------------------------------------------------------------------
# membership


def _cut_region_empty(cuts: Sequence[Sequence[Fraction]], n: int) -> bool:
    """Is ``{w in [0,1]^n : x^T w <= -1/2 for every cut x}`` empty?  (exact LP)"""
    m = len(cuts)
    # variables: w (n), box slacks (n), cut slacks (m)
    A, b = [], []
    for i in range(n):
        row = [Fraction(0)] * (2 * n + m)
        row[i] = Fraction(1)
        row[n + i] = Fraction(1)
        A.append(row)
        b.append(Fraction(1))
    for j, x in enumerate(cuts):
        row = [Fraction(v) for v in x] + [Fraction(0)] * (n + m)
        row[2 * n + j] = Fraction(1)
        A.append(row)
        b.append(Fraction(-1, 2))
    lp = StandardFormLP(tuple(map(tuple, A)), tuple(b), tuple([Fraction(0)] * (2 * n + m)))
    sol = solve_standard_form(lp)
    return sol.status != OPTIMAL


def _scan(g: SetFunction, masks, cache: dict) -> int | None:
    for t in masks:
        v = cache.get(t)
        if v is None:
            v = cache[t] = g(t)
        if v < 0:
            return t
    return None


def bruteforce_minimize(f: SetFunction, limit: int = 24) -> tuple[Fraction, int]:
    """Exhaustive minimum; ties go to the smallest mask."""
    if f.n > limit:
        raise InstanceTooLarge(f"exhaustive minimization limited to n <= {limit}")
    best, arg = f(0), 0
    for t in range(1, 1 << f.n):
        v = f(t)
        if v < best:
            best, arg = v, t
    return best, arg


def membership_zero(g: SetFunction, k: int | None = None, Bg=None, *,
                    budget: int | None = None, verify: bool = False,
                    bounds: ValueBounds | None = None,
                    on_iteration: Callable[[EllipsoidState, str], None] | None = None
                    ) -> MembershipVerdict:
    """Decide ``min g >= 0`` or return a witness ``T`` with ``g(T) <= -1``.

    ``g`` must be normalized, integer-valued and k-distant. A nonnegative
    verdict is certified exactly when the family covers every subset or the
    collected subgradient cuts leave no room for ``h <= -1/2``; otherwise it
    rests on the ellipsoid emptying out or on the iteration budget.
    """
    k = g.k if k is None else k
    n = g.n
    if g(0) != 0:
        raise ValueError("membership_zero expects a normalized function")
    if bounds is None:
        bounds = lemma_bound(g, k)
    if Bg is None:
        Bg = bounds.absBound
    if budget is None:
        budget = default_budget(n, Bg)

    cache: dict[int, Fraction] = {}
    verdict = _membership(g, k, bounds, budget, cache, on_iteration)
    if verdict.kind == WITNESS:
        assert g(verdict.witness) == verdict.value and verdict.value < 0
    if verify:
        best, arg = bruteforce_minimize(g)
        if verdict.nonnegative and best < 0:
            raise ConsistencyError(
                f"membership said nonnegative but g({arg}) = {best} ({verdict.reason})")
    return verdict


def _membership(g, k, bounds, budget, cache, on_iteration) -> MembershipVerdict:
    n = g.n
    calls = pivots = 0

    def found(t, it, reason):
        return MembershipVerdict(WITNESS, t, cache.get(t, g(t)), calls, it, reason, pivots)

    def done(reason):
        return MembershipVerdict(NONNEGATIVE, None, None, calls, state.iteration, reason, pivots)

    first = build_family(sort_elements([1] * n), k)
    t = _scan(g, first.members, cache)
    if t is not None:
        return found(t, 0, "family scan")
    if len(first) == 1 << n:
        return MembershipVerdict(NONNEGATIVE, oracle_calls=0, reason="exhaustive family")

    state = EllipsoidState.box_ball(n)
    cuts: list[list[Fraction]] = []
    half = Fraction(1, 2)
    grid = 8 + n.bit_length()
    next_check = 1
    while state.iteration < budget:
        state.iteration += 1
        c = state.center
        outside = next((i for i in range(n) if c[i] < 0 or c[i] > 1), None)
        if outside is not None:
            a = [Fraction(0)] * n
            if c[outside] < 0:
                a[outside], beta = Fraction(-1), Fraction(0)
            else:
                a[outside], beta = Fraction(1), Fraction(1)
            if on_iteration:
                on_iteration(state, "box")
            if not ellipsoid_cut(state, a, beta):
                return done("ellipsoid empty")
            continue

        while True:
            q = [min(max(_round(v, grid), Fraction(0)), Fraction(1)) for v in c]
            fam = build_family(sort_elements(q), k)
            t = _scan(g, fam.members, cache)
            if t is not None:
                return found(t, state.iteration, "family scan")
            res = maximize_over_Pf(g, k, q, bounds=bounds, check=False)
            calls += 1
            pivots += res.pivots
            if res.value < 0:
                t = min((s for s in res.y if g(s) < 0), default=None)
                if t is None:
                    raise ConsistencyError("negative LP value without a negative dual set")
                return found(t, state.iteration, "dual certificate")
            x = res.x
            depth = sum((a * b for a, b in zip(x, c)), Fraction(0)) + half
            if depth >= 0 or q == c:
                break
            grid += 8  # query point too coarse for a valid deep cut at the center

        if not any(x):
            return done("zero vertex")
        cuts.append(x)
        if on_iteration:
            on_iteration(state, "oracle")
        if len(cuts) >= next_check:
            if _cut_region_empty(cuts, n):
                return done("cut certificate")
            next_check = len(cuts) + max(1, len(cuts) // 4)
        if not ellipsoid_cut(state, x, -half):
            return done("ellipsoid empty")
    return done("budget")


# ---------------------------------------------------------------------------
# binary search


def minimize(f: SetFunction, k: int | None = None, *, budget: int | None = None,
             verify: bool = False, trace: Callable[[str], None] | None = None) -> MinimizeResult:
    """Minimize an integer-valued k-distant ``f`` by binary search on the shift."""
    k = f.k if k is None else k
    n = f.n
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k={k}, n={n}")
    f0, offset = normalize(f)
    bounds = lemma_bound(f0, k)
    if any(v.denominator != 1 for v in (bounds.M, bounds.lower)):
        raise ValueError("minimize needs an integer-valued function")
    lo = 0
    hi = max(0, int(bounds.M - f0(f0.ground.full)))
    best_t = 0
    history: list[tuple[Fraction, MembershipVerdict]] = []
    while lo < hi:
        c = (lo + hi) // 2
        g = shift_nonempty(f0, c)
        v = membership_zero(g, k, budget=budget)
        history.append((Fraction(c), v))
        if trace:
            trace(f"shift {c}: {v.kind} ({v.reason}, {v.iterations} it, {v.oracle_calls} calls)")
        if v.nonnegative:
            hi = c
        else:
            fv = f0(v.witness)
            if fv.denominator != 1:
                raise ValueError("minimize needs an integer-valued function")
            lo = max(c + 1, int(-fv))
            best_t = v.witness
            hi = max(hi, lo)
    min_value = -Fraction(lo)
    if lo > 0 and f0(best_t) != min_value:
        # the search ended on a bound proven by a nonnegative verdict, not a witness
        v = membership_zero(shift_nonempty(f0, lo - 1), k, budget=budget)
        history.append((Fraction(lo - 1), v))
        if v.nonnegative:
            raise ConsistencyError("binary search lost its witness")
        best_t = v.witness
    res = MinimizeResult(min_value + offset, best_t if lo > 0 else 0, history, offset)
    if verify:
        best, _ = bruteforce_minimize(f)
        if best != res.min_value:
            raise ConsistencyError(f"minimize returned {res.min_value}, exhaustive minimum is {best}")
    return res

