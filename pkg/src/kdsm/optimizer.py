"""Maximize ``w^T x`` over ``P(f)`` for a k-distant ``f``.

Pipeline: sort elements by weight, break ties with the exact epsilon
perturbation so the order is strict, solve the dual LP restricted to the
constraint family, read the primal vertex off the optimal basis, and express
the dual certificate for the unperturbed weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import SetFunction, ValueBounds, lemma_bound, normalize
from .family import ConstraintFamily, Ordering, build_family, sort_elements
from .ratlp import (OPTIMAL, SingularBasis, StandardFormLP, solve_square,
                    solve_standard_form)


class CertificateError(RuntimeError):
    """The LP pipeline produced an inconsistent answer (e.g. f is not k-distant)."""


@dataclass(frozen=True)
class PerturbationParams:
    Bw: int
    Bf: Fraction
    eps: Fraction


@dataclass
class OptResult:
    x: list[Fraction]
    y: dict[int, Fraction]
    value: Fraction
    family: ConstraintFamily
    perturbed_w: list[Fraction]
    params: PerturbationParams
    basis: list[int]
    pivots: int = 0


def epsilon(n: int, Bw: int, Bf) -> Fraction:
    Bf = Fraction(Bf)
    if n < 1 or Bw < 1:
        raise ValueError("need n >= 1 and Bw >= 1")
    if Bf <= 0:
        raise ValueError("Bf must be positive (f identically zero needs no perturbation)")
    return Fraction(1, 4 * n * n * math.factorial(n) ** 3 * Bw ** n) / Bf


def perturb_weights(w: Sequence, ordering: Ordering, eps) -> list[Fraction]:
    """Lift each weight tied with its successor by ``eps * (n - i)`` (1-based i)."""
    n = ordering.n
    w = [Fraction(v) for v in w]
    out = list(w)
    perm = ordering.perm
    for i in range(n - 1):
        a, b = perm[i], perm[i + 1]
        if w[a] < w[b]:
            raise ValueError("weights are not sorted by the ordering")
        if w[a] == w[b]:
            out[a] = w[a] + eps * (n - 1 - i)
    for i in range(n - 1):
        assert out[perm[i]] > out[perm[i + 1]], "perturbed weights must be strictly decreasing"
    return out


def primal_from_dual_basis(family: ConstraintFamily | Sequence[int], f: SetFunction,
                           basis: Sequence[int]) -> list[Fraction]:
    """Solve ``x(T) = f(T)`` for the basis sets ``T`` (given as family indices)."""
    members = family.members if isinstance(family, ConstraintFamily) else family
    n = f.n
    if len(basis) != n:
        raise SingularBasis(f"need {n} basis sets, got {len(basis)}")
    sets = [members[j] for j in basis]
    rows = [[Fraction(t >> e & 1) for e in range(n)] for t in sets]
    return solve_square(rows, [f(t) for t in sets])


def _dual_lp(members: Sequence[int], n: int, f: SetFunction, w) -> StandardFormLP:
    A = [[t >> e & 1 for t in members] for e in range(n)]
    return StandardFormLP(tuple(map(tuple, A)), tuple(Fraction(v) for v in w),
                          tuple(f(t) for t in members))


def _weight_denominator(w) -> int:
    return max(Fraction(v).denominator for v in w)


def maximize_over_Pf(f: SetFunction, k: int | None = None, w: Sequence = (), *,
                     bounds: ValueBounds | None = None, check: bool = True) -> OptResult:
    """Optimal vertex of ``max w^T x, x in P(f)`` with a dual certificate on the family.

    ``f`` is normalized first. ``bounds`` may carry a precomputed
    :func:`lemma_bound` result for the normalized function.
    """
    k = f.k if k is None else k
    n = f.n
    w = [Fraction(v) for v in w]
    if len(w) != n:
        raise ValueError(f"weight vector has {len(w)} entries, ground set has {n}")
    if any(v < 0 for v in w):
        raise ValueError("weights must be nonnegative")
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k={k}, n={n}")
    f, _ = normalize(f)
    if bounds is None:
        bounds = lemma_bound(f, k)
    Bf = bounds.absBound if bounds.absBound > 0 else Fraction(1)
    Bw = _weight_denominator(w)
    params = PerturbationParams(Bw, Bf, epsilon(n, Bw, Bf))

    ordering = sort_elements(w)
    w_eps = perturb_weights(w, ordering, params.eps)
    family = build_family(ordering, k)
    members = [t for t in family.members if t]  # the empty set is a zero column
    col = {t: j for j, t in enumerate(members)}
    chain = [col[s] for s in ordering.prefixes[1:]]

    lp = _dual_lp(members, n, f, w_eps)
    sol = solve_standard_form(lp, basis=chain)
    if sol.status != OPTIMAL:
        raise CertificateError(f"restricted dual LP is {sol.status}")
    basis = sol.basis
    x = primal_from_dual_basis(members, f, basis)

    # same basis, unperturbed right-hand side
    B = [[Fraction(members[j] >> e & 1) for j in basis] for e in range(n)]
    yb = solve_square(B, w)
    pivots = sol.pivots
    if any(v < 0 for v in yb):
        lp0 = _dual_lp(members, n, f, w)
        sol0 = solve_standard_form(lp0, basis=chain)
        pivots += sol0.pivots
        y = {members[j]: v for j, v in enumerate(sol0.y) if v > 0}
    else:
        y = {members[j]: v for j, v in zip(basis, yb) if v > 0}

    value = sum((a * b for a, b in zip(w, x)), Fraction(0))
    res = OptResult(x, y, value, family, w_eps, params,
                    [members[j] for j in basis], pivots)
    if check:
        verify_certificate(f, w, res)
    return res


def verify_certificate(f: SetFunction, w: Sequence, res: OptResult) -> None:
    """Exact checks: ``x in P_C(f)``, ``sum y_T chi_T = w``, ``sum y_T f(T) = w^T x``."""
    n = f.n
    w = [Fraction(v) for v in w]
    for t in res.family.members:
        if sum(res.x[e] for e in range(n) if t >> e & 1) > f(t):
            raise CertificateError(f"x violates the family constraint at mask {t}")
    cover = [Fraction(0)] * n
    for t, v in res.y.items():
        if v < 0 or t not in res.family:
            raise CertificateError(f"bad dual entry at mask {t}")
        for e in range(n):
            if t >> e & 1:
                cover[e] += v
    if cover != w:
        raise CertificateError("dual certificate does not reproduce w")
    dual = sum((v * f(t) for t, v in res.y.items()), Fraction(0))
    if dual != res.value:
        raise CertificateError(f"duality gap: dual {dual} != primal {res.value}")
