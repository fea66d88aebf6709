"""Weight ordering of the ground set and the restricted constraint family.

The family is every prefix ``S_i`` of the weight-sorted order, toggled by at
most ``k - 2`` elements. Any dual optimum of the polyhedron LP can be taken
with support inside it when ``f`` is k-distant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from .core import mask_of


@dataclass(frozen=True)
class Ordering:
    perm: tuple[int, ...]  # 0-based element indices, heaviest first
    prefixes: tuple[int, ...]  # S_0 = 0, S_1, ..., S_n

    @property
    def n(self) -> int:
        return len(self.perm)


@dataclass(frozen=True)
class ConstraintFamily:
    ordering: Ordering
    k: int
    members: tuple[int, ...]

    def __len__(self):
        return len(self.members)

    def __contains__(self, mask):
        return mask in self._index

    def __iter__(self):
        return iter(self.members)

    @property
    def _index(self) -> frozenset:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = frozenset(self.members)
            object.__setattr__(self, "_idx", idx)
        return idx


def ordering_from_perm(perm: Sequence[int]) -> Ordering:
    prefixes = [0]
    for e in perm:
        prefixes.append(prefixes[-1] | 1 << e)
    return Ordering(tuple(perm), tuple(prefixes))


def sort_elements(w: Sequence) -> Ordering:
    """Descending by weight, ties by ascending element index."""
    w = [Fraction(v) for v in w]
    if any(v < 0 for v in w):
        raise ValueError("weights must be nonnegative")
    perm = sorted(range(len(w)), key=lambda i: (-w[i], i))
    return ordering_from_perm(perm)


def build_family(ordering: Ordering, k: int) -> ConstraintFamily:
    n = ordering.n
    if k < 2:
        raise ValueError("k must be at least 2")
    if k > n:
        raise ValueError(f"k={k} exceeds ground set size {n}")
    toggles = [mask_of(c) for r in range(k - 1) for c in combinations(range(n), r)]
    members = {s ^ t for s in ordering.prefixes for t in toggles}
    return ConstraintFamily(ordering, k, tuple(sorted(members)))


def family_size_bound(n: int, k: int) -> int:
    """``(n + 1) * sum_{i <= k-2} C(n, i)``; never exceeds ``2 n^k``."""
    if not 2 <= k <= n:
        raise ValueError("need 2 <= k <= n")
    return (n + 1) * sum(comb(n, i) for i in range(k - 1))
