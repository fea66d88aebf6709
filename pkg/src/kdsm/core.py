"""Set functions on bitmask-encoded subsets, k-distance checks and value bounds.

Element ``i`` (0-based) of the ground set is bit ``i`` of every subset mask.
All values are :class:`fractions.Fraction`; nothing here touches floats.
"""

from __future__ import annotations

import json
import math
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Sequence

import numpy as np

EXHAUSTIVE_LIMIT = 14

_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


class InstanceTooLarge(ValueError):
    """Raised when an exhaustive routine is asked to enumerate too many sets."""


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` (base 10, q > 0) into a Fraction."""
    m = _RATIONAL_RE.match(text.strip()) if isinstance(text, str) else None
    if m is None:
        raise ValueError(f"malformed rational {text!r}")
    num, den = m.groups()
    if den is not None and int(den) == 0:
        raise ValueError(f"malformed rational {text!r}: zero denominator")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def popcount(mask: int) -> int:
    return mask.bit_count()


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def elements_of(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def small_sets(n: int, k: int) -> Iterable[int]:
    """All masks with at most ``k`` elements, in order of size."""
    for size in range(min(k, n) + 1):
        for combo in combinations(range(n), size):
            yield mask_of(combo)


@dataclass(frozen=True)
class GroundSet:
    n: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("ground set needs n >= 1")
        if self.labels is not None:
            if len(self.labels) != self.n or len(set(self.labels)) != self.n:
                raise ValueError("labels must be n distinct names")

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def label(self, i: int) -> str:
        if self.labels is not None:
            return self.labels[i]
        return chr(ord("a") + i) if self.n <= 26 else f"s{i + 1}"

    def names(self, mask: int) -> list[str]:
        return [self.label(i) for i in elements_of(mask)]


class SetFunction:
    """Deterministic oracle ``mask -> Fraction`` with a declared distance parameter."""

    def __init__(self, ground: GroundSet | int, k: int):
        if isinstance(ground, int):
            ground = GroundSet(ground)
        self.ground = ground
        self.k = k

    @property
    def n(self) -> int:
        return self.ground.n

    def __call__(self, mask: int) -> Fraction:
        raise NotImplementedError

    def table(self) -> list[Fraction]:
        return [self(m) for m in range(1 << self.n)]

    def with_k(self, k: int) -> "SetFunction":
        return TableFunction(self.ground, k, self.table())

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, k={self.k})"


class TableFunction(SetFunction):
    def __init__(self, ground: GroundSet | int, k: int, values: Sequence):
        super().__init__(ground, k)
        if len(values) != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} values, got {len(values)}")
        self._values = tuple(Fraction(v) for v in values)

    def __call__(self, mask: int) -> Fraction:
        return self._values[mask]

    def table(self) -> list[Fraction]:
        return list(self._values)

    def with_k(self, k: int) -> "TableFunction":
        return TableFunction(self.ground, k, self._values)

    def __eq__(self, other):
        return (isinstance(other, TableFunction) and self.ground == other.ground
                and self.k == other.k and self._values == other._values)

    __hash__ = None


class OracleFunction(SetFunction):
    """Generator-backed function; results are memoized up to ``memo_budget`` masks."""

    def __init__(self, ground: GroundSet | int, k: int, fn: Callable[[int], object],
                 memo_budget: int = 1 << 20):
        super().__init__(ground, k)
        self._fn = fn
        self._memo: dict[int, Fraction] = {}
        self._budget = memo_budget
        self._lock = threading.Lock()

    def __call__(self, mask: int) -> Fraction:
        v = self._memo.get(mask)
        if v is None:
            v = Fraction(self._fn(mask))
            with self._lock:
                if len(self._memo) < self._budget:
                    self._memo[mask] = v
        return v

    def with_k(self, k: int) -> "OracleFunction":
        return OracleFunction(self.ground, k, self._fn, self._budget)


class ShiftedFunction(SetFunction):
    """``g(T) = base(T) - offset + c*[T != 0] - sum_{s in T} x(s)``."""

    def __init__(self, base: SetFunction, offset=0, nonempty_shift=0, modular=None):
        super().__init__(base.ground, base.k)
        self.base = base
        self.offset = Fraction(offset)
        self.nonempty_shift = Fraction(nonempty_shift)
        if modular is None:
            self.modular = None
        else:
            self.modular = tuple(Fraction(v) for v in modular)
            if len(self.modular) != self.n:
                raise ValueError("modular vector must have one entry per element")

    def __call__(self, mask: int) -> Fraction:
        v = self.base(mask) - self.offset
        if mask:
            v += self.nonempty_shift
            if self.modular is not None:
                v -= sum(self.modular[i] for i in elements_of(mask))
        return v

    def with_k(self, k: int) -> "ShiftedFunction":
        return ShiftedFunction(self.base.with_k(k), self.offset, self.nonempty_shift, self.modular)


# ---------------------------------------------------------------------------
# k-distance


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.holds


def _integer_table(values: Sequence[Fraction]) -> tuple[list[int], int]:
    """Scale a rational table to integers by the lcm of its denominators."""
    den = 1
    for v in values:
        den = math.lcm(den, v.denominator)
    return [int(v * den) for v in values], den


def is_k_distant(f: SetFunction, k: int | None = None, limit: int = EXHAUSTIVE_LIMIT) -> Verdict:
    """Exhaustively check the submodular inequality on pairs with ``|X ^ Y| >= k``.

    Returns the lexicographically smallest violating pair ``(X, Y)``, ``X < Y``,
    as the witness when the check fails.
    """
    k = f.k if k is None else k
    n = f.n
    if n > limit:
        raise InstanceTooLarge(f"instance too large for exhaustive check (n={n} > {limit})")
    if k < 1:
        raise ValueError("k must be positive")
    ints, _ = _integer_table(f.table())
    size = 1 << n
    if max(abs(v) for v in ints) < (1 << 60):
        vals = np.array(ints, dtype=np.int64)
    else:
        vals = np.array(ints, dtype=object)
    masks = np.arange(size, dtype=np.int64)
    pop = np.array([m.bit_count() for m in range(size)], dtype=np.int64)
    for x in range(size):
        ys = masks[x + 1:]
        far = pop[ys ^ x] >= k
        if not far.any():
            continue
        gap = vals[x] + vals[ys] - vals[ys | x] - vals[ys & x]
        bad = np.flatnonzero(far & (gap < 0))
        if bad.size:
            return Verdict(False, (x, int(ys[bad[0]])))
    return Verdict(True)


def is_submodular(f: SetFunction) -> Verdict:
    """Local (diminishing-returns) submodularity test, ``O(n^2 2^n)``."""
    n = f.n
    for x in range(1 << n):
        fx = f(x)
        for a in range(n):
            if x >> a & 1:
                continue
            fa = f(x | 1 << a)
            for b in range(a + 1, n):
                if x >> b & 1:
                    continue
                if fa + f(x | 1 << b) < f(x | 1 << a | 1 << b) + fx:
                    return Verdict(False, (x | 1 << a, x | 1 << b))
    return Verdict(True)


# ---------------------------------------------------------------------------
# transforms


def normalize(f: SetFunction) -> tuple[SetFunction, Fraction]:
    offset = f(0)
    if offset == 0:
        return f, offset
    if isinstance(f, TableFunction):
        return TableFunction(f.ground, f.k, [v - offset for v in f.table()]), offset
    return ShiftedFunction(f, offset=offset), offset


def denormalize(f0: SetFunction, offset) -> SetFunction:
    offset = Fraction(offset)
    if offset == 0:
        return f0
    if isinstance(f0, TableFunction):
        return TableFunction(f0.ground, f0.k, [v + offset for v in f0.table()])
    return ShiftedFunction(f0, offset=-offset)


def shift_nonempty(f: SetFunction, c) -> SetFunction:
    """Add ``c >= 0`` to every value except the one at the empty set."""
    c = Fraction(c)
    if c < 0:
        raise ValueError("shift must be nonnegative to preserve k-distance")
    if f(0) != 0:
        raise ValueError("shift_nonempty expects a normalized function")
    if isinstance(f, ShiftedFunction):
        return ShiftedFunction(f.base, f.offset, f.nonempty_shift + c, f.modular)
    return ShiftedFunction(f, nonempty_shift=c)


def subtract_modular(f: SetFunction, x: Sequence) -> SetFunction:
    if len(x) != f.n:
        raise ValueError(f"modular vector has {len(x)} entries, ground set has {f.n}")
    if isinstance(f, ShiftedFunction):
        mod = [Fraction(v) for v in x]
        if f.modular is not None:
            mod = [a + b for a, b in zip(mod, f.modular)]
        return ShiftedFunction(f.base, f.offset, f.nonempty_shift, mod)
    return ShiftedFunction(f, modular=x)


# ---------------------------------------------------------------------------
# bounds


@dataclass(frozen=True)
class ValueBounds:
    M: Fraction
    lower: Fraction
    upper: Fraction
    absBound: Fraction


def lemma_bound(f: SetFunction, k: int | None = None) -> ValueBounds:
    """Bounds ``f(S) - M <= f(X) <= M`` for a normalized k-distant ``f``.

    ``M`` sums ``|f(T)|`` over all ``T`` with ``|T| <= k``.
    """
    k = f.k if k is None else k
    if k > f.n:
        raise ValueError(f"k={k} exceeds ground set size {f.n}")
    if f(0) != 0:
        raise ValueError("lemma_bound expects a normalized function (f(empty) = 0)")
    M = sum((abs(f(t)) for t in small_sets(f.n, k)), Fraction(0))
    lower = f(f.ground.full) - M
    return ValueBounds(M=M, lower=lower, upper=M, absBound=max(M, abs(lower)))


# ---------------------------------------------------------------------------
# instance files


def dump_instance(f: SetFunction) -> dict:
    doc = {"n": f.n, "k": f.k, "values": [format_rational(v) for v in f.table()]}
    if f.ground.labels is not None:
        doc["labels"] = list(f.ground.labels)
    return doc


def dumps_instance(f: SetFunction) -> str:
    return json.dumps(dump_instance(f))


def load_instance(doc: dict) -> TableFunction:
    try:
        n, k, values = doc["n"], doc["k"], doc["values"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"instance is missing field {exc}") from None
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if not isinstance(k, int) or k < 2:
        raise ValueError(f"k must be an integer >= 2, got {k!r}")
    if k > n:
        raise ValueError(f"k={k} > n={n}: ground set must have at least k elements")
    if not isinstance(values, list) or len(values) != 1 << n:
        got = len(values) if isinstance(values, list) else type(values).__name__
        raise ValueError(f"values must be an array of 2^n = {1 << n} entries, got {got}")
    parsed = []
    for i, v in enumerate(values):
        if not isinstance(v, str):
            raise ValueError(f"values[{i}] must be a rational string, got {v!r}")
        try:
            parsed.append(parse_rational(v))
        except ValueError as exc:
            raise ValueError(f"values[{i}]: {exc}") from None
    labels = doc.get("labels")
    ground = GroundSet(n, tuple(labels) if labels is not None else None)
    return TableFunction(ground, k, parsed)


def loads_instance(text: str) -> TableFunction:
    return load_instance(json.loads(text))
