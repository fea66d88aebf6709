import sys
import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import strategies as st

from kdsm.core import GroundSet, TableFunction


def table(n, k, values):
    return TableFunction(GroundSet(n), k, [Fraction(v) for v in values])


def indicator(n, t, k=2):
    return table(n, k, [-1 if m == t else 0 for m in range(1 << n)])


def uniform_rank(n, r, k=2):
    return table(n, k, [min(m.bit_count(), r) for m in range(1 << n)])


def random_submodular(n, rng, k=2):
    """Concave-of-cardinality plus a nonnegative cut plus a modular part."""
    conc = [0]
    step = rng.randint(n, 2 * n)
    for _ in range(n):
        conc.append(conc[-1] + step)
        step = max(0, step - rng.randint(0, 3))
    w = {e: rng.randint(0, 3) for e in combinations(range(n), 2)}
    mod = [Fraction(rng.randint(-6, 6), rng.choice([1, 1, 2, 3])) for _ in range(n)]
    vals = []
    for t in range(1 << n):
        cut = sum(c for (u, v), c in w.items() if (t >> u & 1) != (t >> v & 1))
        vals.append(conc[t.bit_count()] + cut + sum(mod[e] for e in range(n) if t >> e & 1))
    return table(n, k, vals)


@pytest.fixture
def f_S():
    return indicator(3, 0b111)


@pytest.fixture
def f_ab():
    return indicator(3, 0b011)


@pytest.fixture
def u23():
    return uniform_rank(3, 2)


@pytest.fixture
def rng():
    return random.Random(12345)


small_rationals = st.fractions(min_value=-8, max_value=8, max_denominator=4)
weights = st.fractions(min_value=0, max_value=5, max_denominator=3)


@st.composite
def tables(draw, min_n=2, max_n=5, integer=False):
    n = draw(st.integers(min_n, max_n))
    elem = st.integers(-6, 6) if integer else small_rationals
    vals = draw(st.lists(elem, min_size=1 << n, max_size=1 << n))
    k = draw(st.integers(2, n))
    return table(n, k, vals)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
