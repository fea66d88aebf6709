"""Small walkthrough: check, bound, maximize and minimize a few instances."""

import random
from fractions import Fraction

from kdsm import GroundSet, TableFunction, is_k_distant, lemma_bound, maximize_over_Pf, minimize
from kdsm.apps.generators import gen_random_kdistant, random_graph
from kdsm.apps.graphs import gen_clique_function, has_clique


def show(title, f, k, w=None):
    g = GroundSet(f.n)
    print(f"== {title} (n={f.n}, k={k})")
    print("   k-distant:", bool(is_k_distant(f, k)))
    b = lemma_bound(f, k)
    print(f"   bounds: M={b.M} lower={b.lower} upper={b.upper}")
    if w is not None:
        res = maximize_over_Pf(f, k, w)
        print(f"   max w.x = {res.value} at x = {[str(v) for v in res.x]}")
    res = minimize(f, k)
    print(f"   min f = {res.min_value} at {g.names(res.argmin)} ({res.oracle_calls} LP calls)")


if __name__ == "__main__":
    u23 = TableFunction(GroundSet(3), 2, [Fraction(min(t.bit_count(), 2)) for t in range(8)])
    show("uniform rank 2 on 3 elements", u23, 2, [3, 2, 1])
    show("random cut function", gen_random_kdistant(8, 3, 1, "cut"), 3, [1] * 8)
    adj = random_graph(7, 0.5, random.Random(1))
    f = gen_clique_function(adj, 3)
    show(f"triangle detector (triangle present: {has_clique(adj, 3)})", f, 7)
