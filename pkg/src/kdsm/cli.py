"""Command-line front end.

One JSON object goes to standard output; progress and human-readable notes go
to standard error. Exit status: 0 success, 1 infeasible input or a failed
check, 2 internal-consistency failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .apps.matroid import IntersectionError
from .core import (GroundSet, SetFunction, TableFunction, dump_instance, format_rational,
                   is_k_distant, lemma_bound, load_instance, normalize, parse_rational)
from .family import build_family, family_size_bound, sort_elements
from .minimizer import ConsistencyError, bruteforce_minimize, minimize
from .optimizer import CertificateError, maximize_over_Pf, verify_certificate
from .reference import bruteforce_maximize_full, in_polyhedron

EXIT_OK, EXIT_FAIL, EXIT_INTERNAL = 0, 1, 2


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# file parsing


def _read_json(path: str | None, what: str):
    if path is None:
        raise UsageError(f"missing required {what} file")
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise UsageError(f"{what} file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} file {path} is not valid JSON: {exc}") from None


def parse_instance(path: str) -> TableFunction:
    return load_instance(_read_json(path, "instance"))


def _rational(v, where: str) -> Fraction:
    if isinstance(v, bool):
        raise UsageError(f"{where}: expected a number, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return parse_rational(v)
        except ValueError as exc:
            raise UsageError(f"{where}: {exc}") from None
    raise UsageError(f"{where}: expected an integer or a rational string, got {v!r}")


def parse_weights(path: str, n: int) -> list[Fraction]:
    """A JSON array (or ``{"w": [...]}``) of integers or rational strings."""
    doc = _read_json(path, "weights")
    if isinstance(doc, dict):
        doc = doc.get("w")
    if not isinstance(doc, list):
        raise UsageError("weights must be a JSON array or an object with field w")
    if len(doc) != n:
        raise UsageError(f"weights have {len(doc)} entries, expected n = {n}")
    return [_rational(v, f"weights[{i}]") for i, v in enumerate(doc)]


def parse_graph(path: str):
    """``{"nv": int, "edges": [[u, v] or [u, v, weight], ...]}`` with 1-based vertices."""
    doc = _read_json(path, "graph")
    nv = doc.get("nv") if isinstance(doc, dict) else None
    if not isinstance(nv, int) or nv < 1:
        raise UsageError("graph file needs a positive integer nv")
    edges = []
    for i, e in enumerate(doc.get("edges", [])):
        if not isinstance(e, list) or len(e) not in (2, 3):
            raise UsageError(f"edges[{i}] must be [u, v] or [u, v, weight]")
        u, v = e[0], e[1]
        if not all(isinstance(a, int) and 1 <= a <= nv for a in (u, v)) or u == v:
            raise UsageError(f"edges[{i}] has invalid endpoints {u}, {v}")
        wt = _rational(e[2], f"edges[{i}] weight") if len(e) == 3 else Fraction(1)
        edges.append((u - 1, v - 1, wt))
    return nv, edges


def _labels(f: SetFunction, mask: int) -> list[str]:
    return f.ground.names(mask)


def _ids(mask: int, n: int) -> list[int]:
    return [e + 1 for e in range(n) if mask >> e & 1]


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc) + "\n")


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _resolve_k(f: SetFunction, k: int | None) -> int:
    k = f.k if k is None else k
    if not 2 <= k <= f.n:
        raise UsageError(f"need 2 <= k <= n, got k={k}, n={f.n}")
    return k


# ---------------------------------------------------------------------------
# verbs


def cmd_check(args) -> int:
    f = parse_instance(args.instance)
    k = _resolve_k(f, args.k)
    verdict = is_k_distant(f, k)
    doc = {"k": k, "holds": verdict.holds}
    if not verdict:
        x, y = verdict.witness
        doc["violation"] = [_labels(f, x), _labels(f, y)]
        _note(f"not {k}-distant: f(X)+f(Y) = {f(x) + f(y)} < {f(x | y) + f(x & y)} = f(X|Y)+f(X&Y)")
    _emit(doc)
    return EXIT_OK if verdict else EXIT_FAIL


def cmd_bounds(args) -> int:
    f = parse_instance(args.instance)
    k = _resolve_k(f, args.k)
    f0, offset = normalize(f)
    b = lemma_bound(f0, k)
    doc = {"M": format_rational(b.M), "lower": format_rational(b.lower),
           "upper": format_rational(b.upper), "absBound": format_rational(b.absBound)}
    if offset:
        doc["offset"] = format_rational(offset)
        _note(f"bounds are for f - f(empty) (offset {offset})")
    _emit(doc)
    return EXIT_OK


def cmd_family(args) -> int:
    if args.n is None or args.k is None:
        raise UsageError("family needs --n and --k")
    n, k = args.n, args.k
    if not 2 <= k <= n:
        raise UsageError(f"need 2 <= k <= n, got k={k}, n={n}")
    w = parse_weights(args.weights, n) if args.weights else [Fraction(0)] * n
    order = sort_elements(w)
    fam = build_family(order, k)
    ground = GroundSet(n)
    _emit({"n": n, "k": k, "perm": [p + 1 for p in order.perm], "size": len(fam),
           "bound": family_size_bound(n, k), "members": [ground.names(t) for t in fam.members]})
    return EXIT_OK


def cmd_maximize(args) -> int:
    f = parse_instance(args.instance)
    w = parse_weights(args.weights, f.n)
    start = time.perf_counter()
    res = maximize_over_Pf(f, f.k, w)
    doc = {"value": format_rational(res.value),
           "x": [format_rational(v) for v in res.x],
           "y": [{"set": _labels(f, t), "y": format_rational(v)} for t, v in sorted(res.y.items())],
           "family_size": len(res.family), "pivots": res.pivots}
    if args.verify:
        verify_certificate(f, w, res)
        bad = in_polyhedron(f, res.x)
        if bad is not None:
            raise CertificateError(f"x* violates the constraint for {_labels(f, bad)}")
        full = bruteforce_maximize_full(f, w)
        if full.value != res.value:
            raise CertificateError(f"full LP optimum {full.value} differs from {res.value}")
        doc["verified"] = True
    if args.time:
        doc["wall_time"] = round(time.perf_counter() - start, 6)
    _emit(doc)
    return EXIT_OK


def cmd_minimize(args) -> int:
    f = parse_instance(args.instance)
    k = _resolve_k(f, args.k)
    trace = _note if args.trace else None
    start = time.perf_counter()
    res = minimize(f, k, budget=args.budget, verify=args.verify, trace=trace)
    doc = {"min": format_rational(res.min_value), "argmin": _labels(f, res.argmin),
           "oracle_calls": res.oracle_calls, "pivots": res.pivots, "steps": len(res.trace)}
    if args.verify:
        doc["verified"] = True
    if args.time:
        doc["wall_time"] = round(time.perf_counter() - start, 6)
    _emit(doc)
    return EXIT_OK


def cmd_gen(args) -> int:
    from .apps import generators as gens
    from .apps.graphs import (WeightedCompleteGraph, adjacency_from_edges, gen_clique_function,
                              gen_cut_function)
    from .apps.matroid import build_min_rank, matroid_from_doc

    strategy = args.strategy
    if strategy not in gens.STRATEGIES:
        raise UsageError(f"unknown strategy {strategy!r}; choose from {', '.join(gens.STRATEGIES)}")
    if args.graph and strategy in ("cut", "clique"):
        nv, edges = parse_graph(args.graph)
        if strategy == "cut":
            g = WeightedCompleteGraph.from_edges(nv, {(u, v): wt for u, v, wt in edges})
            kk = args.k if args.k is not None else 2
            f = gen_cut_function(g, kk)
        else:
            kc = args.kc if args.kc is not None else 3
            f = gen_clique_function(adjacency_from_edges(nv, [(u, v) for u, v, _ in edges]), kc)
    elif args.forbidden and strategy == "minrank":
        doc = _read_json(args.forbidden, "forbidden sets")
        try:
            n, r = doc["n"], doc["r"]
            m1 = matroid_from_doc({"kind": "sparse_paving", "n": n, "r": r, "forbidden": doc["m1"]})
            m2 = matroid_from_doc({"kind": "sparse_paving", "n": n, "r": r, "forbidden": doc["m2"]})
        except (KeyError, TypeError) as exc:
            raise UsageError(f"forbidden file needs n, r, m1 and m2 ({exc})") from None
        inst = build_min_rank(m1, m2, 1)
        f = TableFunction(GroundSet(n), inst.rmin.k, inst.rmin.table())
    else:
        if args.n is None or args.k is None:
            raise UsageError("gen needs --n and --k (or a --graph/--forbidden file)")
        f = gens.gen_random_kdistant(args.n, args.k, args.seed, strategy)
    if not isinstance(f, TableFunction):
        f = TableFunction(f.ground, f.k, f.table())
    _emit(dump_instance(f))
    return EXIT_OK


def cmd_mi(args) -> int:
    from .apps.matroid import build_min_rank, matroid_from_doc, solve_weighted_matroid_intersection

    m1 = matroid_from_doc(_read_json(args.m1, "first matroid"))
    m2 = matroid_from_doc(_read_json(args.m2, "second matroid"))
    w = parse_weights(args.weights, m1.n)
    if any(v.denominator != 1 for v in w):
        raise UsageError("matroid intersection weights must be integers")
    k = args.k if args.k is not None else (m1.k or 1)
    inst = build_min_rank(m1, m2, k)
    res = solve_weighted_matroid_intersection(inst, [int(v) for v in w], budget=args.budget)
    _emit({"weight": res.weight, "set": _ids(res.common_independent, m1.n),
           "x": [format_rational(v) for v in res.x], "rounds": res.rounds,
           "cuts": [_ids(t, m1.n) for t in res.cuts]})
    return EXIT_OK


# ---------------------------------------------------------------------------
# bench


@dataclass
class BenchRow:
    n: int
    k: int
    strategy: str
    seed: int
    min_value: str
    agrees: bool
    oracle_calls: int
    pivots: int
    evaluations: int
    seconds: float


@dataclass
class BenchConfig:
    min_n: int = 4
    max_n: int = 8
    max_k: int = 4
    seed: int = 0
    per_cell: int = 1
    strategies: Sequence[str] = field(default_factory=lambda: ("cut", "indicator_shifted", "clique",
                                                               "minrank", "rejection"))

    def cells(self):
        from .apps.generators import supports
        for n in range(self.min_n, self.max_n + 1):
            for k in range(2, min(self.max_k, n) + 1):
                for s in self.strategies:
                    if supports(s, n, k):
                        for j in range(self.per_cell):
                            yield n, k, s, self.seed + j


class _Counting(SetFunction):
    def __init__(self, base: SetFunction):
        super().__init__(base.ground, base.k)
        self.base = base
        self.count = 0

    def __call__(self, mask: int) -> Fraction:
        self.count += 1
        return self.base(mask)


def bench_one(cell) -> BenchRow:
    from .apps.generators import gen_random_kdistant
    n, k, strategy, seed = cell
    f = gen_random_kdistant(n, k, seed, strategy)
    counted = _Counting(f)
    start = time.perf_counter()
    res = minimize(counted, k)
    seconds = time.perf_counter() - start
    best, _ = bruteforce_minimize(f)
    return BenchRow(n, k, strategy, seed, format_rational(res.min_value), best == res.min_value,
                    res.oracle_calls, res.pivots, counted.count, round(seconds, 4))


def run_bench(cfg: BenchConfig, workers: int = 1) -> list[BenchRow]:
    cells = list(cfg.cells())
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(bench_one, cells))
    return [bench_one(c) for c in cells]


def format_table(rows: Sequence[BenchRow]) -> str:
    head = f"{'n':>3} {'k':>2} {'strategy':<18} {'seed':>4} {'min':>5} {'ok':>3} {'lp':>5} {'pivots':>7} {'evals':>7} {'sec':>8}"
    lines = [head, "-" * len(head)]
    for r in rows:
        lines.append(f"{r.n:>3} {r.k:>2} {r.strategy:<18} {r.seed:>4} {r.min_value:>5} "
                     f"{'y' if r.agrees else 'N':>3} {r.oracle_calls:>5} {r.pivots:>7} "
                     f"{r.evaluations:>7} {r.seconds:>8.3f}")
    return "\n".join(lines)


def cmd_bench(args) -> int:
    if args.max_n is None or args.max_k is None:
        raise UsageError("bench needs --max-n and --max-k")
    if args.max_n < args.min_n or args.max_k < 2:
        raise UsageError("need --max-n >= --min-n and --max-k >= 2")
    cfg = BenchConfig(min_n=args.min_n, max_n=args.max_n, max_k=args.max_k, seed=args.seed,
                      per_cell=args.per_cell)
    rows = run_bench(cfg, args.workers)
    _note(format_table(rows))
    _emit({"rows": [r.__dict__ for r in rows], "all_agree": all(r.agrees for r in rows)})
    return EXIT_OK if all(r.agrees for r in rows) else EXIT_INTERNAL


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kdsm", description="k-distant submodular set functions")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("check", help="exhaustive k-distant check")
    s.add_argument("--instance", required=True)
    s.add_argument("--k", type=int)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("bounds", help="value bounds from the small sets")
    s.add_argument("--instance", required=True)
    s.add_argument("--k", type=int)
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("family", help="print the restricted constraint family")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--weights")
    s.set_defaults(func=cmd_family)

    s = sub.add_parser("maximize", help="max w^T x over P(f)")
    s.add_argument("--instance", required=True)
    s.add_argument("--weights", required=True)
    s.add_argument("--verify", action="store_true", help="check all 2^n constraints and the full LP")
    s.add_argument("--json", action="store_true", help="accepted for compatibility; output is always JSON")
    s.add_argument("--time", action="store_true", help="include wall time in the output")
    s.set_defaults(func=cmd_maximize)

    s = sub.add_parser("minimize", help="minimize an integer-valued k-distant function")
    s.add_argument("--instance", required=True)
    s.add_argument("--k", type=int)
    s.add_argument("--verify", action="store_true", help="exhaustive cross-check (n <= 24)")
    s.add_argument("--trace", action="store_true", help="binary-search progress on stderr")
    s.add_argument("--budget", type=int, help="ellipsoid iteration budget")
    s.add_argument("--json", action="store_true", help="accepted for compatibility; output is always JSON")
    s.add_argument("--time", action="store_true", help="include wall time in the output")
    s.set_defaults(func=cmd_minimize)

    s = sub.add_parser("gen", help="generate an instance file")
    s.add_argument("strategy")
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--graph", help="edge list for cut (weighted) or clique instances")
    s.add_argument("--kc", type=int, help="clique size for --graph clique instances")
    s.add_argument("--forbidden", help="forbidden sets of two sparse paving matroids")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("mi", help="weighted matroid intersection via the minimum rank oracle")
    s.add_argument("--m1", required=True)
    s.add_argument("--m2", required=True)
    s.add_argument("--weights", required=True)
    s.add_argument("--k", type=int)
    s.add_argument("--budget", type=int)
    s.set_defaults(func=cmd_mi)

    s = sub.add_parser("bench", help="seeded scaling table against brute force")
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--max-k", type=int, required=True)
    s.add_argument("--min-n", type=int, default=4)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--per-cell", type=int, default=1)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConsistencyError, CertificateError, IntersectionError) as exc:
        _note(f"internal consistency failure: {exc}")
        return EXIT_INTERNAL
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        _note(f"error: {exc}")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
