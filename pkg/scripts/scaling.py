"""Scaling sweep: minimize on generated instances and print the (n, k) table.

    python scripts/scaling.py --max-n 10 --max-k 5 --per-cell 2 --workers 4
"""

import argparse
import json
from collections import defaultdict
from dataclasses import asdict

from kdsm.cli import BenchConfig, format_table, run_bench


def summarize(rows):
    cells = defaultdict(list)
    for r in rows:
        cells[r.n, r.k].append(r)
    out = [f"{'n':>3} {'k':>2} {'runs':>5} {'mean sec':>9} {'max sec':>8} {'mean lp':>8} {'agree':>6}"]
    for (n, k), rs in sorted(cells.items()):
        secs = [r.seconds for r in rs]
        out.append(f"{n:>3} {k:>2} {len(rs):>5} {sum(secs) / len(rs):>9.3f} {max(secs):>8.3f} "
                   f"{sum(r.oracle_calls for r in rs) / len(rs):>8.1f} {all(r.agrees for r in rs)!s:>6}")
    return "\n".join(out)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--min-n", type=int, default=4)
    ap.add_argument("--max-n", type=int, default=9)
    ap.add_argument("--max-k", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--per-cell", type=int, default=1)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", help="write the raw rows as JSON here")
    args = ap.parse_args()
    cfg = BenchConfig(args.min_n, args.max_n, args.max_k, args.seed, args.per_cell)
    rows = run_bench(cfg, args.workers)
    print(format_table(rows))
    print()
    print(summarize(rows))
    if args.out:
        with open(args.out, "w") as fh:
            json.dump([asdict(r) for r in rows], fh, indent=1)


if __name__ == "__main__":
    main()
