"""Run the closure-cost experiment and print per-bucket means.

    python3 scripts/run_bench.py --domains 6,7 --trials 10000 --seed 1 --csv out.csv
"""
from __future__ import annotations

import argparse
import time
from collections import defaultdict
from pathlib import Path

from closurekit.bench import (
    CHECKS,
    D_BASIS,
    DG_FOLKLORE,
    SIGMA_DELTA,
    TIMED_ALGORITHMS,
    WALL_TIME,
    run_bench,
    rows_to_csv,
)

KINDS = (D_BASIS, SIGMA_DELTA, DG_FOLKLORE)


def parse_args():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--domains", default="6,7", help="comma-separated domain sizes")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--timing", type=int, default=0, metavar="SYSTEMS", help="also time the first SYSTEMS trials")
    p.add_argument("--csv", type=Path, help="write the summary rows here")
    return p.parse_args()


def main() -> None:
    args = parse_args()
    domains = [int(d) for d in args.domains.split(",")]
    start = time.perf_counter()
    rows = run_bench(domains, args.trials, args.seed, timing_systems=args.timing)
    elapsed = time.perf_counter() - start

    table = defaultdict(dict)
    for r in rows:
        if r.metric == CHECKS:
            table[(r.domain, r.closed_sets_bucket)][r.basis] = (r.mean, r.trials)
    print(f"{'domain':>6} {'bucket':>6} {'trials':>6} " + " ".join(f"{k:>17}" for k in KINDS) + "  ordered")
    for (domain, bucket), means in sorted(table.items()):
        values = [means[k][0] for k in KINDS]
        ordered = "yes" if values[0] < values[1] < values[2] else "no"
        cells = " ".join(f"{v:17.2f}" for v in values)
        print(f"{domain:>6} {bucket:>6} {means[D_BASIS][1]:>6} {cells}  {ordered}")

    timing = defaultdict(list)
    for r in rows:
        if r.metric == WALL_TIME:
            timing[r.basis].append((r.mean, r.trials))
    if timing:
        print("\nmedian microseconds per closure on the D-basis (trial-weighted mean over buckets)")
        for name in TIMED_ALGORITHMS:
            total = sum(n for _, n in timing[name])
            print(f"  {name:>22}: {sum(m * n for m, n in timing[name]) / total:8.2f}")

    print(f"\n{len(rows)} summary rows in {elapsed:.1f}s")
    if args.csv:
        args.csv.write_text(rows_to_csv(rows))
        print(f"wrote {args.csv}")


if __name__ == "__main__":
    main()
