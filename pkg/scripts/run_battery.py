#!/usr/bin/env python3
"""Run the curated symbol battery and the randomized agreement sweep.

Writes one report directory per curated case, then prints a summary
table of classifier verdicts against the brute-force oracle trends for
the seeded random battery.

Usage:
    python scripts/run_battery.py [--out DIR] [--seed N] [--count N]
"""

import argparse
import sys
from pathlib import Path

from blochlab import RadialGrid, SpaceSpec, classify_bounded_into_bloch
from blochlab.battery import CURATED, random_pairs
from blochlab.cli import emit, parse_config, run
from blochlab.oracle import TREND_STABLE, lower_bound_trend


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="blochlab-out/battery")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--count", type=int, default=20)
    args = parser.parse_args()

    out = Path(args.out)
    print("== curated cases ==")
    failures = 0
    for name, entry in CURATED.items():
        config = parse_config(dict(entry["config"]))
        report = run(config)
        emit(report, out / name, ("json", "csv"))
        for task, task_entry in report.results["tasks"].items():
            if not isinstance(task_entry, dict) or "overall" not in task_entry:
                continue
            got = task_entry["overall"]
            expected = entry.get("expect", {}).get(task)
            mark = ""
            if expected is not None:
                mark = " ok" if got == expected else f"  << expected {expected}"
                failures += got != expected
            print(f"  {name:22s} {task:22s} {'holds' if got else 'fails/inconclusive'}{mark}")

    print("== randomized agreement sweep ==")
    space = SpaceSpec.bergman(2)
    mesh = RadialGrid(12, 128, 8)
    decided = agree = 0
    for label, sym in random_pairs(seed=args.seed, count=args.count):
        outcome = classify_bounded_into_bloch(sym, space, mesh)
        trend = lower_bound_trend(sym, space, mesh)
        if not outcome.decided or trend.classification == "ambiguous":
            print(f"  {label:24s} undecided")
            continue
        decided += 1
        ok = outcome.overall == (trend.classification == TREND_STABLE)
        agree += ok
        state = "bounded" if outcome.overall else "unbounded"
        print(f"  {label:24s} {state:10s} oracle={trend.classification:9s} {'ok' if ok else 'DISAGREE'}")
    print(f"agreement: {agree}/{decided} decided cases")
    return 1 if (failures or agree != decided) else 0


if __name__ == "__main__":
    sys.exit(main())
