"""Compare the two hub capacities of the 3SAT to 1-SF-WS gadget against brute force.

Writes a JSON report with the agreement rate, false positives and false
negatives per setting.  The report depends only on the arguments.

    python3 scripts/hub_probe.py [--max-vars 3 --max-clauses 3 --trials 0 --seed 0] [-o report.json]
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from tvgroute.reductions import probe_hub_settings


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-vars", type=int, default=3)
    ap.add_argument("--max-clauses", type=int, default=3)
    ap.add_argument("--trials", type=int, default=0, help="random formulas on top of the exhaustive set")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("-o", "--output")
    args = ap.parse_args()
    report = probe_hub_settings(args.max_vars, args.max_clauses, args.trials, args.seed)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    for s in report["settings"]:
        print(f"hub {s['hub']}: {s['agreements']}/{s['total']} agree, "
              f"{s['false_positives']} false positives, {s['false_negatives']} false negatives", file=sys.stderr)


if __name__ == "__main__":
    main()
