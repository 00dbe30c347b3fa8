#!/usr/bin/env python3
"""Run every bundled scenario and print a one-line verdict summary each."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from fluttersim import load_scenario, run_scenario

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--scenarios", default=str(SCENARIOS), help="directory of scenario JSON files"
    )
    args = parser.parse_args(argv)

    paths = sorted(Path(args.scenarios).glob("*.json"))
    if not paths:
        print(f"no scenario files in {args.scenarios}", file=sys.stderr)
        return 2

    worst = 0
    for path in paths:
        result = run_scenario(load_scenario(path))
        verdicts = {"Pass": 0, "Fail": 0, "NotApplicable": 0}
        for report in result.reports:
            verdicts[report.verdict] += 1
        state = "quiescent" if result.quiescent else "cut"
        print(
            f"{path.stem:24} {state:9} t={result.metrics['final_time']:>5} "
            f"events={result.metrics['events']:>5}  "
            f"pass={verdicts['Pass']:>2} fail={verdicts['Fail']} na={verdicts['NotApplicable']}"
        )
        for report in result.reports:
            if report.verdict == "Fail":
                print(f"  FAIL {report.prop}: {report.detail}")
                worst = 1
    return worst


if __name__ == "__main__":
    sys.exit(main())
