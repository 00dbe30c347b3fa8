#!/usr/bin/env python3
"""Sweep the delay bound in the good case and tabulate delivery latency.

With an exact-delta network, zero drift, and a truthful delay estimate,
every server should app-deliver at exactly t + 2*delta + epsilon; the
table makes the linear dependence visible.
"""

from __future__ import annotations

import argparse
import sys

from fluttersim import parse_scenario, run_scenario
from fluttersim.trace import APP_DELIVER


def good_case(delta: int, epsilon: int) -> dict:
    return {
        "name": f"sweep_d{delta}",
        "kind": "flutter",
        "n": 6,
        "f": 1,
        "delta": delta,
        "drift": 0,
        "epsilon": epsilon,
        "network": {"strategy": "exact_delta"},
        "clients": [
            {
                "name": "c000",
                "delta_estimate": delta,
                "epsilon": epsilon,
                "broadcasts": [{"at": 0, "message": "6d"}],
            }
        ],
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--deltas", default="2,5,10,20,50", help="comma-separated delay bounds")
    parser.add_argument("--epsilon", type=int, default=1, help="bet margin")
    args = parser.parse_args(argv)
    deltas = [int(d) for d in args.deltas.split(",")]

    print(f"{'delta':>6} {'expected':>9} {'observed':>9} {'spread':>7} {'checks':>7}")
    bad = 0
    for delta in deltas:
        result = run_scenario(parse_scenario(good_case(delta, args.epsilon)))
        times = [e.time for e in result.trace if e.kind == APP_DELIVER]
        expected = 2 * delta + args.epsilon
        observed = min(times) if times else None
        spread = (max(times) - min(times)) if times else None
        ok = observed == expected and spread == 0 and not result.failed
        bad += 0 if ok else 1
        print(
            f"{delta:>6} {expected:>9} {observed!s:>9} {spread!s:>7} "
            f"{'ok' if ok else 'MISMATCH':>7}"
        )
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
