#!/usr/bin/env python3
"""Sweep the client's delay estimate and tabulate retry behavior.

Underestimating the network delay costs extra attempts: each retry
doubles the margin. With synchronized clocks and exact delays the last
attempt is the smallest r with 2^r * estimate + epsilon > delta; the
general guarantee 2^r * estimate > delta + 2*drift is an upper bound.
"""

from __future__ import annotations

import argparse
import sys

from fluttersim import parse_scenario, run_scenario
from fluttersim.trace import APP_DELIVER


def scenario(estimate: int, delta: int, epsilon: int) -> dict:
    return {
        "name": f"backoff_e{estimate}",
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
                "delta_estimate": estimate,
                "epsilon": epsilon,
                "broadcasts": [{"at": 0, "message": "6d"}],
            }
        ],
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--delta", type=int, default=10, help="true network delay bound")
    parser.add_argument("--estimates", default="1,2,3,5,10,20", help="client delay estimates")
    parser.add_argument("--epsilon", type=int, default=1, help="bet margin")
    args = parser.parse_args(argv)

    print(f"{'estimate':>9} {'predicted':>10} {'attempts':>9} {'latency':>8} {'checks':>7}")
    bad = 0
    for raw in args.estimates.split(","):
        estimate = int(raw)
        result = run_scenario(parse_scenario(scenario(estimate, args.delta, args.epsilon)))
        predicted = (
            next(r for r in range(64) if (2**r) * estimate + args.epsilon > args.delta) + 1
        )
        row = result.metrics["per_broadcast"][0]
        delivered = bool([e for e in result.trace if e.kind == APP_DELIVER])
        ok = row["attempts"] == predicted and delivered and not result.failed
        bad += 0 if ok else 1
        print(
            f"{estimate:>9} {predicted:>10} {row['attempts']:>9} "
            f"{row['latency']!s:>8} {'ok' if ok else 'MISMATCH':>7}"
        )
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
