"""Command-line front end: run one scenario, or sweep a campaign.

Exit codes: 0 all checks Pass/NotApplicable; 1 at least one Fail;
2 malformed scenario or configuration; 3 step budget exceeded.
The FLUTTERSIM_OUT environment variable sets the default output
directory for traces and reports (default: current directory).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .adversary import BEHAVIORS
from .errors import BudgetExceededError, ConfigError, ScenarioError
from .runner import run_campaign, run_scenario
from .scenario import load_scenario
from .trace import write_trace
from .weakcon import POLICIES

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_SCENARIO = 2
EXIT_BUDGET = 3


def _out_dir() -> Path:
    out = Path(os.environ.get("FLUTTERSIM_OUT", "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, obj: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _cmd_run(args) -> int:
    scenario = load_scenario(args.scenario)
    result = run_scenario(scenario)
    trace_path = Path(args.trace) if args.trace else _out_dir() / f"{scenario.name}.trace.jsonl"
    report_path = Path(args.report) if args.report else _out_dir() / f"{scenario.name}.report.json"
    trace_path.parent.mkdir(parents=True, exist_ok=True)
    write_trace(trace_path, result.trace)
    _write_json(report_path, result.report_dict())

    print(f"scenario {scenario.name}: {'quiescent' if result.quiescent else 'cut'} "
          f"at t={result.metrics['final_time']}, {result.metrics['events']} events")
    for report in result.reports:
        line = f"  [{report.verdict}] {report.prop}"
        if report.detail:
            line += f": {report.detail}"
        print(line)
    for row in result.metrics["per_broadcast"]:
        latency = row["latency"] if row["latency"] is not None else "n/a"
        print(f"  broadcast ({row['client']}, 0x{row['message']}) at t={row['time']}: "
              f"attempts={row['attempts']}, latency={latency}")
    print(f"  sends: {result.metrics['sends_by_kind']}, total_bits={result.metrics['total_bits']}")
    print(f"  trace: {trace_path}")
    print(f"  report: {report_path}")
    return EXIT_FAIL if result.failed else EXIT_OK


def _parse_seeds(raw: str) -> range:
    lo, sep, hi = raw.partition("..")
    if not sep:
        raise ScenarioError(f"--seeds must look like A..B, got {raw!r}")
    try:
        start, stop = int(lo), int(hi)
    except ValueError:
        raise ScenarioError(f"--seeds must be integers, got {raw!r}") from None
    if stop < start:
        raise ScenarioError(f"--seeds range {raw!r} is empty")
    return range(start, stop + 1)


def _parse_behaviors(raw: str) -> list[str]:
    if raw == "all":
        return sorted(BEHAVIORS)
    names = [b.strip() for b in raw.split(",") if b.strip()]
    for name in names:
        if name not in BEHAVIORS:
            raise ScenarioError(f"unknown behavior {name!r} (available: {sorted(BEHAVIORS)})")
    if not names:
        raise ScenarioError("--behaviors list is empty")
    return names


def _parse_policies(raw: str) -> list[str]:
    names = [p.strip() for p in raw.split(",") if p.strip()]
    for name in names:
        if name not in POLICIES:
            raise ScenarioError(f"unknown dep policy {name!r} (available: {sorted(POLICIES)})")
    if not names:
        raise ScenarioError("--policies list is empty")
    return names


def _cmd_campaign(args) -> int:
    base = load_scenario(args.scenario)
    seeds = _parse_seeds(args.seeds)
    behaviors = _parse_behaviors(args.behaviors)
    policies = _parse_policies(args.policies)
    summary = run_campaign(base, seeds, behaviors, policies, parallel=args.parallel)
    report_path = Path(args.report) if args.report else _out_dir() / f"{base.name}.campaign.json"
    _write_json(report_path, summary)

    print(f"campaign {base.name}: {summary['runs']} runs "
          f"({len(behaviors)} behaviors x {len(policies)} policies x {len(seeds)} seeds)")
    for behavior, row in summary["per_behavior"].items():
        print(f"  {behavior}: runs={row['runs']} fails={row['fails']} "
              f"max_suggest_per_instance={row['max_suggest_sends_per_instance']} "
              f"(limit {summary['suggest_limit_per_instance']})")
    print(f"  verdicts: {summary['verdicts']}")
    for failure in summary["fails"]:
        print(f"  FAIL {failure['run']}: {failure['property']} {failure['detail']}")
    print(f"  report: {report_path}")
    return EXIT_OK if summary["all_pass"] else EXIT_FAIL


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fluttersim",
        description="Simulate and check leaderless total-order broadcast scenarios.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)
    runp = sub.add_parser("run", help="run one scenario, write trace and check report")
    runp.add_argument("scenario", help="path to a scenario JSON file")
    runp.add_argument("--trace", help="trace output path (JSONL)")
    runp.add_argument("--report", help="check report output path (JSON)")
    camp = sub.add_parser("campaign", help="sweep seeds x behaviors over a base scenario")
    camp.add_argument("scenario", help="path to the base scenario JSON file")
    camp.add_argument("--seeds", required=True, help="inclusive seed range, e.g. 0..499")
    camp.add_argument("--behaviors", required=True, help="comma-separated behavior names, or 'all'")
    camp.add_argument("--policies", default="adversarial_value,adversarial_timing",
                      help="comma-separated dep policies")
    camp.add_argument("--parallel", type=int, default=1, help="worker processes")
    camp.add_argument("--report", help="summary output path (JSON)")
    args = parser.parse_args(argv)
    try:
        if args.cmd == "run":
            return _cmd_run(args)
        return _cmd_campaign(args)
    except (ScenarioError, ConfigError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCENARIO
    except BudgetExceededError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
