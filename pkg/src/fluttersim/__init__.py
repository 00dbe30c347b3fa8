"""Event-driven simulation and checking of leaderless total-order broadcast."""

from .checkers import CheckerConfig, CheckReport, run_all_checks
from .runner import RunResult, build_simulation, run_campaign, run_scenario
from .scenario import Scenario, load_scenario, parse_scenario
from .simnet import ClockModel, ExactDelta, Scripted, SeededRandom, Simulator
from .types import BroadcastTuple, compare_tuples

__all__ = [
    "BroadcastTuple",
    "CheckReport",
    "CheckerConfig",
    "ClockModel",
    "ExactDelta",
    "RunResult",
    "Scenario",
    "Scripted",
    "SeededRandom",
    "Simulator",
    "build_simulation",
    "compare_tuples",
    "load_scenario",
    "parse_scenario",
    "run_all_checks",
    "run_campaign",
    "run_scenario",
]
