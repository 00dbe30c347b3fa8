"""Error taxonomy shared across the simulator and the harness."""


class FluttersimError(Exception):
    pass


class ScenarioError(FluttersimError):
    """Malformed or inconsistent scenario file."""


class ConfigError(FluttersimError):
    """Simulation wiring is broken (unknown destination etc.)."""


class ProtocolBugError(FluttersimError):
    """A correct process violated a protocol precondition; fails the run."""


class OracleViolationError(FluttersimError):
    """The weak-consensus oracle was asked to break its own guarantees."""


class BudgetExceededError(FluttersimError):
    """Event budget ran out before quiescence (non-terminating scenario)."""
