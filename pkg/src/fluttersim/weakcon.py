"""Adversarial oracle standing in for the underlying weak consensus.

Not a protocol: the oracle sees every proposal directly and fabricates
any outcome consistent with weak consensus (weak validity, agreement,
integrity, termination). Policies pick which allowed value is decided
and when each server's decide indication lands, so campaigns quantify
over dep behaviors instead of trusting one implementation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import trace as tr
from .errors import OracleViolationError, ProtocolBugError
from .types import InstanceKey, instance_payload


def _minority_value(proposals: dict[str, bool]) -> bool:
    """The allowed value with the fewest correct proposers; ties go False."""
    trues = sum(1 for v in proposals.values() if v)
    falses = len(proposals) - trues
    if trues == 0:
        return False
    if falses == 0:
        return True
    return trues < falses


class FirstProposal:
    name = "first"

    def choose(self, order: list[tuple[str, bool]], proposals: dict[str, bool]) -> bool:
        return order[0][1]

    def delay(self, server: str, rng: random.Random, budget: int) -> int:
        return 0


class AdversarialValue(FirstProposal):
    name = "adversarial_value"

    def choose(self, order, proposals):
        return _minority_value(proposals)


class AdversarialTiming(AdversarialValue):
    """Minority value plus per-server indication delays within the budget."""

    name = "adversarial_timing"

    def __init__(self, extra_delays: dict[str, int] | None = None):
        self.extra_delays = extra_delays or {}

    def delay(self, server, rng, budget):
        if server in self.extra_delays:
            return max(0, min(self.extra_delays[server], budget))
        return rng.randint(0, budget)


POLICIES = {p.name: p for p in (FirstProposal, AdversarialValue, AdversarialTiming)}


@dataclass
class DepInstance:
    key: InstanceKey
    proposals: dict[str, bool] = field(default_factory=dict)
    order: list[tuple[str, bool]] = field(default_factory=list)
    decided: bool | None = None


class DepOracle:
    def __init__(self, sim, correct_servers: list[str], policy, budget: int, seed=None):
        self.sim = sim
        self.correct = list(correct_servers)
        self.policy = policy
        self.budget = budget
        self.seed = seed
        self.instances: dict[InstanceKey, DepInstance] = {}

    def propose(self, instance: InstanceKey, server: str, value: bool) -> None:
        if server not in self.correct:
            raise ProtocolBugError(f"dep proposal from non-correct process {server}")
        st = self.instances.get(instance)
        if st is None:
            st = self.instances[instance] = DepInstance(instance)
        if server in st.proposals:
            raise ProtocolBugError(f"{server} proposed twice to dep instance {instance!r}")
        st.proposals[server] = value
        st.order.append((server, value))
        self.sim.emit(server, tr.DEP_PROPOSE, {"instance": instance_payload(instance), "value": value})
        if len(st.proposals) == len(self.correct):
            self._decide(st)

    def _decide(self, st: DepInstance) -> None:
        value = self.policy.choose(st.order, st.proposals)
        if value not in st.proposals.values():
            raise OracleViolationError(
                f"policy chose {value} for {st.key!r} but correct proposals were {st.proposals}"
            )
        st.decided = value
        rng = random.Random(f"{self.seed}|dep|{instance_payload(st.key)}")
        now = self.sim.now
        for server in self.correct:
            d = self.policy.delay(server, rng, self.budget)
            assert 0 <= d <= self.budget
            self.sim.schedule_dep_decide(now + d, server, st.key, value)
