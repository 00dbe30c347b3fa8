"""Build simulations from scenarios, run them, check them, measure them.

Campaign runs sweep seeds x behaviors x dep policies over one base
scenario; every run gets the full checker suite, so each behavior is a
falsification attempt rather than a fixture with blessed output.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from . import trace as tr
from .adversary import BEHAVIORS, BehaviorSetup
from .blink import BlinkNode
from .checkers import FAIL, CheckerConfig, CheckReport, run_all_checks
from .client import FlutterClient
from .errors import BudgetExceededError
from .scenario import ClientSpec, Scenario, ServerFault
from .server import FlutterServer
from .simnet import ClockModel, ExactDelta, Scripted, SeededRandom, Simulator
from .weakcon import AdversarialTiming, AdversarialValue, DepOracle, FirstProposal

_WIRE_OVERHEAD_BYTES = 8  # headers, ids, timestamps: the O(1) part of each message


def _strategy(scenario: Scenario):
    net = scenario.network
    if net.strategy == "exact_delta":
        return ExactDelta(scenario.delta)
    if net.strategy == "seeded_random":
        return SeededRandom(scenario.delta, net.seed)
    return Scripted(scenario.delta, net.delays)


def _dep_policy(scenario: Scenario):
    if scenario.dep.policy == "first":
        return FirstProposal()
    if scenario.dep.policy == "adversarial_value":
        return AdversarialValue()
    return AdversarialTiming(scenario.dep.extra_delays)


def build_simulation(scenario: Scenario) -> Simulator:
    sim = Simulator(
        _strategy(scenario),
        ClockModel(dict(scenario.clock_offsets)),
        step_budget=scenario.step_budget,
    )
    budget = scenario.dep.latency_budget
    if budget is None:
        budget = 3 * scenario.delta
    oracle = DepOracle(
        sim,
        scenario.correct_servers,
        _dep_policy(scenario),
        budget,
        seed=scenario.network.seed,
    )
    for name in scenario.servers:
        fault = scenario.server_faults.get(name)
        if fault is not None:
            setup = BehaviorSetup(scenario.n, scenario.f, scenario.delta, scenario.network.seed, fault.params)
            handler = BEHAVIORS[fault.behavior](name, setup)
        elif scenario.kind == "flutter":
            handler = FlutterServer(name, scenario.n, scenario.f, oracle, scenario.periodic_beat)
        else:
            handler = BlinkNode(name, scenario.f, oracle)
        sim.add_process(name, "server", handler)
    for spec in scenario.clients:
        if spec.behavior is not None:
            setup = BehaviorSetup(scenario.n, scenario.f, scenario.delta, scenario.network.seed, spec.params)
            handler = BEHAVIORS[spec.behavior](spec.name, setup)
        else:
            handler = FlutterClient(spec.name, scenario.f, spec.broadcasts, spec.crash_time)
        sim.add_process(spec.name, "client", handler)
    for entry in scenario.blink_script:
        sim.schedule_global(entry.server, entry.at, f"propose@{entry.instance}:{1 if entry.value else 0}")
    return sim


@dataclass
class RunResult:
    scenario: Scenario
    trace: list[tr.TraceEvent]
    quiescent: bool
    reports: list[CheckReport]
    metrics: dict

    @property
    def failed(self) -> list[CheckReport]:
        return [r for r in self.reports if r.verdict == FAIL]

    def report_dict(self) -> dict:
        return {
            "scenario": self.scenario.name,
            "quiescent": self.quiescent,
            "reports": [r.to_dict() for r in self.reports],
            "metrics": self.metrics,
        }


def run_scenario(scenario: Scenario, check: bool = True) -> RunResult:
    sim = build_simulation(scenario)
    quiescent = sim.run(until=scenario.until)
    cfg = CheckerConfig.from_scenario(scenario, quiescent)
    reports = run_all_checks(sim.trace, cfg) if check else []
    metrics = compute_metrics(sim.trace, scenario, quiescent)
    return RunResult(scenario, sim.trace, quiescent, reports, metrics)


def _message_bits(msg: dict) -> int:
    payload = len(msg.get("message", "")) // 2  # Time/Suggest carry no payload bytes
    return 8 * (_WIRE_OVERHEAD_BYTES + payload)


def compute_metrics(trace: list[tr.TraceEvent], scenario: Scenario, quiescent: bool) -> dict:
    sends_by_kind: dict[str, int] = {}
    total_bits = 0
    suggest_per_instance: dict[object, int] = {}
    correct = set(scenario.correct_servers)
    broadcasts: list[tuple[str, str, int]] = []
    app_delivers: dict[tuple[str, str], dict[str, int]] = {}
    attempts: dict[tuple[str, str], set[int]] = {}
    instances: set[object] = set()

    for event in trace:
        if event.kind == tr.SEND:
            msg = event.payload["msg"]
            kind = msg["kind"]
            sends_by_kind[kind] = sends_by_kind.get(kind, 0) + 1
            total_bits += _message_bits(msg)
            if kind == "Suggest" and event.process in correct:
                key = tr.instance_key_from_payload(msg["instance"])
                suggest_per_instance[key] = suggest_per_instance.get(key, 0) + 1
            elif kind == "Message":
                attempts.setdefault((event.process, msg["message"]), set()).add(msg["bet"])
        elif event.kind == tr.BROADCAST:
            broadcasts.append((event.process, event.payload["message"], event.time))
        elif event.kind == tr.APP_DELIVER:
            key = (event.payload["client"], event.payload["message"])
            app_delivers.setdefault(key, {})[event.process] = event.time
        elif event.kind == tr.PROPOSE:
            instances.add(tr.instance_key_from_payload(event.payload["instance"]))

    per_broadcast = []
    for client, message, at in broadcasts:
        deliveries = app_delivers.get((client, message), {})
        done = all(s in deliveries for s in correct)
        per_broadcast.append(
            {
                "client": client,
                "message": message,
                "time": at,
                "attempts": len(attempts.get((client, message), set())),
                "delivered_everywhere": done,
                "latency": max(deliveries.values()) - at if done and deliveries else None,
            }
        )

    return {
        "final_time": trace[-1].time if trace else 0,
        "quiescent": quiescent,
        "events": len(trace),
        "sends_by_kind": dict(sorted(sends_by_kind.items())),
        "total_bits": total_bits,
        "consensus_instances": len(instances),
        "max_suggest_sends_per_instance": max(suggest_per_instance.values(), default=0),
        "per_broadcast": per_broadcast,
    }


# ---------------------------------------------------------------- campaigns

_CAMPAIGN_CLIENT = "c900"


def campaign_variant(base: Scenario, behavior: str, policy: str, seed: int) -> Scenario:
    """One campaign run: seeded delays, chosen dep policy, one injected fault."""
    cls = BEHAVIORS[behavior]
    network = dataclasses.replace(base.network, strategy="seeded_random", seed=seed, delays={})
    dep = dataclasses.replace(base.dep, policy=policy)
    server_faults = dict(base.server_faults)
    clients = list(base.clients)
    if cls.role == "server":
        victim = base.servers[-1]
        server_faults[victim] = ServerFault(behavior, {})
    else:
        clients.append(ClientSpec(name=_CAMPAIGN_CLIENT, delta_estimate=base.delta, epsilon=base.epsilon, behavior=behavior))
    return dataclasses.replace(
        base,
        name=f"{base.name}+{behavior}+{policy}+s{seed}",
        network=network,
        dep=dep,
        server_faults=server_faults,
        clients=clients,
    )


def _run_one(args: tuple[Scenario, str, str, int]) -> dict:
    base, behavior, policy, seed = args
    variant = campaign_variant(base, behavior, policy, seed)
    try:
        result = run_scenario(variant)
    except BudgetExceededError as e:
        return {
            "run": variant.name,
            "behavior": behavior,
            "policy": policy,
            "seed": seed,
            "fails": [{"property": "budget", "detail": str(e)}],
            "verdicts": {},
            "max_suggest": 0,
        }
    verdicts: dict[str, int] = {}
    for report in result.reports:
        verdicts[report.verdict] = verdicts.get(report.verdict, 0) + 1
    return {
        "run": variant.name,
        "behavior": behavior,
        "policy": policy,
        "seed": seed,
        "fails": [{"property": r.prop, "detail": r.detail} for r in result.failed],
        "verdicts": verdicts,
        "max_suggest": result.metrics["max_suggest_sends_per_instance"],
    }


def run_campaign(
    base: Scenario,
    seeds: range,
    behaviors: list[str],
    policies: list[str] | None = None,
    parallel: int = 1,
) -> dict:
    policies = policies or ["adversarial_value", "adversarial_timing"]
    jobs = [
        (base, behavior, policy, seed)
        for behavior in behaviors
        for policy in policies
        for seed in seeds
    ]
    if parallel > 1:
        import multiprocessing

        with multiprocessing.Pool(parallel) as pool:
            rows = pool.map(_run_one, jobs, chunksize=32)
    else:
        rows = [_run_one(job) for job in jobs]

    verdicts: dict[str, int] = {}
    fails: list[dict] = []
    per_behavior: dict[str, dict] = {}
    limit = base.n * base.n
    for row in rows:
        for verdict, count in row["verdicts"].items():
            verdicts[verdict] = verdicts.get(verdict, 0) + count
        slot = per_behavior.setdefault(
            row["behavior"], {"runs": 0, "fails": 0, "max_suggest_sends_per_instance": 0}
        )
        slot["runs"] += 1
        slot["fails"] += len(row["fails"])
        slot["max_suggest_sends_per_instance"] = max(slot["max_suggest_sends_per_instance"], row["max_suggest"])
        for failure in row["fails"]:
            fails.append({"run": row["run"], **failure})
    for slot in per_behavior.values():
        slot["complexity_ok"] = slot["max_suggest_sends_per_instance"] <= limit
    summary = {
        "base": base.name,
        "seeds": [seeds.start, seeds.stop - 1] if len(seeds) else [],
        "behaviors": behaviors,
        "policies": policies,
        "runs": len(rows),
        "verdicts": dict(sorted(verdicts.items())),
        "fail_count": len(fails),
        "fails": fails[:50],
        "per_behavior": per_behavior,
        "suggest_limit_per_instance": limit,
        "all_pass": not fails and all(s["complexity_ok"] for s in per_behavior.values()),
    }
    return summary
