"""Checkers must catch planted violations, not just bless clean runs."""

from __future__ import annotations

import copy

from fluttersim.checkers import FAIL, NA, PASS, CheckerConfig, run_all_checks
from fluttersim.runner import run_scenario
from fluttersim.scenario import parse_scenario
from fluttersim.trace import APP_DELIVER, BROADCAST, DECIDE, DELIVER, PROPOSE, TraceEvent

from conftest import scenario_dict


def two_message_doc():
    return scenario_dict(
        clients=[
            {
                "name": "c000",
                "delta_estimate": 10,
                "epsilon": 1,
                "broadcasts": [
                    {"at": 0, "message": "01"},
                    {"at": 2, "message": "02"},
                ],
            }
        ],
    )


def clean_run(doc=None):
    scenario = parse_scenario(doc or two_message_doc())
    result = run_scenario(scenario, check=False)
    cfg = CheckerConfig.from_scenario(scenario, quiescent=result.quiescent)
    return result, cfg


def by_prop(reports):
    out = {}
    for r in reports:
        out.setdefault(r.prop, []).append(r)
    return out


def verdicts_of(trace, cfg, prop):
    return by_prop(run_all_checks(trace, cfg))[prop]


def failing(trace, cfg, prop):
    bad = [r for r in verdicts_of(trace, cfg, prop) if r.verdict == FAIL]
    assert bad, f"expected a Fail for {prop}"
    return bad[0]


def test_clean_two_message_run_passes_everything():
    result, cfg = clean_run()
    reports = run_all_checks(result.trace, cfg)
    assert all(r.verdict in (PASS, NA) for r in reports)
    assert by_prop(reports)["tob-total-order"][0].verdict == PASS


def test_swapped_deliveries_fail_total_order():
    result, cfg = clean_run()
    trace = copy.deepcopy(result.trace)
    mine = [i for i, e in enumerate(trace) if e.kind == APP_DELIVER and e.process == "s000"]
    assert len(mine) == 2
    i, j = mine
    trace[i].payload, trace[j].payload = trace[j].payload, trace[i].payload
    report = failing(trace, cfg, "tob-total-order")
    assert report.witness  # concrete events, not a bare verdict


def test_duplicate_delivery_fails_no_duplication():
    result, cfg = clean_run()
    trace = copy.deepcopy(result.trace)
    ev = next(e for e in trace if e.kind == APP_DELIVER)
    trace.append(TraceEvent(ev.time + 1, ev.process, APP_DELIVER, dict(ev.payload)))
    report = failing(trace, cfg, "tob-no-duplication")
    assert report.witness


def test_unbroadcast_delivery_fails_integrity():
    result, cfg = clean_run()
    trace = copy.deepcopy(result.trace)
    trace.append(
        TraceEvent(99, "s000", APP_DELIVER, {"client": "c000", "message": "ff", "bet": 50})
    )
    failing(trace, cfg, "tob-integrity")


def test_split_decision_fails_consensus_agreement():
    result, cfg = clean_run()
    trace = copy.deepcopy(result.trace)
    ev = next(e for e in trace if e.kind == DECIDE and e.process == "s000")
    flipped = copy.deepcopy(ev)
    flipped.process = "s001"
    flipped.payload["value"] = not flipped.payload["value"]
    # replace s001's own decide for that instance with the flipped one
    trace = [
        e
        for e in trace
        if not (
            e.kind == DECIDE
            and e.process == "s001"
            and e.payload["instance"] == ev.payload["instance"]
        )
    ]
    trace.append(flipped)
    report = failing(trace, cfg, "consensus-agreement")
    assert report.witness


def test_double_decide_fails_consensus_integrity():
    result, cfg = clean_run()
    trace = copy.deepcopy(result.trace)
    ev = next(e for e in trace if e.kind == DECIDE)
    trace.append(copy.deepcopy(ev))
    failing(trace, cfg, "consensus-integrity")


def test_unproposed_value_fails_representative_validity():
    result, cfg = clean_run()
    trace = copy.deepcopy(result.trace)
    # all correct proposals said True for the first instance; flip every
    # decide for it to False
    target = next(e.payload["instance"] for e in trace if e.kind == PROPOSE and e.payload["value"] is True)
    for e in trace:
        if e.kind == DECIDE and e.payload["instance"] == target:
            e.payload["value"] = False
    failing(trace, cfg, "consensus-representative-validity")


def test_missing_decide_fails_termination_when_quiescent():
    result, cfg = clean_run()
    trace = [
        e
        for e in copy.deepcopy(result.trace)
        if not (e.kind == DECIDE and e.process == "s000")
    ]
    failing(trace, cfg, "consensus-termination")


def test_truncated_run_reports_liveness_not_applicable():
    doc = two_message_doc()
    doc["until"] = 15  # proposals happen at t=10, decisions never do
    scenario = parse_scenario(doc)
    result = run_scenario(scenario, check=False)
    assert not result.quiescent
    cfg = CheckerConfig.from_scenario(scenario, quiescent=result.quiescent)
    reports = by_prop(run_all_checks(result.trace, cfg))
    assert all(r.verdict == NA for r in reports["tob-validity"])
    assert all(r.verdict == NA for r in reports["consensus-termination"])
    # safety still judged on the prefix
    assert all(r.verdict == PASS for r in reports["tob-total-order"])
    assert all(r.verdict == PASS for r in reports["net-fifo"])


def test_starved_server_fails_candidate_completeness():
    result, cfg = clean_run()
    # drop every Message/Observe delivery at s001: it can never spot the
    # tuples the others decided True
    trace = [
        e
        for e in copy.deepcopy(result.trace)
        if not (
            e.kind == DELIVER
            and e.process == "s001"
            and e.payload["msg"]["kind"] in ("Message", "Observe")
        )
    ]
    failing(trace, cfg, "server-candidate-completeness")


def test_held_back_delivery_fails_appdeliver_match():
    result, cfg = clean_run()
    trace = copy.deepcopy(result.trace)
    dropped = False
    out = []
    for e in trace:
        if not dropped and e.kind == APP_DELIVER and e.process == "s002":
            dropped = True  # s002 skips its first delivery
            continue
        out.append(e)
    # the replay still orders that tuple at s002, so the emitted deliveries
    # no longer match what the state machine mandates
    failing(out, cfg, "server-order-matches-appdeliver")
    failing(out, cfg, "tob-total-order")


def test_flipped_local_decide_fails_order_agreement():
    result, cfg = clean_run()
    trace = copy.deepcopy(result.trace)
    # s002's replay sees a False decide for its first tuple and skips it;
    # everyone else orders that tuple first
    first = next(
        e for e in trace if e.kind == DECIDE and e.process == "s002" and e.payload["value"] is True
    )
    first.payload["value"] = False
    failing(trace, cfg, "server-order-agreement")


def test_late_delivery_fails_delay_bounds():
    result, cfg = clean_run()
    trace = copy.deepcopy(result.trace)
    ev = next(e for e in trace if e.kind == DELIVER)
    ev.time = ev.time + 1000
    reports = by_prop(run_all_checks(sorted(trace, key=lambda e: e.time), cfg))
    hit = [r.verdict for r in reports["net-delay-bounds"] + reports["net-fifo"]]
    assert FAIL in hit


def test_reordered_link_fails_fifo():
    result, cfg = clean_run()
    trace = copy.deepcopy(result.trace)
    # swap the payloads of two deliveries on the same link
    link_events = [
        e
        for e in trace
        if e.kind == DELIVER and e.process == "s000" and e.payload["src"] == "c000"
    ]
    assert len(link_events) >= 2
    a, b = link_events[0], link_events[1]
    a.payload, b.payload = b.payload, a.payload
    failing(trace, cfg, "net-fifo")


def test_fail_reports_carry_witnesses():
    result, cfg = clean_run()
    trace = copy.deepcopy(result.trace)
    ev = next(e for e in trace if e.kind == APP_DELIVER)
    trace.append(TraceEvent(ev.time + 1, ev.process, APP_DELIVER, dict(ev.payload)))
    for r in run_all_checks(trace, cfg):
        if r.verdict == FAIL:
            assert r.witness, f"{r.prop} failed without a witness"


def test_report_dict_shape():
    result, cfg = clean_run()
    reports = run_all_checks(result.trace, cfg)
    d = reports[0].to_dict()
    assert set(d) >= {"property", "verdict"}
