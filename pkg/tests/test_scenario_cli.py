"""Scenario validation rules and the command-line surface."""

from __future__ import annotations

import json

import pytest

import fluttersim.cli as cli
from fluttersim.checkers import CheckReport
from fluttersim.errors import ScenarioError
from fluttersim.scenario import parse_scenario

from conftest import SCENARIOS_DIR, scenario_dict


def reject(doc, fragment):
    with pytest.raises(ScenarioError, match=fragment):
        parse_scenario(doc)


def test_resilience_bound_enforced():
    reject(scenario_dict(n=5, f=1), r"n=5 violates n >= 5f\+1")
    parse_scenario(scenario_dict(n=6, f=1))  # boundary is fine
    parse_scenario(scenario_dict(n=11, f=2, clients=[]))


def test_unknown_top_level_key_rejected():
    reject(scenario_dict(surprise=1), "surprise")


def test_delta_and_drift_bounds():
    reject(scenario_dict(delta=0), "delta")
    reject(scenario_dict(drift=-1), "drift")


def test_seeded_strategy_requires_seed():
    reject(scenario_dict(network={"strategy": "seeded_random"}), "seed")


def test_scripted_delays_only_for_scripted_strategy():
    reject(
        scenario_dict(network={"strategy": "exact_delta", "delays": {"s000->s001": [1]}}),
        "delays",
    )


def test_scripted_delay_endpoints_must_exist():
    reject(
        scenario_dict(network={"strategy": "scripted", "delays": {"s000->ghost": [1]}}),
        "ghost",
    )


def test_clock_offset_bounded_by_drift():
    reject(scenario_dict(drift=1, clock_offsets={"s000": 2}), "drift")
    parse_scenario(scenario_dict(drift=2, clock_offsets={"s000": -2}))


def test_clock_offset_for_unknown_process():
    reject(scenario_dict(clock_offsets={"zzz": 0}), "zzz")


def test_behavior_role_must_match_slot():
    reject(
        scenario_dict(servers={"s005": {"behavior": "partial_disseminator"}}),
        "not a server behavior",
    )
    reject(
        scenario_dict(
            clients=[{"name": "c000", "behavior": "mute", "params": {}}],
        ),
        "not a client behavior",
    )


def test_unknown_behavior_rejected():
    reject(scenario_dict(servers={"s005": {"behavior": "gremlin"}}), "gremlin")


def test_client_name_collisions_rejected():
    reject(
        scenario_dict(
            clients=[
                {"name": "c000", "delta_estimate": 10, "epsilon": 1, "broadcasts": []},
                {"name": "c000", "delta_estimate": 10, "epsilon": 1, "broadcasts": []},
            ]
        ),
        "c000",
    )
    reject(
        scenario_dict(
            clients=[{"name": "s000", "delta_estimate": 10, "epsilon": 1, "broadcasts": []}]
        ),
        "s000",
    )


def test_duplicate_broadcast_message_rejected():
    reject(
        scenario_dict(
            clients=[
                {
                    "name": "c000",
                    "delta_estimate": 10,
                    "epsilon": 1,
                    "broadcasts": [
                        {"at": 0, "message": "6d"},
                        {"at": 5, "message": "6d"},
                    ],
                }
            ]
        ),
        "6d",
    )


def test_behavior_client_cannot_carry_broadcasts():
    reject(
        scenario_dict(
            clients=[
                {
                    "name": "c000",
                    "behavior": "partial_disseminator",
                    "broadcasts": [{"at": 0, "message": "6d"}],
                }
            ]
        ),
        "broadcast",
    )


def test_unknown_dep_policy_rejected():
    reject(scenario_dict(dep={"policy": "chaotic"}), "chaotic")


def test_blink_script_only_for_blink_kind():
    reject(
        scenario_dict(blink_script=[{"at": 0, "server": "s000", "instance": "i0", "value": True}]),
        "blink",
    )


def test_blink_duplicate_proposal_rejected():
    doc = scenario_dict(
        kind="blink",
        clients=[],
        blink_script=[
            {"at": 0, "server": "s000", "instance": "i0", "value": True},
            {"at": 1, "server": "s000", "instance": "i0", "value": False},
        ],
    )
    reject(doc, "i0")


def test_periodic_beat_requires_cutoff():
    reject(scenario_dict(periodic_beat=5), "until")
    parse_scenario(scenario_dict(periodic_beat=5, until=100))


def test_bad_json_file_is_scenario_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{nope")
    from fluttersim.scenario import load_scenario

    with pytest.raises(ScenarioError):
        load_scenario(path)


# --- CLI ---


def test_cli_run_writes_trace_and_report(tmp_path, monkeypatch):
    monkeypatch.setenv("FLUTTERSIM_OUT", str(tmp_path))
    code = cli.main(["run", str(SCENARIOS_DIR / "goodcase.json")])
    assert code == 0
    assert (tmp_path / "goodcase.trace.jsonl").exists()
    report = json.loads((tmp_path / "goodcase.report.json").read_text())
    verdicts = {r["verdict"] for r in report["reports"]}
    assert verdicts <= {"Pass", "NotApplicable"}


def test_cli_run_explicit_paths(tmp_path):
    trace = tmp_path / "t.jsonl"
    report = tmp_path / "r.json"
    code = cli.main(
        [
            "run",
            str(SCENARIOS_DIR / "blink_fast.json"),
            "--trace",
            str(trace),
            "--report",
            str(report),
        ]
    )
    assert code == 0
    assert trace.exists() and report.exists()


def test_cli_rejects_malformed_scenario(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(scenario_dict(n=5, f=1)))
    code = cli.main(["run", str(bad)])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_cli_budget_exhaustion_exit_code(tmp_path, write_scenario):
    doc = scenario_dict(step_budget=10)
    path = write_scenario(doc)
    code = cli.main(["run", str(path)])
    assert code == 3


def test_cli_fail_report_exit_code(tmp_path, monkeypatch):
    # no built-in behavior can break safety; fake one failing report to pin
    # the exit-code contract
    real = cli.run_scenario

    def rigged(scenario, check=True):
        result = real(scenario, check=check)
        result.reports.append(CheckReport("tob-total-order", "Fail", "planted", [{"k": 1}]))
        return result

    monkeypatch.setattr(cli, "run_scenario", rigged)
    monkeypatch.setenv("FLUTTERSIM_OUT", str(tmp_path))
    code = cli.main(["run", str(SCENARIOS_DIR / "goodcase.json")])
    assert code == 1


def test_cli_campaign_small_sweep(tmp_path, monkeypatch):
    monkeypatch.setenv("FLUTTERSIM_OUT", str(tmp_path))
    code = cli.main(
        [
            "campaign",
            str(SCENARIOS_DIR / "campaign_base.json"),
            "--seeds",
            "0..2",
            "--behaviors",
            "mute,time_liar",
        ]
    )
    assert code == 0
    summary = json.loads((tmp_path / "campaign_base.campaign.json").read_text())
    assert summary["runs"] == 12  # 2 behaviors x 2 default policies x 3 seeds
    assert summary["all_pass"] is True


def test_cli_campaign_rejects_bad_seed_range():
    code = cli.main(
        [
            "campaign",
            str(SCENARIOS_DIR / "campaign_base.json"),
            "--seeds",
            "5..1",
            "--behaviors",
            "mute",
        ]
    )
    assert code == 2


def test_cli_campaign_rejects_unknown_behavior():
    code = cli.main(
        [
            "campaign",
            str(SCENARIOS_DIR / "campaign_base.json"),
            "--seeds",
            "0..0",
            "--behaviors",
            "gremlin",
        ]
    )
    assert code == 2
