"""Shared fixtures: bundled scenario paths and minimal scenario builders."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import pytest

SCENARIOS_DIR = Path(__file__).resolve().parents[1] / "scenarios"


def scenario_dict(**overrides: Any) -> dict[str, Any]:
    """A minimal valid flutter scenario; override fields per test."""
    base: dict[str, Any] = {
        "name": "unit",
        "kind": "flutter",
        "n": 6,
        "f": 1,
        "delta": 10,
        "drift": 0,
        "epsilon": 1,
        "network": {"strategy": "exact_delta"},
        "clients": [
            {
                "name": "c000",
                "delta_estimate": 10,
                "epsilon": 1,
                "broadcasts": [{"at": 0, "message": "6d"}],
            }
        ],
    }
    base.update(overrides)
    return base


@pytest.fixture
def write_scenario(tmp_path):
    """Write a scenario dict to a temp file and return its path."""

    def _write(doc: dict[str, Any], name: str = "scenario.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return path

    return _write
