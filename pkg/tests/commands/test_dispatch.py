# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0
import json
from unittest.mock import patch

import pytest

from frontlab import __version__
from frontlab.commands import run
from frontlab.config import load_config
from frontlab.exceptions import NoCrossingError


@pytest.fixture(name="config")
def fixture_config(tmp_path):
    return load_config(overrides={"output_dir": str(tmp_path / "run")}, environ={})


def _read(config, name):
    return json.loads((config.output_dir / name).read_text(encoding="UTF-8"))


def _passing(config, artefacts):
    artefacts.csv("values.csv", {"x": [0.0, 1.0]})
    return {"first": True, "second": True}


def _failing(config, artefacts):
    return {"first": True, "second": False}


def _raising(config, artefacts):
    raise NoCrossingError("front left the window", diagnostics={"t": 12.5})


def test_passing_checks(config):
    with patch.dict("frontlab.commands.dispatch.RUNNERS", {"speed": _passing}):
        assert run("speed", config) == 0
    manifest = _read(config, "manifest.json")
    assert manifest["command"] == "speed"
    assert manifest["exit_status"] == 0
    assert manifest["version"] == __version__
    assert manifest["artefacts"] == ["values.csv"]
    assert manifest["config"] == config.resolved
    assert not (config.output_dir / "diagnostics.json").exists()


def test_failed_check_exits_4(config):
    with patch.dict("frontlab.commands.dispatch.RUNNERS", {"speed": _failing}):
        assert run("speed", config) == 4
    diagnostics = _read(config, "diagnostics.json")
    assert diagnostics["error"] == "InvariantViolationError"
    assert diagnostics["diagnostics"]["failed"] == ["second"]
    assert _read(config, "manifest.json")["exit_status"] == 4


def test_numerical_failure_exits_3(config):
    with patch.dict("frontlab.commands.dispatch.RUNNERS", {"evolve": _raising}):
        assert run("evolve", config) == 3
    diagnostics = _read(config, "diagnostics.json")
    assert diagnostics == {
        "error": "NoCrossingError",
        "message": "front left the window",
        "exit_code": 3,
        "diagnostics": {"t": 12.5},
    }
    assert _read(config, "manifest.json")["artefacts"] == ["diagnostics.json"]


def test_unknown_command_exits_2(config):
    assert run("plot", config) == 2
    assert "unknown command" in _read(config, "diagnostics.json")["message"]


def test_speed_run_is_reproducible(tmp_path):
    first = load_config(overrides={"output_dir": str(tmp_path / "first")}, environ={})
    second = load_config(overrides={"output_dir": str(tmp_path / "second")}, environ={})
    assert run("speed", first) == 0
    assert run("speed", second) == 0
    for name in ("speed.csv", "curve_forward.csv", "kernel.csv"):
        assert (first.output_dir / name).read_bytes() == (second.output_dir / name).read_bytes()
