# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0
import json
import os
import sys
from unittest.mock import patch

import pytest

from frontlab.__main__ import build_parser, main, overrides_from_args
from frontlab.dispersion import c1, c_star_left
from frontlab.kernels import Uniform, build_kernel
from frontlab.nonlinearities import logistic


def test_overrides_from_flags():
    args = build_parser().parse_args(
        ["profile", "--c", "1.1", "--grid", "0.05,20,10", "--no-extend", "--workers", "2", "--eps-schedule", "0.1,0"]
    )
    assert args.command == "profile"
    assert overrides_from_args(args) == {
        "profile": {"c": 1.1, "grid": {"h": 0.05, "r": 20.0, "R": 10.0}, "extend": False, "schedule": [0.1, 0.0]},
        "workers": 2,
    }


def test_absent_flags_leave_the_configuration_alone():
    args = build_parser().parse_args(["speed"])
    assert overrides_from_args(args) == {}
    assert args.config is None
    assert args.verbose == 0


def test_kernel_step_flag():
    args = build_parser().parse_args(["check-limit", "--kernel-h", "0.1", "--eps", "0.2,0.1", "-vv"])
    assert overrides_from_args(args) == {"kernel": {"h": 0.1}, "check-limit": {"eps": [0.2, 0.1]}}
    assert args.verbose == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["profile", "--grid", "0.05,20"],
        ["evolve", "--grid", "a,b,c"],
        ["check-supersolution", "--window", "1,2,3"],
        ["demo-nonunique", "--levels", "4,8.5"],
        ["speed", "--orientation", "up"],
        [],
    ],
)
def test_invalid_flags(argv):
    with pytest.raises(SystemExit) as info:
        build_parser().parse_args(argv)
    assert info.value.code == 2


def test_malformed_config_exits_2(tmp_path):
    path = tmp_path / "config.yml"
    path.write_text("kernel:\n  family: uniform\n  params: {a: -1.0, wdith: 1.0}\n", encoding="UTF-8")
    with patch.object(sys, "argv", ["frontlab", "speed", "--config", str(path)]):
        assert main() == 2


def test_speed_from_the_command_line(tmp_path):
    out = tmp_path / "env-out"
    with patch.dict(os.environ, {"FRONTLAB_OUT": str(out)}):
        with patch.object(sys, "argv", ["frontlab", "speed", "--output-dir", str(tmp_path / "flag-out")]):
            assert main() == 0
    summary = json.loads((out / "speed.json").read_text(encoding="UTF-8"))
    kernel = build_kernel(Uniform(-1.0, 1.0), 0.02)
    assert summary["c1"] == pytest.approx(c1(kernel, logistic()).speed, abs=1e-12)
    assert summary["c_star"] == pytest.approx(c_star_left(kernel, logistic()).speed, abs=1e-12)
    manifest = json.loads((out / "manifest.json").read_text(encoding="UTF-8"))
    assert manifest["command"] == "speed"
    assert manifest["config"]["output_dir"] == str(out)
    assert not (tmp_path / "flag-out").exists()


def test_failed_check_exit_status(tmp_path):
    argv = ["check-limit", "--output-dir", str(tmp_path), "--kernel-h", "0.1"]
    failing = {"check-limit": lambda config, artefacts: {"decreasing": False}}
    with patch.dict("frontlab.commands.dispatch.RUNNERS", failing):
        assert main(argv) == 4
    assert json.loads((tmp_path / "manifest.json").read_text(encoding="UTF-8"))["exit_status"] == 4
