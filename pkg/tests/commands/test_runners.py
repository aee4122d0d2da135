# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0
import json

import numpy as np
import pytest
from pytest import approx

from frontlab.commands import (
    run,
    run_check_limit,
    run_check_supersolution,
    run_evolve,
    run_profile,
    run_speed,
    write_summary,
)
from frontlab.config import Artefacts, load_config
from frontlab.dispersion import c1, c_star_left
from frontlab.exceptions import InvalidValueError
from frontlab.kernels import Uniform, build_kernel
from frontlab.nonlinearities import logistic


def _config(tmp_path, overrides=None):
    overrides = dict(overrides or {}, output_dir=str(tmp_path / "out"))
    return load_config(overrides=overrides, environ={})


def _row(path):
    header, values = path.read_text(encoding="UTF-8").splitlines()
    return dict(zip(header.split(","), (float(value) for value in values.split(","))))


def _json(path):
    return json.loads(path.read_text(encoding="UTF-8"))


@pytest.fixture(name="artefacts")
def fixture_artefacts(tmp_path):
    return Artefacts(tmp_path / "out")


def test_write_summary(artefacts):
    write_summary(artefacts, "summary", {"speed": 0.5, "attained": True, "missing": None, "name": "uniform", "n": 3})
    assert _json(artefacts.directory / "summary.json")["missing"] is None
    assert _row(artefacts.directory / "summary.csv") == {"attained": 1.0, "n": 3.0, "speed": 0.5}
    assert artefacts.names == ["summary.json", "summary.csv"]


def test_speed_of_uniform_kernel(tmp_path, artefacts):
    checks = run_speed(_config(tmp_path), artefacts)
    assert checks == {"finite_speed": True}
    summary = _json(artefacts.directory / "speed.json")
    assert summary["c1"] == approx(c1(build_kernel(Uniform(-1.0, 1.0), 0.02), logistic()).speed, abs=1e-12)
    assert summary["c1"] == approx(0.9053, abs=3e-4)
    assert summary["c_star"] == approx(summary["c1"], abs=1e-10)
    assert summary["attained"]
    assert summary["curve_csv_path"] == "curve_forward.csv"
    assert summary["kernel_family"] == "uniform"
    assert summary["jensen_bound"] <= summary["c1"]
    row = _row(artefacts.directory / "speed.csv")
    assert row["c1"] == summary["c1"]
    assert row["lambda_star"] == summary["lambda_star"]
    curve = (artefacts.directory / "curve_forward.csv").read_text(encoding="UTF-8").splitlines()
    assert curve[0] == "lambda,c_of_lambda"
    assert (artefacts.directory / "kernel.csv").exists()


def test_speed_in_both_orientations(tmp_path, artefacts):
    overrides = {
        "kernel": {"family": "uniform", "params": {"a": 1.0, "b": 3.0}, "h": 0.01},
        "nonlinearity": {"family": "logistic", "params": {"r": 0.5}},
        "speed": {"orientation": "both"},
    }
    config = _config(tmp_path, overrides)
    checks = run_speed(config, artefacts)
    assert checks == {"finite_speed": True, "finite_speed_left": True}
    summary = _json(artefacts.directory / "speed.json")
    assert summary["c1"] == approx(-0.346, abs=1e-3)
    assert summary["c1_left"] > 0.0
    assert summary["c_star"] == summary["c1_left"]
    assert summary["curve_csv_path_left"] == "curve_reflected.csv"


def test_speed_summary_reports_leftward_c_star(tmp_path, artefacts):
    overrides = {
        "kernel": {"family": "uniform", "params": {"a": 1.0, "b": 3.0}, "h": 0.01},
        "nonlinearity": {"family": "logistic", "params": {"r": 0.5}},
    }
    run_speed(_config(tmp_path, overrides), artefacts)
    summary = _json(artefacts.directory / "speed.json")
    shifted = build_kernel(Uniform(1.0, 3.0), 0.01)
    assert summary["c1"] == approx(-0.346, abs=1e-3)
    assert summary["c_star"] == approx(c_star_left(shifted, logistic(0.5)).speed, abs=1e-12)
    assert summary["c_star"] > 0.0
    assert "c1_left" not in summary


def test_check_limit(tmp_path, artefacts):
    checks = run_check_limit(_config(tmp_path, {"kernel": {"family": "uniform", "h": 0.1}}), artefacts)
    assert checks == {"decreasing": True}
    table = np.loadtxt(artefacts.directory / "limit_ladder.csv", delimiter=",", skiprows=1)
    assert table[:, 0] == approx([0.4, 0.2, 0.1, 0.05])
    assert table[:, 3] == approx([8, 4, 2, 1])
    assert _row(artefacts.directory / "check_limit.csv")["decreasing"] == 1.0


@pytest.mark.parametrize(
    "block",
    [
        {"mode": "kpp", "lam": 1.0},
        {"mode": "joined", "lam": 1.0, "delta": 0.5, "N": 4.0, "window": [-12.0, 12.0]},
    ],
)
def test_check_supersolution(tmp_path, artefacts, block):
    config = _config(tmp_path, {"kernel": {"family": "uniform", "h": 0.01}, "check-supersolution": block})
    checks = run_check_supersolution(config, artefacts)
    assert checks == {"supersolution": True}
    summary = _json(artefacts.directory / "supersolution.json")
    assert summary["worst_violation"] <= 1e-8
    assert summary["lambda"] == 1.0
    assert _row(artefacts.directory / "supersolution.csv")["kappa"] == summary["kappa"]
    header = (artefacts.directory / "defect.csv").read_text(encoding="UTF-8").splitlines()[0]
    assert header == "x,defect"


def test_check_supersolution_window(tmp_path, artefacts):
    config = _config(tmp_path, {"check-supersolution": {"window": [5.0, -20.0]}})
    with pytest.raises(InvalidValueError):
        run_check_supersolution(config, artefacts)


def test_profile_artefacts(tmp_path, artefacts):
    profile = {
        "c": 1.2,
        "grid": {"h": 0.1, "r": 10.0, "R": 10.0},
        "schedule": [0.1, 0.0],
        "extend": False,
        "tail_fit": False,
    }
    config = _config(tmp_path, {"kernel": {"family": "uniform", "h": 0.1}, "profile": profile})
    checks = run_profile(config, artefacts)
    assert set(checks) == {"residual", "monotone", "endpoints"}
    assert checks["monotone"]
    lines = (artefacts.directory / "profile.csv").read_text(encoding="UTF-8").splitlines()
    assert lines[0] == "x,u"
    assert len(lines) == 202
    summary = _json(artefacts.directory / "diagnostics_profile.json")
    assert summary["c"] == 1.2
    assert summary["c1"] == approx(c1(build_kernel(Uniform(-1.0, 1.0), 0.1), logistic()).speed, abs=1e-12)
    assert summary["u_right"] > 0.99
    assert "iteration_report.json" in artefacts.names


def test_evolve_artefacts(tmp_path, artefacts):
    evolve = {"T": 10.0, "save_every": 0.25, "grid": {"h": 0.1, "r": 10.0, "R": 10.0}}
    config = _config(tmp_path, {"evolve": evolve})
    checks = run_evolve(config, artefacts)
    assert checks == {"monotone": True, "bounded": True}
    frames = (artefacts.directory / "frames.csv").read_text(encoding="UTF-8").splitlines()
    assert frames[0] == "t,x,u"
    assert len(frames) == 1 + 41 * 201
    track = (artefacts.directory / "track.csv").read_text(encoding="UTF-8").splitlines()
    assert track[0] == "t,x_front"
    summary = _json(artefacts.directory / "evolve.json")
    assert summary["measured_speed"] > 0.0
    assert summary["c1"] == approx(c1(build_kernel(Uniform(-1.0, 1.0), 0.1), logistic()).speed, abs=1e-12)
    assert _row(artefacts.directory / "evolve.csv")["measured_speed"] == summary["measured_speed"]


@pytest.mark.slow
def test_profile_at_supercritical_speed(tmp_path):
    config = _config(tmp_path)
    assert run("profile", config) == 0
    summary = _json(config.output_dir / "diagnostics_profile.json")
    assert summary["residual"] <= 1e-6
    assert summary["lambda_hat"] == approx(summary["lambda_of_c"], rel=0.02)


@pytest.mark.slow
def test_profile_below_minimal_speed(tmp_path):
    profile = {"c": 0.5, "grid": {"h": 0.1, "r": 10.0, "R": 10.0}, "schedule": [0.1, 0.0]}
    config = _config(tmp_path, {"kernel": {"family": "uniform", "h": 0.1}, "profile": profile})
    assert run("profile", config) == 3
    diagnostics = _json(config.output_dir / "diagnostics.json")
    assert diagnostics["error"] == "NonexistenceError"
    assert diagnostics["diagnostics"]["c"] == 0.5
    assert _json(config.output_dir / "manifest.json")["exit_status"] == 3


@pytest.mark.slow
def test_evolve_measures_minimal_speed(tmp_path):
    config = _config(tmp_path)
    assert run("evolve", config) == 0
    summary = _json(config.output_dir / "evolve.json")
    assert summary["measured_speed"] == approx(summary["c1"], rel=0.05)
    assert not summary["accelerating"]


@pytest.mark.slow
def test_demo_nonunique(tmp_path):
    config = _config(tmp_path)
    assert run("demo-nonunique", config) == 0
    out = config.output_dir
    certificate = _json(out / "certificate.json")
    assert set(certificate) >= {"a", "b", "jump_left", "jump_right", "residual_offjump", "c1"}
    assert _row(out / "certificate.csv")["jump_right"] == certificate["jump_right"]
    for n in (4, 8, 16, 32):
        assert (out / f"level_{n}.csv").exists()
    assert (out / "limit.csv").exists()
    assert _json(out / "exploratory_pins.json")["label"] == "exploratory"
    assert len(np.loadtxt(out / "pin_sweep.csv", delimiter=",", skiprows=1)) == 3
