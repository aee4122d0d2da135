# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0
from unittest.mock import patch

import numpy as np
import pytest
from pytest import approx

from frontlab.dispersion import c1
from frontlab.exceptions import ClassificationError, GridTooCoarseError, InvalidValueError, NoSignChangeError
from frontlab.kernels import Uniform, build_kernel
from frontlab.nonlinearities import ignition, logistic, spline
from frontlab.profile import (
    Grid,
    IgnitionSpeed,
    extrapolate_speeds,
    ignition_speed,
    minimal_speed_monostable,
)


@pytest.fixture(name="kernel")
def fixture_kernel():
    return build_kernel(Uniform(-1.0, 1.0), 0.1)


@pytest.fixture(name="grid")
def fixture_grid():
    return Grid(0.1, 15.0, 15.0)


def test_ignition_speed(kernel, grid):
    result = ignition_speed(kernel, ignition(0.3), grid, eps=0.05)
    assert result.bracket == approx((-0.5 / 0.3, 0.5 / 0.3))
    assert 0.0 < result.c <= 0.5 / 0.3
    assert abs(result.phi) <= 1e-6
    assert np.interp(0.0, result.profile.x, result.profile.u) == approx(0.3, abs=1e-6)
    assert result.profile.c == approx(result.c)
    assert np.all(np.diff(result.profile.u) >= -1e-10)
    assert result.evaluations >= 6


def test_faster_reaction_gives_faster_front(kernel, grid):
    fast = ignition_speed(kernel, ignition(0.3, 1.0), grid, eps=0.05)
    slow = ignition_speed(kernel, ignition(0.3, 0.5), grid, eps=0.05)
    assert fast.c > slow.c


def test_balanced_bistable_front_is_stationary(kernel, grid):
    balanced = spline(
        [0.0, 0.25, 0.5, 0.75, 1.0], [0.0, -0.05, 0.0, 0.05, 0.0], [-0.4, 0.0, 0.6, 0.0, -0.4]
    )
    result = ignition_speed(kernel, balanced, grid, eps=0.05, level=0.5, bracket=(-1.0, 1.0))
    assert result.c == approx(0.0, abs=1e-6)


def test_no_sign_change(kernel, grid):
    with pytest.raises(NoSignChangeError) as info:
        ignition_speed(kernel, ignition(0.3), grid, eps=0.05, bracket=(1.5, 1.6))
    assert len(info.value.diagnostics["phi"]) == 6


def test_ignition_speed_needs_threshold(kernel, grid):
    with pytest.raises(ClassificationError):
        ignition_speed(kernel, logistic(), grid)
    with pytest.raises(InvalidValueError):
        ignition_speed(kernel, ignition(0.3), grid, bracket=(1.0, -1.0))


def test_extrapolate_speeds():
    thetas = 0.2 * 2.0 ** -np.arange(8)
    logs = np.log(thetas)
    speeds = 0.9 + 2.0 / logs**2 - 3.0 / logs**3
    assert extrapolate_speeds(thetas, speeds) == approx(0.9, abs=1e-10)
    assert extrapolate_speeds([0.2, 0.1], [0.5, 0.7]) == approx(0.6)


def _fake_speed(kernel, f, grid, eps, settings):
    theta = f.rho
    return IgnitionSpeed(1.0 - theta, None, 0.0, 1, (-1.0, 1.0))


def test_minimal_speed_collects_in_order(kernel, grid):
    thetas = [0.2, 0.1, 0.05, 0.025]
    with patch("frontlab.profile.ignition.ignition_speed", side_effect=_fake_speed):
        result = minimal_speed_monostable(kernel, logistic(), grid, thetas=thetas, workers=3)
    assert result.thetas == thetas
    assert result.speeds == approx([0.8, 0.9, 0.95, 0.975])
    assert len(result.results) == 4


def test_minimal_speed_rejects_decreasing_speeds(kernel, grid):
    def decreasing(kernel, f, grid, eps, settings):
        return IgnitionSpeed(f.rho, None, 0.0, 1, (-1.0, 1.0))

    with patch("frontlab.profile.ignition.ignition_speed", side_effect=decreasing):
        with pytest.raises(GridTooCoarseError):
            minimal_speed_monostable(kernel, logistic(), grid, thetas=[0.2, 0.1])


@pytest.mark.parametrize("f, thetas", [(ignition(0.3), None), (logistic(), [0.1, 0.2])])
def test_minimal_speed_invalid_input(kernel, grid, f, thetas):
    with pytest.raises((ClassificationError, InvalidValueError)):
        minimal_speed_monostable(kernel, f, grid, thetas=thetas)


@pytest.mark.slow
def test_minimal_speed_approaches_kpp_speed():
    kernel = build_kernel(Uniform(-1.0, 1.0), 0.05)
    grid = Grid(0.05, 30.0, 30.0)
    speed = c1(kernel, logistic()).speed
    result = minimal_speed_monostable(kernel, logistic(), grid, thetas=[0.2, 0.1, 0.05, 0.025], workers=2)
    assert np.all(np.diff(result.speeds) >= -1e-8)
    assert max(result.speeds) < speed + 0.02
    assert result.c_star == approx(speed, abs=0.1)
