# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0
import numpy as np
import pytest
from pytest import approx

from frontlab.evolution import SmoothField, local_limit_check, local_limit_ladder
from frontlab.exceptions import GridTooCoarseError, InvalidValueError
from frontlab.kernels import Gaussian, Uniform, build_kernel


@pytest.fixture(name="kernel")
def fixture_kernel():
    return build_kernel(Uniform(-1.0, 1.0), 0.1)


@pytest.mark.parametrize("field", [SmoothField.gaussian(), SmoothField.tanh()])
def test_scaled_remainder_decreases(kernel, field):
    ladder = local_limit_ladder(kernel, field)
    assert ladder.decreasing
    assert [check.eps for check in ladder.checks] == [0.4, 0.2, 0.1, 0.05]
    assert [check.dilation for check in ladder.checks] == [8, 4, 2, 1]
    assert ladder.checks[-1].scaled_error < 0.01


def test_remainder_is_fourth_order(kernel):
    ladder = local_limit_ladder(kernel, SmoothField.gaussian(), [0.2, 0.1])
    coarse, fine = ladder.checks
    assert coarse.error / fine.error == approx(16.0, rel=0.1)


@pytest.mark.parametrize("coefficients", [[1.0, 2.0], [0.5, -1.0, 3.0]])
def test_expansion_exact_for_low_degree(coefficients):
    shifted = build_kernel(Uniform(0.0, 2.0), 0.1)
    check = local_limit_check(shifted, 0.25, SmoothField.polynomial(coefficients))
    assert check.error == approx(0.0, abs=1e-9)


def test_drift_of_shifted_kernel():
    shifted = build_kernel(Gaussian(0.5, 1.0), 0.1)
    assert shifted.beta == approx(-0.5, abs=1e-4)
    check = local_limit_check(shifted, 0.1, SmoothField.gaussian())
    assert check.scaled_error < 0.1


def test_smooth_field_names():
    field = SmoothField.from_name("tanh")
    x = np.linspace(-2.0, 2.0, 5)
    assert field.phi(x) == approx(0.5 * (1.0 + np.tanh(x)))
    with pytest.raises(InvalidValueError):
        SmoothField.from_name("sine")


@pytest.mark.parametrize("eps", [0.0, -0.1, 0.6])
def test_eps_out_of_range(kernel, eps):
    with pytest.raises(InvalidValueError):
        local_limit_check(kernel, eps, SmoothField.gaussian())


def test_grid_must_resolve_dilation(kernel):
    with pytest.raises(GridTooCoarseError) as info:
        local_limit_check(kernel, 0.3, SmoothField.gaussian(), h=0.004)
    assert info.value.diagnostics["eps"] == 0.3
    with pytest.raises(GridTooCoarseError):
        local_limit_check(kernel, 0.05, SmoothField.gaussian(), h=0.01)


@pytest.mark.parametrize("eps_values", [[0.1], [0.1, 0.2], [0.2, 0.2]])
def test_invalid_ladder(kernel, eps_values):
    with pytest.raises(InvalidValueError):
        local_limit_ladder(kernel, SmoothField.gaussian(), eps_values)
