# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0
from unittest.mock import patch

import numpy as np
import pytest
from pytest import approx

from frontlab.exceptions import ClassificationError, InvalidValueError, IterationBudgetError
from frontlab.kernels import Uniform, build_kernel
from frontlab.nonlinearities import ignition, logistic, shipped_spline
from frontlab.profile import (
    Grid,
    Scheme,
    SolverSettings,
    Start,
    align_and_compare,
    boundary_corrections,
    newton_system,
    settled,
    solve_truncated,
)
from frontlab.profile.truncated import STALL_WINDOW


@pytest.fixture(name="kernel")
def fixture_kernel():
    return build_kernel(Uniform(-1.0, 1.0), 0.1)


@pytest.fixture(name="grid")
def fixture_grid():
    return Grid(0.1, 10.0, 10.0)


def test_boundary_corrections(kernel, grid):
    corrections = boundary_corrections(kernel, grid, 0.2)
    assert corrections.h_r[0] == approx(0.1, abs=0.01)
    assert corrections.h_R[-1] == approx(0.5, abs=0.05)
    assert np.all(corrections.h_r[kernel.n + 1 :] == 0.0)
    assert np.all(corrections.h_R[: -kernel.n - 1] == 0.0)
    assert boundary_corrections(kernel, grid, 0.0).h_r == approx(np.zeros(grid.size))


@pytest.mark.parametrize("scheme", [Scheme.UPWIND, Scheme.CENTRED])
def test_newton_system_matches_differences(kernel, scheme):
    grid = Grid(0.1, 5.0, 5.0)
    f = logistic()
    corrections = boundary_corrections(kernel, grid, 0.0)
    u = 0.5 * (1.0 + np.tanh(grid.x))
    u[0], u[-1] = 0.0, 1.0
    c, eps, delta = 0.7, 0.05, 1e-6
    residual, jacobian, speed_column = newton_system(kernel, f, u, c, eps, corrections, scheme)
    assert jacobian.shape == (grid.size - 2, grid.size - 2)

    direction = np.zeros(grid.size)
    direction[1:-1] = np.random.default_rng(11).standard_normal(grid.size - 2)
    forward = newton_system(kernel, f, u + delta * direction, c, eps, corrections, scheme)[0]
    backward = newton_system(kernel, f, u - delta * direction, c, eps, corrections, scheme)[0]
    assert jacobian @ direction[1:-1] == approx((forward - backward) / (2.0 * delta), abs=1e-6)

    faster = newton_system(kernel, f, u, c + delta, eps, corrections, scheme)[0]
    assert speed_column == approx((faster - residual) / delta, abs=1e-6)


def test_ascending_kpp_solve(kernel, grid):
    profile, report = solve_truncated(kernel, logistic(), grid, 1.2, 0.0, polish=False)
    assert profile.u[0] == 0.0
    assert profile.u[-1] == 1.0
    assert np.all(np.diff(profile.u) >= -1e-12)
    assert np.all((profile.u >= 0.0) & (profile.u <= 1.0))
    assert report.monotone_iterates == settled(report.history)
    assert report.iterations > 0
    assert report.sup_change <= 1e-10
    assert not report.polished
    residual, _, _ = newton_system(
        kernel, logistic(), profile.u, 1.2, 0.0, boundary_corrections(kernel, grid, 0.0), Scheme.UPWIND
    )
    assert np.max(np.abs(residual)) < 1e-8


def test_ascending_and_descending_agree(kernel, grid):
    f = ignition(0.3)
    ascending, _ = solve_truncated(kernel, f, grid, 1.0, 0.1, start=Start.ASCENDING)
    descending, report = solve_truncated(kernel, f, grid, 1.0, 0.1, start=Start.DESCENDING)
    assert report.monotone_iterates == settled(report.history)
    assert np.max(np.abs(ascending.u - descending.u)) < 1e-6
    assert align_and_compare(ascending, descending).sup_distance < 1e-6


def test_warm_start_reuses_profile(kernel, grid):
    f = ignition(0.3)
    cold, cold_report = solve_truncated(kernel, f, grid, 1.0, 0.1, polish=False)
    warm, warm_report = solve_truncated(kernel, f, grid, 1.0, 0.1, start=Start.WARM, initial=cold.u, polish=False)
    assert warm_report.iterations < cold_report.iterations
    assert warm.u == approx(cold.u, abs=1e-8)


def test_polish_keeps_profile_close(kernel, grid):
    upwind, _ = solve_truncated(kernel, ignition(0.3), grid, 1.0, 0.1, polish=False)
    refined, report = solve_truncated(kernel, ignition(0.3), grid, 1.0, 0.1)
    assert refined.metadata["polished"] == report.polished
    assert np.max(np.abs(refined.u - upwind.u)) < 0.1
    assert np.all(np.diff(refined.u) >= -1e-10)


@pytest.mark.parametrize(
    "eps, theta, start, initial",
    [(-0.1, 0.0, Start.ASCENDING, None), (0.1, 0.5, Start.ASCENDING, None), (0.1, 0.0, Start.WARM, np.ones(3))],
)
def test_invalid_arguments(kernel, grid, eps, theta, start, initial):
    with pytest.raises(InvalidValueError):
        solve_truncated(kernel, logistic(), grid, 1.0, eps, theta, start=start, initial=initial)


def test_stationary_inviscid_needs_monotone_g(kernel, grid):
    with pytest.raises(ClassificationError, match="demo-nonunique"):
        solve_truncated(kernel, shipped_spline(), grid, 0.0, 0.0)


def test_iteration_budget(kernel, grid):
    settings = SolverSettings(max_iterations=3, newton_switch=0.0)
    with pytest.raises(IterationBudgetError) as info:
        solve_truncated(kernel, logistic(), grid, 1.2, 0.0, settings=settings)
    assert info.value.diagnostics["grid"]["nodes"] == grid.size


def test_settled_ignores_the_first_sweeps():
    assert settled([1.0, 2.0, 0.5, 3.0, 9.0, 8.0, 4.0, 2.0, 1.0])
    assert settled([0.1, 0.2, 0.3])
    assert not settled([1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.6, 0.4])
    assert settled([1.0, 0.5, 0.3], skip=0)
    assert not settled([1.0, 0.5, 0.7], skip=0)


def test_rejected_newton_step_is_retried_after_a_window(kernel, grid):
    f = ignition(0.3)
    reference, _ = solve_truncated(kernel, f, grid, 1.0, 0.1, polish=False)
    settings = SolverSettings(newton_switch=1.0, polish=False)
    with patch("frontlab.profile.truncated._damped_newton", return_value=(None, 0.0)) as newton:
        profile, report = solve_truncated(kernel, f, grid, 1.0, 0.1, settings=settings)
    assert report.newton_steps == 0
    assert newton.call_count == len(range(2, report.iterations + 1, STALL_WINDOW))
    assert profile.u == approx(reference.u, abs=1e-6)
