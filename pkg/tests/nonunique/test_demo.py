# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0
import numpy as np
import pytest
from pytest import approx

from frontlab.dispersion import lambda_of_c
from frontlab.exceptions import DemoFailureError, InvalidValueError, IterationBudgetError
from frontlab.kernels import Uniform, mgf
from frontlab.nonlinearities import logistic
from frontlab.nonunique import (
    StationarySettings,
    StationarySolution,
    build_case,
    extract_discontinuous_limit,
    pin_sweep,
    regularize,
    run_demo,
    solve_regularized,
    stationary_map,
)
from frontlab.profile import Grid


@pytest.fixture(name="case", scope="module")
def fixture_case():
    return build_case()


@pytest.fixture(name="grid")
def fixture_grid():
    return Grid(0.05, 20.0, 10.0)


def test_shipped_case(case):
    assert case.classification.monostable
    assert case.classification.kpp
    assert 0.0 < case.f.fprime0 < 1.0
    assert case.f.fprime1 < 0.0
    assert case.speed.speed <= 0.0
    a, b = case.analysis.plateau
    assert case.f.g(np.array([a]))[0] == approx(case.f.g(np.array([b]))[0], abs=1e-8)


def test_monotone_g_fails_the_case():
    with pytest.raises(DemoFailureError) as info:
        build_case(f=logistic(0.5))
    assert "plateau" in info.value.diagnostics


def test_symmetric_kernel_fails_the_case():
    with pytest.raises(DemoFailureError) as info:
        build_case(family=Uniform(-1.0, 1.0))
    assert info.value.diagnostics["c1"] > 0.0


def test_stationary_map_of_the_tail(case, grid):
    lam = lambda_of_c(case.kernel, case.f, 0.0, speed=case.speed).lam
    u = 1e-3 * np.exp(lam * (grid.x - grid.x[0]))
    # the kernel only looks to the left, the right exterior does not enter
    assert stationary_map(case.kernel, u, lam) / u == approx(mgf(case.kernel, lam), rel=1e-8)
    assert mgf(case.kernel, lam) == approx(1.0 - case.f.fprime0, rel=1e-8)
    assert stationary_map(case.kernel, np.ones(grid.size), 0.0) == approx(np.ones(grid.size), abs=1e-12)


def test_regularized_front(case, grid):
    regularized = regularize(case.f, 8, case.analysis)
    solution = solve_regularized(case.kernel, regularized, grid)
    u = solution.profile.u
    p = int(np.argmin(np.abs(grid.x)))
    assert u[p] == approx(regularized.plateau[0], abs=1e-10)
    assert solution.residual <= 1e-8
    assert np.all(np.diff(u) >= -1e-12)
    assert np.all((u >= 0.0) & (u <= 1.0))
    assert u[0] < 1e-3
    assert u[-1] > regularized.plateau[1]
    assert solution.profile.c == 0.0
    assert solution.decay_rate == approx(lambda_of_c(case.kernel, case.f, 0.0).lam)


def test_fixed_point_iteration_keeps_the_front(case, grid):
    regularized = regularize(case.f, 8, case.analysis)
    newton = solve_regularized(case.kernel, regularized, grid)
    settings = StationarySettings(tol=1e-8, residual_tol=1e-6, method="fixed_point")
    swept = solve_regularized(case.kernel, regularized, grid, settings=settings, initial=newton.profile.u)
    assert swept.newton_steps == 0
    assert swept.sweeps >= 1
    assert swept.profile.metadata["method"] == "fixed_point"
    assert swept.profile.u == approx(newton.profile.u, abs=1e-6)


def test_fixed_point_iteration_budget(case, grid):
    regularized = regularize(case.f, 8, case.analysis)
    settings = StationarySettings(max_sweeps=2, method="fixed_point")
    with pytest.raises(IterationBudgetError) as info:
        solve_regularized(case.kernel, regularized, grid, settings=settings)
    assert info.value.diagnostics["sweeps"] == 2
    assert info.value.diagnostics["method"] == "fixed_point"


def test_invalid_pins(case, grid):
    regularized = regularize(case.f, 4, case.analysis)
    with pytest.raises(InvalidValueError):
        solve_regularized(case.kernel, regularized, grid, pin=1.2)
    with pytest.raises(InvalidValueError, match="stationary method"):
        solve_regularized(case.kernel, regularized, grid, settings=StationarySettings(method="anderson"))
    with pytest.raises(InvalidValueError):
        pin_sweep(case.kernel, regularized, grid, pins=[0.1])


def test_limit_needs_four_levels(case):
    solutions = [StationarySolution(n, None, None, 0.0, 0, 0, 0.5) for n in (4, 8, 16)]
    with pytest.raises(InvalidValueError):
        extract_discontinuous_limit(solutions, case.kernel)


@pytest.mark.slow
def test_discontinuous_limit(case, grid):
    result = run_demo(case, grid)
    certificate = result.certificate
    a, b = certificate["a"], certificate["b"]
    assert all(certificate["checks"].values())
    assert certificate["jump"] >= 0.5 * (b - a)
    assert abs(certificate["jump_right"] - b) <= 0.02 * b
    assert certificate["jump_left"] <= a * 1.02
    assert certificate["residual_offjump"] <= 1e-4
    assert certificate["continuity"] <= certificate["continuity_bound"]
    assert certificate["c1"] <= 0.0
    assert [solution.n for solution in result.solutions] == [4, 8, 16, 32]
    assert len(result.limit.ordering) == 3
    assert len(result.sweep) == 3
    assert all(isinstance(member.survives, bool) for member in result.sweep)
