# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0
import numpy as np
import pytest
from pytest import approx
from scipy.optimize import minimize_scalar

from frontlab.dispersion import (
    Multiplicity,
    Orientation,
    c1,
    c_star_left,
    deficit,
    dispersion_curve,
    jensen_lower_bound,
    lambda_of_c,
    local_speed_shift,
    speed_bracket,
    speed_of_rate,
)
from frontlab.exceptions import (
    ClassificationError,
    NoFiniteSpeedError,
    NoPositiveRootError,
    TruncationWarning,
    UnattainedInfimumWarning,
)
from frontlab.kernels import Algebraic, Bump, Gaussian, Laplace, Mixture, Uniform, build_kernel, reflect
from frontlab.nonlinearities import ignition, logistic


@pytest.fixture(name="uniform")
def fixture_uniform():
    return build_kernel(Uniform(-1.0, 1.0), 0.01)


@pytest.fixture(name="shifted")
def fixture_shifted():
    return build_kernel(Uniform(1.0, 3.0), 0.01)


SYMMETRIC_FAMILIES = [
    Uniform(-1.0, 1.0),
    Uniform(-2.0, 2.0),
    Gaussian(0.0, 1.0),
    Laplace(0.0, 1.0),
    Bump(0.0, 1.5),
    Mixture((0.5, 0.5), (Uniform(-1.0, 1.0), Gaussian(0.0, 2.0))),
]


def _grid_scan_minimum(kernel, f, method="quadrature"):
    lam = np.geomspace(1e-3, 10.0, 512)
    speeds = speed_of_rate(kernel, f, lam, method=method)
    best = float(lam[np.argmin(speeds)])
    width = best * (lam[1] / lam[0] - 1.0)
    while width > 1e-8:
        local = np.linspace(best - width, best + width, 41)
        best = float(local[np.argmin(speed_of_rate(kernel, f, local, method=method))])
        width /= 10.0
    return speed_of_rate(kernel, f, best, method=method), best


def test_c1_symmetric_uniform(uniform):
    oracle, rate = _grid_scan_minimum(uniform, logistic())
    result = c1(uniform, logistic())
    assert result.speed == approx(oracle, abs=1e-6)
    assert result.lambda_star == approx(rate, abs=1e-3)
    assert result.speed == approx(0.90529, abs=1e-4)
    assert result.attained


def test_c1_analytic_mgf_matches_quadrature(uniform):
    closed_form = minimize_scalar(
        lambda lam: np.sinh(lam) / lam**2, bounds=(1.0, 3.0), method="bounded", options={"xatol": 1e-10}
    )
    analytic = c1(uniform, logistic(), method="analytic")
    assert analytic.speed == approx(closed_form.fun, abs=1e-6)
    assert analytic.lambda_star == approx(1.91501, abs=1e-4)
    assert c1(uniform, logistic()).speed == approx(analytic.speed, abs=1e-4)
    assert speed_of_rate(uniform, logistic(), 1.5) == approx(
        speed_of_rate(uniform, logistic(), 1.5, method="analytic"), rel=1e-4
    )


def test_c1_is_stationary_at_minimizer(uniform):
    f = logistic()
    result = c1(uniform, f)
    step = 1e-4
    above = speed_of_rate(uniform, f, result.lambda_star + step)
    below = speed_of_rate(uniform, f, result.lambda_star - step)
    slope = (above - below) / (2.0 * step)
    assert slope == approx(0.0, abs=1e-7)
    assert np.all(result.speed <= result.curve.speed + 1e-12)


def test_c1_negative_for_rightward_kernel(shifted):
    def oracle(lam):
        return ((np.exp(-lam) - np.exp(-3.0 * lam)) / (2.0 * lam) - 0.5) / lam

    expected = minimize_scalar(oracle, bounds=(0.1, 5.0), method="bounded", options={"xatol": 1e-10})
    result = c1(shifted, logistic(0.5))
    assert result.speed == approx(expected.fun, abs=1e-3)
    assert result.speed == approx(-0.346, abs=1e-3)
    assert result.lambda_star == approx(0.85, abs=0.02)


@pytest.mark.parametrize("family", SYMMETRIC_FAMILIES)
@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_jensen_sign(family, r):
    kernel = build_kernel(family, 0.05)
    f = logistic(r)
    speed = c1(kernel, f).speed
    assert speed > 0.0
    assert speed >= jensen_lower_bound(kernel, f) - 1e-9


@pytest.mark.parametrize(
    "family",
    SYMMETRIC_FAMILIES + [Uniform(1.0, 3.0), Gaussian(1.0, 0.5), Laplace(-0.5, 1.0), Bump(2.0, 1.0)],
)
def test_reflection_duality(family):
    kernel = build_kernel(family, 0.05)
    f = logistic(0.5)
    assert c_star_left(kernel, f).speed == approx(c1(reflect(kernel), f).speed, abs=1e-10)


@pytest.mark.parametrize("family", SYMMETRIC_FAMILIES[:4])
def test_symmetric_kernel_speeds_agree(family):
    kernel = build_kernel(family, 0.05)
    assert c_star_left(kernel, logistic()).speed == approx(c1(kernel, logistic()).speed, abs=1e-10)


def test_leftward_speed_for_rightward_kernel(shifted):
    assert c_star_left(shifted, logistic(0.5)).speed > 0.0


def test_c1_non_increasing_under_right_shift():
    f = logistic()
    with pytest.warns(UnattainedInfimumWarning):
        speeds = [c1(build_kernel(Uniform(-1.0 + shift, 1.0 + shift), 0.01), f).speed for shift in (0.0, 1.0, 2.0)]
    assert speeds[0] >= speeds[1] >= speeds[2]


def test_unattained_infimum(shifted):
    with pytest.warns(UnattainedInfimumWarning):
        result = c1(shifted, logistic(1.0))
    assert not result.attained
    assert result.lambda_star == result.lambda_max == approx(50.0)
    assert result.speed > 0.0


def test_fat_tail_has_no_finite_speed():
    with pytest.warns(TruncationWarning):
        kernel = build_kernel(Algebraic(3.0), 0.5)
    with pytest.raises(NoFiniteSpeedError, match="Mollison"):
        c1(kernel, logistic())


def test_c1_needs_positive_growth_rate(uniform):
    with pytest.raises(ClassificationError):
        c1(uniform, ignition(0.3))


def test_dispersion_curve(tmp_path, uniform):
    curve = dispersion_curve(uniform, logistic())
    assert len(curve.lam) == 512
    assert curve.lam[0] == approx(1e-3)
    assert curve.lam[-1] == approx(50.0)
    assert curve.speed[0] > curve.speed.min()
    assert curve.orientation is Orientation.FORWARD
    path = tmp_path / "curve.csv"
    curve.to_csv(path)
    assert path.read_text().splitlines()[0] == "lambda,c_of_lambda"


def test_lambda_of_c_at_c1_is_double(uniform):
    f = logistic()
    speed = c1(uniform, f)
    root = lambda_of_c(uniform, f, speed.speed, speed=speed)
    assert root.multiplicity is Multiplicity.DOUBLE
    assert root.lam == speed.lambda_star
    step = 1e-4
    slope = (deficit(uniform, f, speed.speed, root.lam + step) - deficit(uniform, f, speed.speed, root.lam - step)) / (
        2.0 * step
    )
    assert deficit(uniform, f, speed.speed, root.lam) == approx(0.0, abs=1e-6)
    assert slope == approx(0.0, abs=1e-6)


def test_lambda_of_c_simple_root(uniform):
    f = logistic()
    speed = c1(uniform, f)
    root = lambda_of_c(uniform, f, 1.2, speed=speed)
    assert root.multiplicity is Multiplicity.SIMPLE
    assert root.lam < speed.lambda_star
    assert -1.2 * root.lam + np.sinh(root.lam) / root.lam == approx(0.0, abs=1e-9)


def test_lambda_of_c_root_consistency(uniform):
    f = logistic()
    speed = c1(uniform, f)
    rng = np.random.default_rng(7)
    for c in speed.speed + rng.uniform(0.01, 5.0, 20):
        root = lambda_of_c(uniform, f, c, speed=speed)
        assert deficit(uniform, f, c, root.lam) == approx(0.0, abs=1e-9)


def test_lambda_of_c_far_above_c1(uniform):
    f = logistic()
    speed = c1(uniform, f)
    c = speed.speed + 10.0
    root = lambda_of_c(uniform, f, c, speed=speed)
    step = 1e-6
    slope = (deficit(uniform, f, c, root.lam + step) - deficit(uniform, f, c, root.lam - step)) / (2.0 * step)
    assert root.lam < 0.2
    assert slope < 0.0


def test_lambda_of_c_below_c1(uniform):
    with pytest.raises(NoPositiveRootError, match="below c1"):
        lambda_of_c(uniform, logistic(), 0.5)


@pytest.mark.parametrize("rho, expected", [(0.3, 0.5 / 0.3), (0.5, 1.0), (0.8, 0.5 / 0.2)])
def test_speed_bracket(uniform, rho, expected):
    assert speed_bracket(uniform, ignition(rho)) == approx(expected, rel=1e-10)


def test_speed_bracket_needs_ignition(uniform):
    with pytest.raises(ClassificationError):
        speed_bracket(uniform, logistic())


def test_local_speed_shift(shifted, uniform):
    assert local_speed_shift(shifted) == approx(-2.0)
    assert local_speed_shift(uniform) == 0.0
    assert jensen_lower_bound(shifted, logistic()) == approx(-2.0)
