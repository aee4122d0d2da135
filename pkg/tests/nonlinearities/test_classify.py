# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0
import pytest
from pytest import approx

from frontlab.exceptions import ClassificationError
from frontlab.nonlinearities import classify, cubic, ignition, logistic, shipped_spline, spline
from frontlab.nonlinearities.classify import detect_threshold


@pytest.mark.parametrize(
    "nonlinearity, monostable, kpp, is_ignition",
    [
        (logistic(), True, True, False),
        (logistic(0.5), True, True, False),
        (cubic(1.0, 5.0), True, False, False),
        (cubic(1.0, 0.5), True, True, False),
        (ignition(0.3), False, False, True),
        (shipped_spline(), True, True, False),
    ],
)
def test_flags(nonlinearity, monostable, kpp, is_ignition):
    result = classify(nonlinearity)
    assert result.monostable == monostable
    assert result.kpp == kpp
    assert result.ignition == is_ignition


@pytest.mark.parametrize(
    "nonlinearity",
    [logistic(), cubic(1.0, 5.0), ignition(0.3), shipped_spline()],
)
def test_flags_stable_under_refinement(nonlinearity):
    coarse = classify(nonlinearity, samples=10_000)
    fine = classify(nonlinearity, samples=100_000)
    assert coarse[:3] == fine[:3]


def test_kpp_violation_reports_worst_point():
    result = classify(cubic(1.0, 5.0))
    violation = result.violations["kpp"]
    # f(u) - u = u^2 (4 - 5u) peaks at u = 8 / 15
    assert violation.u == approx(8.0 / 15.0, abs=1e-3)
    assert violation.value == approx((8.0 / 15.0) ** 2 * (4.0 - 40.0 / 15.0), rel=1e-4)


def test_ignition_is_not_kpp():
    result = classify(ignition(0.3))
    assert result.rho == 0.3
    assert "positive" in result.violations
    assert "kpp" in result.violations


def test_threshold_detection():
    f = spline([0.0, 0.2, 0.6, 1.0], [0.0, 0.0, 0.2, 0.0], [0.0, 0.0, 0.0, -1.0])
    assert detect_threshold(f) == approx(0.2, abs=1e-4)
    result = classify(f)
    assert result.ignition
    assert result.rho == approx(0.2, abs=1e-4)
    assert not result.monostable


def test_unstable_end_is_not_monostable():
    f = spline([0.0, 0.5, 1.0], [0.0, 0.2, 0.0], [1.0, 0.0, 0.5])
    result = classify(f)
    assert not result.monostable
    assert result.violations["stable_end"].value == approx(0.5)


def test_nonzero_end_state():
    with pytest.raises(ClassificationError, match="does not vanish") as info:
        classify(spline([0.0, 0.5, 1.0], [0.0, 0.2, 0.1]))
    assert info.value.diagnostics["f1"] == approx(0.1)
