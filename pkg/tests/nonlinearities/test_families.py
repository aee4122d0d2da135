# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0
import numpy as np
import pytest
from pytest import approx

from frontlab.exceptions import ClassificationError
from frontlab.nonlinearities import (
    HolderData,
    cubic,
    ignition,
    logistic,
    nonlinearity_from_dict,
    shipped_spline,
    spline,
)


@pytest.mark.parametrize(
    "nonlinearity, fprime0, fprime1",
    [
        (logistic(), 1.0, -1.0),
        (logistic(0.5), 0.5, -0.5),
        (cubic(1.0, 5.0), 1.0, -6.0),
        (ignition(0.3), 0.0, -0.7),
        (shipped_spline(), 0.6, -1.5),
    ],
)
def test_end_slopes(nonlinearity, fprime0, fprime1):
    assert nonlinearity.fprime0 == approx(fprime0)
    assert nonlinearity.fprime1 == approx(fprime1)
    assert nonlinearity(np.array([0.0, 1.0])) == approx([0.0, 0.0], abs=1e-12)


@pytest.mark.parametrize("nonlinearity", [logistic(2.0), cubic(1.0, 2.0), shipped_spline()])
def test_derivative_matches_difference_quotient(nonlinearity):
    u = np.linspace(0.05, 0.95, 19)
    step = 1e-6
    quotient = (nonlinearity(u + step) - nonlinearity(u - step)) / (2.0 * step)
    assert nonlinearity.df(u) == approx(quotient, abs=1e-4)


def test_g_is_u_minus_f():
    f = logistic()
    u = np.linspace(0.0, 1.0, 11)
    assert f.g(u) == approx(u**2)
    assert f.dg(u) == approx(2.0 * u)


def test_lipschitz():
    assert logistic(2.0).lipschitz() == approx(2.0)
    assert ignition(0.3).lipschitz() == approx(0.7, rel=1e-3)


def test_holder_defaults():
    assert logistic(0.5).holder == HolderData(0.5, 1.0, 0.5, 1.0)
    assert logistic(1.0).holder == HolderData(1.0, 2.0, 0.5, 1.0)


def test_holder_validation():
    with pytest.raises(ClassificationError, match="gamma"):
        logistic(holder=HolderData(1.0, 1.0, 0.5, 1.5))
    with pytest.raises(ClassificationError, match="m must be at least 1"):
        logistic(holder=HolderData(1.0, 0.5, 0.5, 1.0))


def test_spline_extends_linearly():
    f = shipped_spline()
    assert f(np.array([-0.1])) == approx([-0.06])
    assert f(np.array([1.1])) == approx([-0.15])
    assert f(np.array([0.4, 0.55, 0.7])) == approx([0.12, 0.24, 0.33])


def test_monotone_spline_without_slopes():
    f = spline([0.0, 0.5, 1.0], [0.0, 0.2, 0.0])
    assert f(np.array([0.5])) == approx([0.2])
    assert "df" not in f.params


@pytest.mark.parametrize(
    "u, values, message",
    [
        ([0.0, 1.0], [0.0, 0.0], "at least three"),
        ([0.0, 0.6, 0.5, 1.0], [0.0, 0.1, 0.1, 0.0], "strictly increasing"),
        ([0.1, 0.5, 1.0], [0.0, 0.1, 0.0], "span"),
    ],
)
def test_spline_rejects_bad_control_points(u, values, message):
    with pytest.raises(ClassificationError, match=message):
        spline(u, values)


@pytest.mark.parametrize(
    "factory, kwargs",
    [
        (logistic, {"r": 0.0}),
        (cubic, {"k": -1.0}),
        (ignition, {"rho": 1.0}),
        (ignition, {"rho": 0.3, "r": -1.0}),
    ],
)
def test_invalid_family_parameters(factory, kwargs):
    with pytest.raises(ClassificationError):
        factory(**kwargs)


def test_nonlinearity_from_dict():
    f = nonlinearity_from_dict(
        {"family": "ignition", "params": {"rho": 0.25}, "holder": {"A": 1.0, "m": 1.0, "delta": 0.4, "gamma": 0.5}}
    )
    assert f.rho == 0.25
    assert f.holder.delta == 0.4
    assert nonlinearity_from_dict({"family": "spline", "params": {}}).fprime0 == approx(0.6)


def test_nonlinearity_from_dict_errors():
    with pytest.raises(ClassificationError, match="Unknown nonlinearity family"):
        nonlinearity_from_dict({"family": "bistable", "params": {}})
    with pytest.raises(ClassificationError, match="Invalid parameters"):
        nonlinearity_from_dict({"family": "logistic", "params": {"rate": 1.0}})
    with pytest.raises(ClassificationError, match="Hoelder block"):
        nonlinearity_from_dict({"family": "logistic", "params": {}, "holder": {"A": 1.0}})
