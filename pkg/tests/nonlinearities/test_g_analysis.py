# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0
import numpy as np
import pytest
from pytest import approx

from frontlab.exceptions import MultiWellError
from frontlab.nonlinearities import g_analysis, logistic, shipped_spline, spline


@pytest.mark.parametrize("f", [logistic(0.5), logistic(1.0)])
def test_monotone_g_has_no_plateau(f):
    result = g_analysis(f)
    assert result.plateau is None
    assert result.turning_points == []
    assert result.intervals == [(0.0, 1.0, "increasing")]


def test_plateau_of_shipped_spline():
    f = shipped_spline()
    result = g_analysis(f)
    a, b = result.plateau
    assert a < result.peak < result.trough < b
    assert f.g(np.array([a]))[0] == approx(f.g(np.array([b]))[0], abs=1e-8)
    assert f.g(np.array([a]))[0] == approx(result.level, abs=1e-12)
    assert [label for _, _, label in result.intervals] == ["increasing", "decreasing", "increasing"]


def test_turning_points_are_zeros_of_g_prime():
    f = shipped_spline()
    result = g_analysis(f)
    assert len(result.turning_points) == 2
    assert f.dg(np.array(result.turning_points)) == approx([0.0, 0.0], abs=1e-8)


def test_g_increases_on_the_flanks():
    f = shipped_spline()
    a, b = g_analysis(f).plateau
    left = np.linspace(0.0, a, 1000, endpoint=False)
    right = np.linspace(b, 1.0, 1000)[1:]
    assert np.all(f.dg(left) > 0.0)
    assert np.all(f.dg(right) > 0.0)


def test_two_wells_are_rejected():
    f = spline(
        [0.0, 0.2, 0.3, 0.4, 0.6, 0.7, 0.8, 1.0],
        [0.0, 0.1, 0.2, 0.22, 0.3, 0.4, 0.42, 0.0],
        [0.5, 0.5, 1.5, 0.2, 0.5, 1.5, 0.2, -3.0],
    )
    with pytest.raises(MultiWellError, match="single interior decreasing interval") as info:
        g_analysis(f)
    assert info.value.diagnostics["pattern"].count("decreasing") == 2


def test_decreasing_start_is_rejected():
    with pytest.raises(MultiWellError):
        g_analysis(logistic(2.0))
