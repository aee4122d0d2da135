# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0
import numpy as np
import pytest
from pytest import approx

from frontlab.exceptions import ClassificationError, InvalidValueError
from frontlab.nonlinearities import classify, g_analysis, logistic, shipped_spline
from frontlab.nonunique import regularize


@pytest.fixture(name="f")
def fixture_f():
    return shipped_spline()


@pytest.mark.parametrize("n", [1, 4, 16])
def test_strictly_increasing_and_close(f, n):
    regularized = regularize(f, n)
    u = np.linspace(0.0, 1.0, 20001)
    assert np.all(regularized.derivative(u) > 0.0)
    assert np.all(np.diff(regularized(u)) > 0.0)
    assert regularized.sup_distance <= 1.0 / n
    assert np.max(np.abs(regularized(u) - regularized.truncated(u))) <= regularized.sup_distance + 1e-9


def test_distance_shrinks(f):
    distances = [regularize(f, n).sup_distance for n in (4, 8, 16, 32)]
    assert np.all(np.diff(distances) < 0.0)


def test_agrees_with_g_outside_the_modified_range(f):
    regularized = regularize(f, 8)
    a, _ = regularized.plateau
    u = np.concatenate((np.linspace(0.0, a, 200), np.linspace(regularized.end, 1.0, 200)))
    assert regularized(u) == approx(f.g(u), abs=1e-14)
    assert regularized.derivative(u) == approx(f.dg(u), abs=1e-14)


def test_continuously_differentiable_at_the_seams(f):
    regularized = regularize(f, 8)
    for seam in (regularized.plateau[0], regularized.end):
        inside = np.array([seam - 1e-9, seam + 1e-9])
        assert regularized(inside[0:1])[0] == approx(regularized(inside[1:2])[0], abs=1e-7)
        assert regularized.derivative(inside[0:1])[0] == approx(regularized.derivative(inside[1:2])[0], abs=1e-5)


def test_truncation_is_flat_on_the_plateau(f):
    regularized = regularize(f, 4)
    a, b = regularized.plateau
    assert regularized.truncated(np.linspace(a, b, 50)) == approx(np.full(50, regularized.level))
    assert regularized.level == approx(g_analysis(f).level, abs=1e-12)


def test_inverse(f):
    regularized = regularize(f, 16)
    a, b = regularized.plateau
    u = np.array([0.0, 0.1, a + 0.01, 0.5 * (a + b), b + 0.5 * regularized.width, 0.9, 1.0])
    assert regularized.inverse(regularized(u)) == approx(u, abs=1e-8)


def test_regularized_term_is_kpp(f):
    f_n = regularize(f, 4).nonlinearity()
    classification = classify(f_n)
    assert classification.monostable
    assert classification.kpp
    assert f_n.fprime0 == approx(f.fprime0)
    assert f_n.metadata["regularized"] == 4
    assert g_analysis(f_n).plateau is None


def test_describe(f):
    description = regularize(f, 4).describe()
    assert set(description) == {"n", "a", "b", "level", "width", "slope", "sup_distance"}
    assert description["slope"] > 0.0


def test_monotone_g_is_rejected():
    with pytest.raises(ClassificationError, match="monotone"):
        regularize(logistic(0.5), 4)


@pytest.mark.parametrize("n", [0, -2, 1.5, True])
def test_invalid_index(f, n):
    with pytest.raises(InvalidValueError):
        regularize(f, n)
