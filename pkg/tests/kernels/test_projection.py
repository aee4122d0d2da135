# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0
import numpy as np
import pytest
from pytest import approx
from scipy.integrate import trapezoid

from frontlab.exceptions import InvalidDirectionError, UnsupportedDensityError
from frontlab.kernels import Gaussian, RadialBump, SeparableDensity, project_direction


def test_gaussian_marginal_along_axis():
    density = SeparableDensity(("gaussian", "gaussian"), (1.0, 0.0), (1.0, 2.0))
    kernel = project_direction(density, (1.0, 0.0), 0.1)
    assert kernel.mass == approx(1.0, abs=1e-10)
    assert kernel.mean == approx(1.0, abs=1e-6)
    assert kernel.beta == approx(-1.0, abs=1e-6)
    # half second moment of N(1, 1) about the origin
    assert kernel.alpha == approx(1.0, rel=1e-3)
    assert kernel.family.is_c1


def test_isotropic_gaussian_oblique_direction():
    density = SeparableDensity(("gaussian", "gaussian"), (0.0, 0.0), (1.0, 1.0))
    kernel = project_direction(density, (0.6, 0.8), 0.1)
    assert kernel.family.is_symmetric
    assert kernel.mean == 0.0
    assert kernel.alpha == approx(0.5, rel=1e-3)


def test_projection_reverses_with_direction():
    density = SeparableDensity(("gaussian", "uniform"), (0.5, 0.0), (1.0, 1.0))
    forward = project_direction(density, (1.0, 0.0), 0.1)
    backward = project_direction(density, (-1.0, 0.0), 0.1)
    assert backward.mean == approx(-forward.mean, abs=1e-8)
    assert backward.values == approx(forward.values[::-1], abs=1e-10)


def test_radial_bump_is_isotropic():
    density = RadialBump((0.0, 0.0), 1.0)
    along_x = project_direction(density, (1.0, 0.0), 0.05)
    along_y = project_direction(density, (0.0, 1.0), 0.05)
    assert along_x.values == approx(along_y.values, abs=1e-12)
    assert along_x.support == (-1.0, 1.0)
    assert along_x.beta == 0.0


def test_radial_bump_in_three_dimensions():
    density = RadialBump((0.5, 0.0, 0.0), 1.0)
    kernel = project_direction(density, (1.0, 0.0, 0.0), 0.05)
    assert kernel.mean == approx(0.5, abs=1e-3)
    assert kernel.support == approx((-0.5, 1.5))


@pytest.mark.parametrize(
    "direction",
    [(1.0, 1.0), (0.5, 0.5)],
)
def test_non_unit_direction(direction):
    density = SeparableDensity(("gaussian", "gaussian"), (0.0, 0.0), (1.0, 1.0))
    with pytest.raises(InvalidDirectionError, match="not a unit vector"):
        project_direction(density, direction, 0.1)


def test_direction_of_wrong_length():
    density = SeparableDensity(("gaussian", "gaussian"), (0.0, 0.0), (1.0, 1.0))
    with pytest.raises(InvalidDirectionError, match="does not match"):
        project_direction(density, (0.0, 0.0, 1.0), 0.1)


def test_unsupported_density():
    with pytest.raises(UnsupportedDensityError):
        project_direction(Gaussian(), (1.0,), 0.1)
    four = SeparableDensity(("gaussian",) * 4, (0.0,) * 4, (1.0,) * 4)
    with pytest.raises(UnsupportedDensityError, match="up to 3"):
        project_direction(four, (1.0, 0.0, 0.0, 0.0), 0.1)
    with pytest.raises(UnsupportedDensityError):
        SeparableDensity(("cauchy",), (0.0,), (1.0,))


def test_one_dimensional_projection_is_the_density():
    density = SeparableDensity(("gaussian",), (0.0,), (1.0,))
    kernel = project_direction(density, (1.0,), 0.1)
    expected = np.exp(-0.5 * kernel.x**2) / np.sqrt(2.0 * np.pi)
    assert kernel.values == approx(expected / trapezoid(expected, kernel.x), rel=1e-6)
