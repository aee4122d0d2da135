# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Smooth cutoffs eta_theta and the ignition approximations f eta_theta of a monostable term.

The base cutoff is E(t) = I(2t - 3) / I(1) with I(y) = int_{-1}^{y} exp(1 / (s^2 - 1)) ds, so that
E = 0 on (-inf, 1], E = 1 on [2, inf) and E' >= 0. log I is tabulated once by adaptive quadrature
and interpolated with its exact derivative.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicHermiteSpline

from ..exceptions import ClassificationError, InvalidCutoffError
from ..kernels.families import bump_profile
from .classify import classify
from .families import Nonlinearity, make_nonlinearity

# below 1 + y = TABLE_START the integrated bump underflows and is set to zero
TABLE_START = 1e-3
GEOMETRIC_NODES = 400
UNIFORM_NODES = 400


def _bump(s: float) -> float:
    return float(bump_profile(np.array([s]))[0])


@lru_cache(maxsize=None)
def _log_integral_table():
    graded = -1.0 + np.geomspace(TABLE_START, 1.0, GEOMETRIC_NODES)
    y = np.concatenate((graded, np.linspace(0.0, 1.0, UNIFORM_NODES)[1:]))
    pieces = [quad(_bump, -1.0, y[0], epsabs=0.0, epsrel=1e-12, limit=200)[0]]
    pieces += [quad(_bump, lo, hi, epsabs=0.0, epsrel=1e-12)[0] for lo, hi in zip(y[:-1], y[1:])]
    integral = np.cumsum(pieces)
    slopes = bump_profile(y) / integral
    return CubicHermiteSpline(y, np.log(integral), slopes), float(integral[-1])


def base_cutoff(t) -> np.ndarray:
    """E(t): zero for t <= 1, one for t >= 2, smooth and non-decreasing in between."""
    log_integral, total = _log_integral_table()
    t = np.asarray(t, dtype=float)
    y = 2.0 * t - 3.0
    inside = (y > -1.0 + TABLE_START) & (y < 1.0)
    out = np.where(y >= 1.0, 1.0, 0.0)
    out[inside] = np.clip(np.exp(log_integral(y[inside])) / total, 0.0, 1.0)
    return out


def base_cutoff_derivative(t) -> np.ndarray:
    _, total = _log_integral_table()
    return 2.0 * bump_profile(2.0 * np.asarray(t, dtype=float) - 3.0) / total


@dataclass(frozen=True)
class CutoffFamily:
    """
    Cutoff eta_theta(s) = E(s / theta): zero for s <= theta and one for s >= 2 theta.

    Attributes
    ----------
    theta : float
        Threshold in (0, 1/2).
    """

    theta: float

    def __post_init__(self):
        if not 0.0 < self.theta < 0.5:
            raise InvalidCutoffError(f"cutoff threshold must lie in (0, 1/2), got {self.theta}")

    def __call__(self, s):
        return base_cutoff(np.asarray(s, dtype=float) / self.theta)

    def derivative(self, s):
        return base_cutoff_derivative(np.asarray(s, dtype=float) / self.theta) / self.theta


def ignition_approx(f: Nonlinearity, theta: float) -> Nonlinearity:
    """
    Ignition approximation f eta_theta of a monostable nonlinearity.

    Parameters
    ----------
    f : Nonlinearity
        A monostable reaction term.
    theta : float
        Cutoff threshold, 0 < theta < 1/4.

    Returns
    -------
    Nonlinearity
        The product f eta_theta with ignition threshold rho = theta. It never exceeds f and is
        non-increasing in theta.

    Raises
    ------
    InvalidCutoffError
        If theta is outside (0, 1/4).
    ClassificationError
        If f is not monostable.
    """
    if not 0.0 < theta < 0.25:
        raise InvalidCutoffError(f"ignition approximation needs 0 < theta < 1/4, got {theta}")
    if not classify(f).monostable:
        raise ClassificationError(f"ignition approximation needs a monostable nonlinearity, {f.name} is not")
    cutoff = CutoffFamily(theta)

    def f_cut(u):
        u = np.asarray(u, dtype=float)
        return f.f(u) * cutoff(u)

    def df_cut(u):
        u = np.asarray(u, dtype=float)
        return f.df(u) * cutoff(u) + f.f(u) * cutoff.derivative(u)

    params = {"base": f.describe(), "theta": theta}
    return make_nonlinearity(f"{f.name}-cutoff", params, f_cut, df_cut, f.holder, rho=theta, metadata={"base": f})
