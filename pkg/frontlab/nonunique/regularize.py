# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Strictly increasing regularizations g_n of g(u) = u - f(u) when g decreases on an interior interval.

The truncation g~ equals g outside the plateau pair [a, b] and the level g(a) on it. The
regularization g_n agrees with g outside [a, b + w] and is the integral of a positive slope inside:
the slope leaves g'(a) over a short ramp, stays at a small constant sigma across the plateau and
blends back into g' over [b, b + w]. The blend width w shrinks like 1/n and sigma is fixed by the
requirement g_n(b + w) = g(b + w), so that

    0 < g_n' everywhere and sup |g_n - g~| <= 1/n.

Both blends use the quintic smoothstep, g_n is continuously differentiable.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid
from scipy.interpolate import CubicHermiteSpline

from ..dispersion.supersolution import smoothstep
from ..exceptions import ClassificationError, InvalidValueError
from ..nonlinearities.families import Nonlinearity, make_nonlinearity
from ..nonlinearities.g_analysis import GAnalysis, g_analysis

logger = logging.getLogger(__name__)

RAMP_SAMPLES = 2001
INVERSE_SAMPLES = 20001
SLOPE_SAMPLES = 1001
INVERSE_NEWTON_STEPS = 4


@dataclass(frozen=True, eq=False)
class RegularizedG:
    """
    The regularization g_n of g(u) = u - f(u) and its inverse.

    Attributes
    ----------
    n : int
        Regularization index.
    base : Nonlinearity
        The reaction term f whose g is regularized.
    plateau : Tuple[float, float]
        The plateau pair (a, b) with g(a) = g(b).
    level : float
        The plateau level g(a).
    width : float
        Blend width w on the right of the plateau.
    slope : float
        The slope sigma of g_n across the plateau.
    sup_distance : float
        sup |g_n - g~| over [0, 1].
    ramp : CubicHermiteSpline
        g_n on [a, b + w].
    table : Tuple[np.ndarray, np.ndarray]
        Samples (u, g_n(u)) seeding the inverse.
    """

    n: int
    base: Nonlinearity
    plateau: Tuple[float, float]
    level: float
    width: float
    slope: float
    sup_distance: float
    ramp: CubicHermiteSpline = field(repr=False)
    table: Tuple[np.ndarray, np.ndarray] = field(repr=False)

    @property
    def end(self) -> float:
        """Right end b + w of the modified range."""
        return self.plateau[1] + self.width

    def _inside(self, u: np.ndarray) -> np.ndarray:
        return (u > self.plateau[0]) & (u < self.end)

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        inner = self.ramp(np.clip(u, self.plateau[0], self.end))
        return np.where(self._inside(u), inner, self.base.g(u))

    def derivative(self, u):
        u = np.asarray(u, dtype=float)
        inner = self.ramp.derivative()(np.clip(u, self.plateau[0], self.end))
        return np.where(self._inside(u), inner, self.base.dg(u))

    def truncated(self, u):
        """The truncation g~, constant g(a) on [a, b]."""
        u = np.asarray(u, dtype=float)
        a, b = self.plateau
        return np.where((u >= a) & (u <= b), self.level, self.base.g(u))

    def inverse(self, y):
        """g_n^-1 by table lookup and Newton steps, values clipped to [0, 1]."""
        y = np.asarray(y, dtype=float)
        u_table, g_table = self.table
        u = np.interp(y, g_table, u_table)
        for _ in range(INVERSE_NEWTON_STEPS):
            u = np.clip(u - (self(u) - y) / self.derivative(u), 0.0, 1.0)
        return u

    def nonlinearity(self) -> Nonlinearity:
        """The regularized reaction term f_n(u) = u - g_n(u)."""

        def f(u):
            return u - self(u)

        def df(u):
            return 1.0 - self.derivative(u)

        params = {"base": self.base.name, "n": self.n}
        return make_nonlinearity(
            f"{self.base.name}-regularized", params, f, df, self.base.holder, metadata={"regularized": self.n}
        )

    def describe(self) -> dict:
        a, b = self.plateau
        return {
            "n": self.n,
            "a": a,
            "b": b,
            "level": self.level,
            "width": self.width,
            "slope": self.slope,
            "sup_distance": self.sup_distance,
        }


def _scalar(function, u: float) -> float:
    return float(function(np.array([u]))[0])


def regularize(f: Nonlinearity, n: int, analysis: Optional[GAnalysis] = None) -> RegularizedG:
    """
    Build the regularization g_n of g(u) = u - f(u).

    Parameters
    ----------
    f : Nonlinearity
        Reaction term whose g increases, decreases and increases again.
    n : int
        Regularization index, n >= 1.
    analysis : GAnalysis, optional
        A precomputed `g_analysis` of f.

    Returns
    -------
    RegularizedG
        g_n with its inverse and distance to the truncation.

    Raises
    ------
    InvalidValueError
        If n is not a positive integer.
    ClassificationError
        If g is monotone, so that nothing needs regularizing, or g_n fails to increase strictly.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidValueError(f"regularization index must be a positive integer, got {n}")
    n = int(n)
    analysis = analysis or g_analysis(f)
    if analysis.plateau is None:
        raise ClassificationError(f"g(u) = u - f(u) of {f.name} is monotone, there is no plateau to regularize")
    a, b = analysis.plateau
    plateau_length = b - a
    g = f.g
    level = _scalar(g, a)
    slope_a = _scalar(f.dg, a)
    if not slope_a > 0.0:
        raise ClassificationError(f"g of {f.name} does not increase at the plateau end a = {a:.6g}")
    steepest = float(np.max(f.dg(np.linspace(b, 1.0, SLOPE_SAMPLES))))
    width = min(plateau_length, 1.0 - b) / (n * max(1.0, steepest))

    right = np.linspace(b, b + width, RAMP_SAMPLES)
    blend_right = smoothstep((right - b) / width)[0]
    deficit = trapezoid(f.dg(right) * (1.0 - blend_right), right)
    width_left = min(deficit / slope_a, 0.5 * plateau_length)

    left = np.linspace(a, a + width_left, RAMP_SAMPLES)
    middle = np.linspace(a + width_left, b, RAMP_SAMPLES)[1:]
    blend_left = smoothstep((left - a) / width_left)[0]
    # the slope is sigma * weight + base on every piece
    nodes = np.concatenate((left, middle, right[1:]))
    weight = np.concatenate((blend_left, np.ones(len(middle)), 1.0 - blend_right[1:]))
    base = np.concatenate((slope_a * (1.0 - blend_left), np.zeros(len(middle)), (f.dg(right) * blend_right)[1:]))
    rise = _scalar(g, b + width) - level
    sigma = (rise - trapezoid(base, nodes)) / trapezoid(weight, nodes)
    if not sigma > 0.0:
        raise ClassificationError(
            f"regularization n = {n} of {f.name} cannot increase strictly across the plateau",
            diagnostics={"n": n, "a": a, "b": b, "sigma": sigma},
        )
    slope = sigma * weight + base
    values = level + cumulative_trapezoid(slope, nodes, initial=0.0)
    ramp = CubicHermiteSpline(nodes, values, slope)

    check = np.concatenate((nodes, 0.5 * (nodes[1:] + nodes[:-1])))
    derivative = ramp.derivative()(check)
    if np.min(derivative) <= 0.0:
        raise ClassificationError(
            f"regularization n = {n} of {f.name} is not strictly increasing",
            diagnostics={"n": n, "min_slope": float(np.min(derivative))},
        )
    truncation = np.where(check <= b, level, g(check))
    sup_distance = float(np.max(np.abs(ramp(check) - truncation)))

    u_table = np.union1d(np.linspace(0.0, 1.0, INVERSE_SAMPLES), nodes)
    inside = (u_table > a) & (u_table < nodes[-1])
    table = (u_table, np.where(inside, ramp(np.clip(u_table, a, nodes[-1])), g(u_table)))
    regularized = RegularizedG(n, f, (a, b), level, width, float(sigma), sup_distance, ramp, table)
    logger.debug("g_%d: blend width %.3e, plateau slope %.3e, sup distance %.3e", n, width, sigma, sup_distance)
    return regularized
