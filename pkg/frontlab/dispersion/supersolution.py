# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Exponential supersolutions of the front problem and their verifier.

A pair (w, kappa) is a supersolution when J * w - w - kappa w' + f(w) <= 0. The built profile
equals exp(lambda x) for x <= -N and 1 - exp(-delta x) for x >= N; in between a logistic core
sigma(theta(x)) with w(0) = 1/2 is joined to both tails by quintic smoothstep blends, so the join
is C^2, increasing and stays below exp(lambda x).
"""

import logging
from collections import namedtuple
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.optimize import brentq
from scipy.signal import convolve
from scipy.special import expit

from ..exceptions import GridTooNarrowError, SupersolutionJoinError
from ..kernels.sampled import SampledKernel, mgf
from .speeds import speed_of_rate

logger = logging.getLogger(__name__)

DEFECT_TOLERANCE = 1e-8
SUP_SAMPLES = 2000

Jet = Tuple[np.ndarray, np.ndarray, np.ndarray]


def smoothstep(t: np.ndarray) -> Jet:
    """S(t) = 6t^5 - 15t^4 + 10t^3 clipped to [0, 1], with S' and S''."""
    t = np.clip(t, 0.0, 1.0)
    value = t**3 * (10.0 - 15.0 * t + 6.0 * t**2)
    first = 30.0 * t**2 * (1.0 - t) ** 2
    second = 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t)
    return value, first, second


def smoothstep_integral(t: np.ndarray) -> np.ndarray:
    """int_0^t S for t in [0, 1], extended linearly with slope one beyond."""
    inside = np.clip(t, 0.0, 1.0)
    return inside**6 - 3.0 * inside**5 + 2.5 * inside**4 + np.maximum(t - 1.0, 0.0)


def _blend(x, start, width, left: Jet, right: Jet) -> Jet:
    b, b1, b2 = smoothstep((x - start) / width)
    b1, b2 = b1 / width, b2 / width**2
    p, p1, p2 = left
    q, q1, q2 = right
    value = (1.0 - b) * p + b * q
    first = (1.0 - b) * p1 + b * q1 + b1 * (q - p)
    second = (1.0 - b) * p2 + b * q2 + 2.0 * b1 * (q1 - p1) + b2 * (q - p)
    return value, first, second


@dataclass(frozen=True)
class Supersolution:
    """
    C^2 increasing profile joining exp(lambda x) to 1 - exp(-delta x).

    Attributes
    ----------
    lam, delta : float
        Left and right tail rates, lam > delta > 0.
    N : float
        Half width of the join region.
    right_join : float
        Start of the right blend, where 1 - exp(-delta x) dominates the logistic core.
    """

    lam: float
    delta: float
    N: float
    right_join: float

    @property
    def gamma(self) -> float:
        """Rate of the logistic core far to the right."""
        return 0.5 * self.delta

    def _theta(self, x) -> Jet:
        ramp = 0.25 * self.N
        s, s1, _ = smoothstep(x / ramp)
        psi = ramp * smoothstep_integral(np.maximum(x, 0.0) / ramp)
        drop = self.lam - self.gamma
        value = self.lam * x - drop * psi
        first = self.lam - drop * np.where(x > 0.0, s, 0.0)
        second = -drop * np.where(x > 0.0, s1, 0.0) / ramp
        return value, first, second

    def core(self, x) -> Jet:
        theta, theta1, theta2 = self._theta(x)
        sigma = expit(theta)
        slope = sigma * (1.0 - sigma)
        return sigma, slope * theta1, slope * ((1.0 - 2.0 * sigma) * theta1**2 + theta2)

    def left_tail(self, x) -> Jet:
        e = np.exp(self.lam * np.minimum(x, 0.0))
        return e, self.lam * e, self.lam**2 * e

    def right_tail(self, x) -> Jet:
        e = np.exp(-self.delta * np.maximum(x, 0.0))
        return 1.0 - e, self.delta * e, -self.delta**2 * e

    def jet(self, x) -> Jet:
        """w, w' and w'' at the points x."""
        x = np.asarray(x, dtype=float)
        left, core, right = self.left_tail(x), self.core(x), self.right_tail(x)
        left_blend = _blend(x, -self.N, 0.5 * self.N, left, core)
        right_blend = _blend(x, self.right_join, self.N - self.right_join, core, right)
        zones = [x <= -self.N, x < -0.5 * self.N, x <= self.right_join, x < self.N]
        return tuple(
            np.select(zones, [left[k], left_blend[k], core[k], right_blend[k]], default=right[k]) for k in range(3)
        )

    def __call__(self, x):
        return self.jet(x)[0]

    def derivative(self, x):
        return self.jet(x)[1]

    def second_derivative(self, x):
        return self.jet(x)[2]


@dataclass(frozen=True)
class CappedExponential:
    """w = min(exp(lambda x), 1), with the left derivative lambda at x = 0."""

    lam: float

    def __call__(self, x):
        return np.exp(self.lam * np.minimum(np.asarray(x, dtype=float), 0.0))

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x <= 0.0, self.lam * np.exp(self.lam * np.minimum(x, 0.0)), 0.0)


@dataclass(frozen=True)
class ConstantState:
    """w = value everywhere."""

    value: float = 1.0

    def __call__(self, x):
        return np.full(np.shape(x), self.value, dtype=float)

    def derivative(self, x):
        return np.zeros(np.shape(x))


def _nodes(kernel: SampledKernel, x_min: float, x_max: float) -> np.ndarray:
    return np.arange(int(np.floor(x_min / kernel.h)), int(np.ceil(x_max / kernel.h)) + 1) * kernel.h


def _convolve_analytic(kernel: SampledKernel, w, x: np.ndarray) -> np.ndarray:
    """J * w at the nodes x, evaluating w itself on the kernel reach around them."""
    n = kernel.n
    padded = np.concatenate((x[0] - kernel.h * np.arange(n, 0, -1), x, x[-1] + kernel.h * np.arange(1, n + 1)))
    return convolve(w(padded), kernel.weights, mode="valid")


SupersolutionCheck = namedtuple("SupersolutionCheck", ["ok", "worst_violation", "location", "x", "defect"])
SupersolutionCheck.__doc__ = """
Named tuple holding the outcome of a supersolution check.

Attributes
----------
ok : bool
    Whether the defect stays below 1e-8 at every node.
worst_violation : float
    Largest defect J * w - w - kappa w' + f(w).
location : float
    Node of the largest defect.
x, defect : np.ndarray
    Nodes and defect values.
"""


def verify_supersolution(
    w, kappa: float, kernel: SampledKernel, f, x_min: float, x_max: float, tolerance: float = DEFECT_TOLERANCE
) -> SupersolutionCheck:
    """
    Evaluate the defect J * w - w - kappa w' + f(w) on the kernel grid over [x_min, x_max].

    The convolution uses w itself outside the window, so the window only needs to be wide enough
    to contain the kernel support.

    Parameters
    ----------
    w : callable
        Profile with a ``derivative`` method.
    kappa : float
        Candidate speed.
    kernel : SampledKernel
        The dispersal kernel.
    f : Nonlinearity
        The reaction term.
    x_min, x_max : float
        Window of tested nodes.
    tolerance : float, optional
        Largest accepted defect, by default 1e-8.

    Returns
    -------
    SupersolutionCheck
        Flag, worst defect and its location.

    Raises
    ------
    GridTooNarrowError
        If the window is narrower than twice the kernel radius.
    """
    if x_max - x_min < 2.0 * kernel.radius:
        raise GridTooNarrowError(
            f"window [{x_min}, {x_max}] is narrower than twice the kernel radius {kernel.radius}",
            diagnostics={"x_min": x_min, "x_max": x_max, "kernel_radius": kernel.radius},
        )
    x = _nodes(kernel, x_min, x_max)
    values = w(x)
    defect = _convolve_analytic(kernel, w, x) - values - kappa * w.derivative(x) + f(values)
    index = int(np.argmax(defect))
    worst = float(defect[index])
    logger.debug("supersolution defect %.3e at x = %.4f for kappa = %.6f", worst, x[index], kappa)
    return SupersolutionCheck(worst <= tolerance, worst, float(x[index]), x, defect)


SupersolutionResult = namedtuple("SupersolutionResult", ["w", "kappa", "components"])
SupersolutionResult.__doc__ = """
Named tuple holding a supersolution and its speed.

Attributes
----------
w : Supersolution or CappedExponential
    The profile.
kappa : float
    Speed for which (w, kappa) is a supersolution.
components : dict
    The partial bounds kappa_0 .. kappa_3, or the rate for the capped exponential.
"""


def _right_join(lam: float, delta: float, N: float) -> float:
    probe = Supersolution(lam, delta, N, N)

    def dominance(x):
        theta = probe._theta(np.array([x]))[0][0]
        return delta * x - np.logaddexp(0.0, theta)

    if dominance(0.5 * N) >= 0.0:
        return 0.5 * N
    if dominance(N) <= 0.0:
        raise SupersolutionJoinError(
            f"1 - exp(-delta x) does not dominate the logistic core before x = N = {N}; increase N",
            diagnostics={"lambda": lam, "delta": delta, "N": N},
        )
    return brentq(dominance, 0.5 * N, N, xtol=1e-12)


def _sup_ratio(f, s: np.ndarray, scale: np.ndarray) -> float:
    return float(np.max(f(s) / scale))


def build_supersolution(kernel: SampledKernel, f, lam: float, delta: float, N: float) -> SupersolutionResult:
    """
    Build the joined exponential supersolution and its speed kappa.

    kappa is the largest of four bounds: kappa_0 controls f near both states, kappa_1 the left
    exponential tail, kappa_2 the right tail (on the grid near x = N and asymptotically beyond),
    kappa_3 the join region [-N, N] on the kernel grid. kappa_0 and kappa_1 include the viscous term
    w'' at unit viscosity, so the same pair bounds every viscosity in (0, 1].

    Parameters
    ----------
    kernel : SampledKernel
        The dispersal kernel; M(lambda) and M(-delta) must be finite.
    f : Nonlinearity
        The reaction term.
    lam, delta : float
        Tail rates, lam > delta > 0.
    N : float
        Half width of the join region.

    Returns
    -------
    SupersolutionResult
        The profile, kappa and the partial bounds.

    Raises
    ------
    SupersolutionJoinError
        If the rates are invalid or the right tail cannot be joined before N.
    """
    if not lam > delta > 0.0:
        raise SupersolutionJoinError(f"supersolution needs lambda > delta > 0, got lambda = {lam}, delta = {delta}")
    if not N > 0.0:
        raise SupersolutionJoinError(f"supersolution needs N > 0, got {N}")
    w = Supersolution(float(lam), float(delta), float(N), _right_join(lam, delta, N))

    x0 = np.exp(-lam * N)
    small = x0 * np.geomspace(1e-12, 1.0, SUP_SAMPLES)
    near_one = 1.0 - np.exp(-delta * N) * np.geomspace(1e-12, 1.0, SUP_SAMPLES)
    # distance to 1 from the rounded samples, f(s) / (1 - s) loses digits otherwise
    kappa0 = max(
        lam + _sup_ratio(f, small, lam * small),
        delta + _sup_ratio(f, near_one, delta * (1.0 - near_one)),
    )
    kappa1 = (mgf(kernel, lam, "quadrature") - 1.0 + lam * kappa0) / lam

    near = _nodes(kernel, N, N + kernel.radius + kernel.h)
    values, first, _ = w.jet(near)
    near_ratio = (_convolve_analytic(kernel, w, near) - values + delta * (kappa0 - delta) * (1.0 - values)) / first
    asymptote = (1.0 - mgf(kernel, -delta, "quadrature") + delta * (kappa0 - delta)) / delta
    kappa2 = max(float(np.max(near_ratio)), asymptote)

    middle = _nodes(kernel, -N, N)
    values, first, second = w.jet(middle)
    spread = np.abs(_convolve_analytic(kernel, w, middle) - values)
    kappa3 = float(np.max((np.abs(second) + spread + np.maximum(f(values), 0.0)) / first))

    components = {"kappa0": kappa0, "kappa1": kappa1, "kappa2": kappa2, "kappa3": kappa3}
    kappa = max(components.values())
    logger.info("supersolution with lambda = %g, delta = %g, N = %g has kappa = %.6f", lam, delta, N, kappa)
    return SupersolutionResult(w, kappa, components)


def kpp_exponential_supersolution(kernel: SampledKernel, f, lam: float) -> SupersolutionResult:
    """
    The KPP supersolution min(exp(lambda x), 1) with kappa = c(lambda).

    c(lambda) is evaluated with the quadrature MGF, the one the discrete convolution realizes.
    """
    kappa = speed_of_rate(kernel, f, lam, method="quadrature")
    return SupersolutionResult(CappedExponential(float(lam)), float(kappa), {"lambda": float(lam)})
