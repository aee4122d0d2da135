# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Linear dispersion relation of the front problem and the speeds derived from it.

For the rate lambda > 0 the linearization at u = 0 of J * u - u - c u' + f(u) = 0 admits
u = exp(lambda x) exactly when c equals c(lambda) = (M(lambda) + f'(0) - 1) / lambda with
M(lambda) = int J(-x) exp(lambda x) dx. The minimal speed of KPP fronts is the infimum of c over
lambda > 0.

This module provides:
- `Orientation`: which side of the kernel the exponential moment is taken on.
- `speed_of_rate`, `dispersion_curve`: c(lambda) pointwise and on a log grid.
- `c1`, `c_star_left`: minimal speeds of rightward and leftward facing fronts.
- `lambda_of_c`: minimal positive root of the dispersion deficit.
- `speed_bracket`: a priori bound on ignition speeds.
- `jensen_lower_bound`, `local_speed_shift`: moment bounds and the drift of the local analogue.
"""

import logging
import warnings
from collections import namedtuple
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional, Union

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from ..exceptions import ClassificationError, NoFiniteSpeedError, NoPositiveRootError, UnattainedInfimumWarning
from ..kernels.sampled import SampledKernel, lambda_evaluable_max, mgf, mollison_check, reflect
from ..nonlinearities.classify import classify

logger = logging.getLogger(__name__)

LAMBDA_MIN = 1e-3
CURVE_POINTS = 512
DOUBLE_ROOT_TOLERANCE = 1e-6
BELOW_C1_TOLERANCE = 1e-9


class Orientation(Enum):
    FORWARD = "forward"
    """M(lambda) = int J(-x) exp(lambda x) dx, giving c1."""
    REFLECTED = "reflected"
    """M(lambda) = int J(x) exp(lambda x) dx, giving the leftward speed c_*."""


class Multiplicity(Enum):
    SIMPLE = "simple"
    """The deficit crosses zero transversally."""
    DOUBLE = "double"
    """The deficit touches zero at its minimum, c = c1."""


def _oriented(kernel: SampledKernel, orientation: Orientation) -> SampledKernel:
    return kernel if orientation is Orientation.FORWARD else reflect(kernel)


def speed_of_rate(
    kernel: SampledKernel, f, lam, orientation: Orientation = Orientation.FORWARD, method: str = "quadrature"
) -> Union[float, np.ndarray]:
    """c(lambda) = (M(lambda) + f'(0) - 1) / lambda for a scalar or an array of rates."""
    oriented = _oriented(kernel, orientation)
    lam_array = np.atleast_1d(np.asarray(lam, dtype=float))
    values = np.array([(mgf(oriented, rate, method) + (f.fprime0 - 1.0)) / rate for rate in lam_array])
    return float(values[0]) if np.ndim(lam) == 0 else values


@dataclass(frozen=True)
class DispersionCurve:
    """
    Samples of c(lambda) on a log-spaced grid.

    Attributes
    ----------
    lam : np.ndarray
        Rates, log spaced in [lambda_min, lambda_max].
    speed : np.ndarray
        c(lambda) at the rates.
    orientation : Orientation
        Side of the kernel the exponential moment is taken on.
    """

    lam: np.ndarray
    speed: np.ndarray
    orientation: Orientation

    def to_csv(self, path: Union[str, Path]) -> None:
        """Write the columns lambda, c_of_lambda."""
        np.savetxt(
            path, np.column_stack((self.lam, self.speed)), delimiter=",", header="lambda,c_of_lambda", comments=""
        )


def dispersion_curve(
    kernel: SampledKernel,
    f,
    orientation: Orientation = Orientation.FORWARD,
    lam_max: Optional[float] = None,
    points: int = CURVE_POINTS,
    method: str = "quadrature",
) -> DispersionCurve:
    """
    Sample c(lambda) on ``points`` log-spaced rates in [1e-3, lam_max].

    ``lam_max`` defaults to the largest rate at which M(lambda) is evaluable for the oriented kernel.
    """
    if lam_max is None:
        lam_max = lambda_evaluable_max(_oriented(kernel, orientation))
    lam = np.geomspace(LAMBDA_MIN, lam_max, points)
    return DispersionCurve(lam, speed_of_rate(kernel, f, lam, orientation, method), orientation)


SpeedResult = namedtuple("SpeedResult", ["speed", "lambda_star", "attained", "lambda_max", "curve"])
SpeedResult.__doc__ = """
Named tuple holding a minimal speed obtained from the dispersion relation.

Attributes
----------
speed : float
    The infimum of c(lambda) over (0, lambda_max].
lambda_star : float
    The minimizing rate, lambda_max when the infimum is not attained.
attained : bool
    False when the minimum sits at the lambda_max boundary.
lambda_max : float
    Largest rate that was considered.
curve : DispersionCurve
    The coarse scan the minimization was seeded with.
"""


def _strict_minimum(speed: np.ndarray, index: int) -> bool:
    return bool(speed[index] < speed[index - 1] and speed[index] < speed[index + 1])


def c1(
    kernel: SampledKernel, f, orientation: Orientation = Orientation.FORWARD, method: str = "quadrature"
) -> SpeedResult:
    """
    Minimal speed c1 = inf over lambda > 0 of (M(lambda) + f'(0) - 1) / lambda.

    A scan over 512 log-spaced rates seeds a golden-section refinement. When the smallest sample
    is the last one, or the samples tie around it, the infimum is not attained within the evaluable
    range; the smallest sampled value is returned with ``attained=False`` and an
    `UnattainedInfimumWarning`.

    Parameters
    ----------
    kernel : SampledKernel
        The dispersal kernel.
    f : Nonlinearity
        Reaction term with f'(0) > 0.
    orientation : Orientation, optional
        FORWARD for c1, REFLECTED for the leftward speed, by default FORWARD.
    method : str, optional
        MGF evaluation method passed to `mgf`, by default 'quadrature'.

    Returns
    -------
    SpeedResult
        Speed, minimizer, attained flag and the sampled curve.

    Raises
    ------
    ClassificationError
        If f'(0) <= 0.
    NoFiniteSpeedError
        If the kernel violates the Mollison condition on the relevant side.
    """
    if not f.fprime0 > 0.0:
        raise ClassificationError(f"the dispersion relation needs f'(0) > 0, got {f.fprime0} for {f.name}")
    oriented = _oriented(kernel, orientation)
    mollison = mollison_check(oriented)
    if not mollison.satisfied:
        raise NoFiniteSpeedError(
            mollison.diagnosis + "; run the evolve command to observe the accelerating front",
            diagnostics={"kernel": kernel.family.tag, "orientation": orientation.value},
        )
    curve = dispersion_curve(kernel, f, orientation, method=method)
    # last of equal minima, M(lambda) underflowing to zero leaves a flat run up to lambda_max
    index = len(curve.speed) - 1 - int(np.argmin(curve.speed[::-1]))
    lam_max = float(curve.lam[-1])
    index = max(index, 1)
    if index == len(curve.lam) - 1 or not _strict_minimum(curve.speed, index):
        warnings.warn(
            f"c(lambda) has no interior minimum up to lambda_max = {lam_max:.4g}; reporting the boundary value",
            UnattainedInfimumWarning,
        )
        return SpeedResult(float(np.min(curve.speed)), lam_max, False, lam_max, curve)
    bracket = (curve.lam[index - 1], curve.lam[index], curve.lam[index + 1])
    result = minimize_scalar(
        lambda rate: speed_of_rate(kernel, f, rate, orientation, method), bracket=bracket, method="golden", tol=1e-10
    )
    logger.debug("c1 = %.10f at lambda* = %.8f (%s)", result.fun, result.x, orientation.value)
    return SpeedResult(float(result.fun), float(result.x), True, lam_max, curve)


def c_star_left(kernel: SampledKernel, f, method: str = "quadrature") -> SpeedResult:
    """Minimal speed of leftward facing fronts, c1 of the reflected kernel."""
    return c1(kernel, f, Orientation.REFLECTED, method)


LambdaRoot = namedtuple("LambdaRoot", ["lam", "multiplicity", "c1"])
LambdaRoot.__doc__ = """
Named tuple holding the minimal positive root of the dispersion deficit.

Attributes
----------
lam : float
    lambda(c), the exponential decay rate of the leading tail.
multiplicity : Multiplicity
    DOUBLE when c equals c1 within 1e-6.
c1 : SpeedResult
    The minimal speed the root was bracketed with.
"""


def deficit(kernel: SampledKernel, f, c: float, lam: float, method: str = "quadrature") -> float:
    """phi(lambda) = -c lambda + M(lambda) + f'(0) - 1."""
    return mgf(kernel, lam, method) + (f.fprime0 - 1.0) - c * lam


def lambda_of_c(kernel: SampledKernel, f, c: float, method: str = "quadrature", speed: Optional[SpeedResult] = None):
    """
    Minimal positive root lambda(c) of phi(lambda) = -c lambda + M(lambda) + f'(0) - 1.

    phi is convex with phi(0+) = f'(0) > 0 and phi(lambda*) = lambda* (c1 - c), so for c > c1 the
    root is bracketed by [1e-8, lambda*] and unique there.

    Parameters
    ----------
    kernel : SampledKernel
        The dispersal kernel.
    f : Nonlinearity
        Reaction term with f'(0) > 0.
    c : float
        The speed, c >= c1 - 1e-9.
    method : str, optional
        MGF evaluation method, by default 'quadrature'.
    speed : SpeedResult, optional
        A precomputed c1 for the same kernel, nonlinearity and method.

    Returns
    -------
    LambdaRoot
        The root and its multiplicity.

    Raises
    ------
    NoPositiveRootError
        If c < c1, where no front with speed c exists.
    """
    speed = speed if speed is not None else c1(kernel, f, method=method)
    if c < speed.speed - BELOW_C1_TOLERANCE:
        raise NoPositiveRootError(
            f"c = {c} lies below c1 = {speed.speed:.8f}: the dispersion deficit has no positive root",
            diagnostics={"c": c, "c1": speed.speed},
        )
    if abs(c - speed.speed) <= DOUBLE_ROOT_TOLERANCE:
        return LambdaRoot(speed.lambda_star, Multiplicity.DOUBLE, speed)
    root = brentq(lambda lam: deficit(kernel, f, c, lam, method), 1e-8, speed.lambda_star, xtol=1e-14)
    return LambdaRoot(float(root), Multiplicity.SIMPLE, speed)


def speed_bracket(kernel: SampledKernel, f) -> float:
    """
    Bound nu / min(rho, 1 - rho) on the speed of an ignition front, nu = int |z| J(z) dz.

    Raises
    ------
    ClassificationError
        If f is not an ignition term with threshold in (0, 1).
    """
    classification = classify(f)
    if not classification.ignition or not 0.0 < classification.rho < 1.0:
        raise ClassificationError(f"speed bracket needs an ignition nonlinearity, {f.name} is not one")
    rho = classification.rho
    return kernel.nu / min(rho, 1.0 - rho)


def jensen_lower_bound(kernel: SampledKernel, f) -> float:
    """
    Moment lower bound on c1.

    For symmetric kernels M(lambda) >= 1 + alpha lambda^2, so c1 >= 2 sqrt(alpha f'(0)) > 0. In
    general M(lambda) >= exp(beta lambda) >= 1 + beta lambda gives c1 >= beta.
    """
    if kernel.family.is_symmetric:
        return 2.0 * np.sqrt(kernel.alpha * f.fprime0)
    return kernel.beta


def local_speed_shift(kernel: SampledKernel) -> float:
    """Drift beta of the local analogue: J_eps * u - u ~ eps beta u' + eps^2 alpha u''."""
    return kernel.beta
