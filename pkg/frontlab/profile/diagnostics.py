# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Checks on computed profiles: residual, endpoint limits, tail asymptotics and comparison up to
translation.
"""

import logging
import warnings
from collections import namedtuple
from typing import Optional

import numpy as np
from scipy.stats import linregress

from ..dispersion.speeds import SpeedResult, c1, lambda_of_c
from ..exceptions import InsufficientSamplesError, NoCrossingError, NoPositiveRootError, SmoothnessWarning
from ..kernels.sampled import SampledKernel, is_c1
from .grid import Profile

logger = logging.getLogger(__name__)

TAIL_LEVEL = 1e-3
TAIL_FLOOR = 1e-250
TAIL_MIN_SAMPLES = 30
CRITICAL_TOLERANCE = 1e-6
BOUNDARY_RADII = 3


def residual(profile: Profile, kernel: SampledKernel, f) -> float:
    """
    Sup over the interior nodes of |J * u - u - c D1 u + f(u)|, D1 the centred difference.

    The exterior is held at 0 on the left and 1 on the right; interior nodes are those whose kernel
    support lies inside the grid. Profiles with positive viscosity include eps D2 u.
    """
    u = profile.u
    h = profile.grid.h
    inner = u[1:-1]
    values = (
        kernel.convolve(u, left=0.0, right=1.0)[1:-1]
        - inner
        - profile.c * 0.5 * (u[2:] - u[:-2]) / h
        + f(inner)
    )
    if profile.eps > 0.0:
        values += profile.eps * (u[2:] - 2.0 * inner + u[:-2]) / h**2
    n = max(kernel.n, 1)
    interior = values[n - 1 : len(u) - 1 - n]
    if len(interior) == 0:
        return 0.0
    return float(np.max(np.abs(interior)))


def endpoint_values(profile: Profile, kernel: SampledKernel, f) -> dict:
    """Values of u and f(u) one kernel radius inside either end of the window."""
    n = kernel.n
    left, right = float(profile.u[n]), float(profile.u[-1 - n])
    return {
        "u_left": left,
        "u_right": right,
        "f_left": float(f(np.array([left]))[0]),
        "f_right": float(f(np.array([right]))[0]),
    }


Alignment = namedtuple("Alignment", ["shift", "sup_distance"])
Alignment.__doc__ = """
Named tuple holding the comparison of two profiles up to translation.

Attributes
----------
shift : float
    Position of the level crossing of the second profile minus that of the first.
sup_distance : float
    Sup-norm of the difference on the overlap after translation.
"""


def align_and_compare(first: Profile, second: Profile, level: float = 0.5) -> Alignment:
    """
    Translate ``second`` so that its level crossing matches the one of ``first`` and compare.

    The translated profile is evaluated at the nodes of ``first`` by linear interpolation.

    Raises
    ------
    NoCrossingError
        If either profile does not cross the level or the translated windows do not overlap.
    """
    shift = second.crossing(level) - first.crossing(level)
    points = first.x + shift
    overlap = (points >= second.x[0]) & (points <= second.x[-1])
    if not np.any(overlap):
        raise NoCrossingError("the aligned profiles do not overlap", diagnostics={"shift": shift})
    moved = np.interp(points[overlap], second.x, second.u)
    return Alignment(float(shift), float(np.max(np.abs(first.u[overlap] - moved))))


TailFit = namedtuple("TailFit", ["lam_hat", "log_corrected", "r2", "fit_residual", "samples", "lambda_of_c"])
TailFit.__doc__ = """
Named tuple holding a least-squares fit of the leading tail.

Attributes
----------
lam_hat : float
    Fitted exponential rate.
log_corrected : bool
    Whether log(u / |x|) was fitted instead of log u.
r2 : float
    Coefficient of determination of the linear fit.
fit_residual : float
    Root mean square deviation from the fitted line.
samples : int
    Nodes in the tail window.
lambda_of_c : float or None
    The rate the dispersion relation predicts, None below c1.
"""

FitComparison = namedtuple("FitComparison", ["plain", "corrected"])
FitComparison.__doc__ = """
Named tuple holding the plain and the log-corrected tail fits on the same window.

Attributes
----------
plain, corrected : TailFit
    Fits of log u and of log(u / |x|).
"""


def _tail_window(profile: Profile, kernel: SampledKernel, upper: float) -> np.ndarray:
    x, u = profile.x, profile.u
    clear = x[0] + BOUNDARY_RADII * kernel.radius
    mask = (x >= clear) & (x < -profile.grid.h) & (u < upper) & (u > TAIL_FLOOR)
    count = int(np.count_nonzero(mask))
    if count < TAIL_MIN_SAMPLES:
        raise InsufficientSamplesError(
            f"tail window below {upper} and {BOUNDARY_RADII} kernel radii clear of the boundary has {count} nodes, "
            f"{TAIL_MIN_SAMPLES} are needed",
            diagnostics={"samples": count, "clearance": clear},
        )
    return mask


def _fit(x: np.ndarray, y: np.ndarray, corrected: bool, count: int, expected: Optional[float]) -> TailFit:
    fit = linregress(x, y)
    deviation = y - (fit.intercept + fit.slope * x)
    rms = float(np.sqrt(np.mean(deviation**2)))
    return TailFit(float(fit.slope), corrected, float(fit.rvalue**2), rms, count, expected)


def _expected_rate(kernel, f, c, speed) -> Optional[float]:
    try:
        return float(lambda_of_c(kernel, f, c, speed=speed).lam)
    except NoPositiveRootError:
        return None


def _prepare(profile, kernel, f, c, speed, upper):
    if not is_c1(kernel):
        warnings.warn(
            f"{kernel.family.tag} kernels are not C^1; the tail asymptotics are only indicative",
            SmoothnessWarning,
        )
    c = profile.c if c is None else c
    speed = speed if speed is not None else c1(kernel, f)
    mask = _tail_window(profile, kernel, upper)
    return c, speed, mask


def tail_fit(
    profile: Profile,
    kernel: SampledKernel,
    f,
    c: Optional[float] = None,
    speed: Optional[SpeedResult] = None,
    upper: float = TAIL_LEVEL,
) -> TailFit:
    """
    Fit the exponential rate of the leading tail u ~ exp(lambda x) as x -> -inf.

    The window consists of the nodes with u below ``upper`` that are at least three kernel radii
    clear of the left boundary. At the critical speed |c - c1| <= 1e-6 the tail carries a
    polynomial factor, u ~ |x| exp(lambda x), and log(u / |x|) is fitted instead.

    Parameters
    ----------
    profile : Profile
        A front profile.
    kernel : SampledKernel
        The dispersal kernel.
    f : Nonlinearity
        The reaction term.
    c : float, optional
        The speed, by default that of the profile.
    speed : SpeedResult, optional
        A precomputed c1.
    upper : float, optional
        Largest value of u in the window, by default 1e-3.

    Returns
    -------
    TailFit
        The fitted rate and the rate lambda(c) of the dispersion relation.

    Raises
    ------
    InsufficientSamplesError
        If fewer than 30 nodes qualify.
    """
    c, speed, mask = _prepare(profile, kernel, f, c, speed, upper)
    corrected = abs(c - speed.speed) <= CRITICAL_TOLERANCE
    x, u = profile.x[mask], profile.u[mask]
    y = np.log(u) - np.log(np.abs(x)) if corrected else np.log(u)
    result = _fit(x, y, corrected, len(x), _expected_rate(kernel, f, c, speed))
    logger.info(
        "tail fit: lambda_hat = %.6f (lambda(c) = %s, corrected = %s)", result.lam_hat, result.lambda_of_c, corrected
    )
    return result


def compare_fits(
    profile: Profile,
    kernel: SampledKernel,
    f,
    c: Optional[float] = None,
    speed: Optional[SpeedResult] = None,
    upper: float = TAIL_LEVEL,
) -> FitComparison:
    """Plain and log-corrected tail fits on the same window, to tell u ~ exp from u ~ |x| exp."""
    c, speed, mask = _prepare(profile, kernel, f, c, speed, upper)
    x, u = profile.x[mask], profile.u[mask]
    expected = _expected_rate(kernel, f, c, speed)
    plain = _fit(x, np.log(u), False, len(x), expected)
    corrected = _fit(x, np.log(u) - np.log(np.abs(x)), True, len(x), expected)
    return FitComparison(plain, corrected)
