# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Monotonicity analysis of g(u) = u - f(u).

At speed zero a front solves J * u = g(u). When g decreases on an interior interval the relation
cannot be inverted there, and the plateau pair (a, b) with g(a) = g(b) marks where a stationary
front may jump.
"""

import logging
from collections import namedtuple
from typing import List, Tuple

import numpy as np
from scipy.optimize import brentq

from ..exceptions import MultiWellError

logger = logging.getLogger(__name__)

SAMPLES = 10_001
XTOL = 1e-10

GAnalysis = namedtuple("GAnalysis", ["turning_points", "intervals", "plateau", "level", "peak", "trough"])
GAnalysis.__doc__ = """
Named tuple holding the monotonicity structure of g(u) = u - f(u) on [0, 1].

Attributes
----------
turning_points : List[float]
    Interior sign changes of g'.
intervals : List[Tuple[float, float, str]]
    Maximal intervals labelled 'increasing' or 'decreasing'.
plateau : Tuple[float, float] or None
    The pair (a, b) with g(a) = g(b), None when g is monotone.
level : float or None
    The common value g(a) = g(b).
peak, trough : float or None
    Interior maximum and minimum of g bounding the decreasing interval.
"""


def _turning_points(f, samples: int) -> List[float]:
    u = np.linspace(0.0, 1.0, samples)
    slope = f.dg(u)
    sign = np.sign(slope)
    points = []
    last_index, last_sign = None, 0.0
    for index, value in enumerate(sign):
        if value == 0.0:
            continue
        if last_sign != 0.0 and value != last_sign:
            lo, hi = u[last_index], u[index]
            points.append(brentq(lambda s: float(f.dg(np.array([s]))[0]), lo, hi, xtol=XTOL))
        last_index, last_sign = index, value
    return points


def g_analysis(f, samples: int = SAMPLES) -> GAnalysis:
    """
    Locate the monotone pieces of g and the plateau pair of a single decreasing interval.

    Sign changes of g' = 1 - f' are bracketed on a grid of ``samples`` points and refined with
    Brent's method. Zeros of g' at the ends of [0, 1] are not sign changes. When g increases,
    decreases and increases again, the plateau level is the midpoint between the interior maximum
    g(peak) and minimum g(trough), and a, b are its preimages on the increasing flanks.

    Parameters
    ----------
    f : Nonlinearity
        The reaction term; its derivative is required.
    samples : int, optional
        Number of sample points on [0, 1], by default 10 001.

    Returns
    -------
    GAnalysis
        Turning points, monotone intervals and the plateau pair (None when g is monotone).

    Raises
    ------
    MultiWellError
        If g decreases on more than one interval or starts decreasing at 0.
    """
    points = _turning_points(f, samples)
    edges = [0.0] + points + [1.0]
    probe = np.array([0.5 * (lo + hi) for lo, hi in zip(edges[:-1], edges[1:])])
    labels = ["increasing" if value > 0.0 else "decreasing" for value in f.dg(probe)]
    intervals: List[Tuple[float, float, str]] = list(zip(edges[:-1], edges[1:], labels))
    decreasing = [interval for interval in intervals if interval[2] == "decreasing"]
    if not decreasing:
        logger.debug("g is monotone for %s", f.name)
        return GAnalysis(points, intervals, None, None, None, None)
    if len(decreasing) > 1 or labels[0] != "increasing" or labels[-1] != "increasing":
        raise MultiWellError(
            f"g(u) = u - f(u) of {f.name} has the monotonicity pattern {labels};"
            + " only a single interior decreasing interval is supported",
            diagnostics={"turning_points": points, "pattern": labels},
        )
    peak, trough = decreasing[0][0], decreasing[0][1]
    g_peak, g_trough = float(f.g(np.array([peak]))[0]), float(f.g(np.array([trough]))[0])
    level = 0.5 * (g_peak + g_trough)

    def offset(s):
        return float(f.g(np.array([s]))[0]) - level

    a = brentq(offset, 0.0, peak, xtol=1e-14)
    b = brentq(offset, trough, 1.0, xtol=1e-14)
    logger.debug("plateau of %s: a = %.6f, b = %.6f, level %.6f", f.name, a, b, level)
    return GAnalysis(points, intervals, (a, b), level, peak, trough)
