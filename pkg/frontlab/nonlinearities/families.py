# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Reaction terms f(u) of the traveling front problem.

This module provides:
- `Nonlinearity`: immutable bundle of the evaluators f, f' and the data derived from them.
- `HolderData`: the constants (A, m, delta, gamma) of the hypotheses on f near zero.
- `logistic`, `cubic`, `ignition`, `spline`: the shipped families.
- `shipped_spline`: the KPP spline whose g(u) = u - f(u) is not monotone.
- `nonlinearity_from_dict`: construction from a configuration block.
"""

from collections import namedtuple
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Sequence

import numpy as np
from scipy.interpolate import CubicHermiteSpline, PchipInterpolator

from ..exceptions import ClassificationError

LIPSCHITZ_SAMPLES = 10001

HolderData = namedtuple("HolderData", ["A", "m", "delta", "gamma"])
HolderData.__doc__ = """
Named tuple holding the constants of the hypotheses on f near the unstable state.

Attributes
----------
A : float
    Positive constant with |u - f(u)| >= A u^m near zero.
m : float
    Exponent m >= 1 of the same bound.
delta : float
    Decay rate of 1 - u near the stable state, used for supersolution joins.
gamma : float
    Hoelder exponent of f' near zero, in (0, 1].
"""


def default_holder(fprime0: float) -> HolderData:
    """Family default constants: m = 1 with A = |1 - f'(0)| unless f'(0) = 1."""
    if abs(1.0 - fprime0) > 1e-12:
        return HolderData(abs(1.0 - fprime0), 1.0, 0.5, 1.0)
    return HolderData(1.0, 2.0, 0.5, 1.0)


def check_holder(holder: HolderData) -> HolderData:
    if not holder.A > 0.0:
        raise ClassificationError(f"Hoelder constant A must be positive, got {holder.A}")
    if not holder.m >= 1.0:
        raise ClassificationError(f"Hoelder exponent m must be at least 1, got {holder.m}")
    if not holder.delta > 0.0:
        raise ClassificationError(f"decay rate delta must be positive, got {holder.delta}")
    if not 0.0 < holder.gamma <= 1.0:
        raise ClassificationError(f"Hoelder exponent gamma must lie in (0, 1], got {holder.gamma}")
    return holder


@dataclass(frozen=True, eq=False)
class Nonlinearity:
    """
    Reaction term with its derivative and the scalars the front theory needs.

    Attributes
    ----------
    name : str
        Family name, used in reports and output.
    params : dict
        Family parameters as plain data.
    f, df : Callable[[np.ndarray], np.ndarray]
        Vectorized evaluators of f and f' on [-0.1, 1.1].
    fprime0, fprime1 : float
        f'(0) and f'(1).
    holder : HolderData
        Constants of the hypotheses near zero.
    rho : float or None
        Ignition threshold when f vanishes on [0, rho].
    """

    name: str
    params: Dict[str, Any]
    f: Callable[[np.ndarray], np.ndarray]
    df: Callable[[np.ndarray], np.ndarray]
    fprime0: float
    fprime1: float
    holder: HolderData
    rho: Optional[float] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __call__(self, u):
        return self.f(np.asarray(u, dtype=float))

    def g(self, u):
        """g(u) = u - f(u), the stationary relation J * u = g(u) at speed zero."""
        u = np.asarray(u, dtype=float)
        return u - self.f(u)

    def dg(self, u):
        u = np.asarray(u, dtype=float)
        return 1.0 - self.df(u)

    def lipschitz(self) -> float:
        """Sampled Lipschitz constant of f on [0, 1]."""
        u = np.linspace(0.0, 1.0, LIPSCHITZ_SAMPLES)
        return float(np.max(np.abs(self.df(u))))

    def describe(self) -> dict:
        return {"family": self.name, "params": self.params, "holder": dict(self.holder._asdict())}


def make_nonlinearity(name, params, f, df, holder=None, rho=None, metadata=None) -> Nonlinearity:
    """Bundle evaluators with their end slopes and validated constants."""
    fprime0 = float(df(np.array([0.0]))[0])
    fprime1 = float(df(np.array([1.0]))[0])
    if isinstance(holder, dict):
        holder = HolderData(**holder)
    holder = check_holder(holder or default_holder(fprime0))
    return Nonlinearity(name, params, f, df, fprime0, fprime1, holder, rho, metadata or {})


def logistic(r: float = 1.0, holder: Optional[HolderData] = None) -> Nonlinearity:
    """Logistic (Fisher-KPP) term r u (1 - u) with f'(0) = r."""
    if not r > 0.0:
        raise ClassificationError(f"logistic rate must be positive, got {r}")

    def f(u):
        return r * u * (1.0 - u)

    def df(u):
        return r * (1.0 - 2.0 * u)

    return make_nonlinearity("logistic", {"r": r}, f, df, holder)


def cubic(r: float = 1.0, k: float = 0.0, holder: Optional[HolderData] = None) -> Nonlinearity:
    """
    Cubic term r u (1 - u)(1 + k u).

    KPP for k <= 1; for larger k the term grows faster than its linearization in the interior.
    """
    if not r > 0.0:
        raise ClassificationError(f"cubic rate must be positive, got {r}")
    if not k > -1.0:
        raise ClassificationError(f"cubic term needs k > -1 to stay positive on (0, 1), got {k}")

    def f(u):
        return r * u * (1.0 - u) * (1.0 + k * u)

    def df(u):
        return r * (1.0 + 2.0 * (k - 1.0) * u - 3.0 * k * u**2)

    return make_nonlinearity("cubic", {"r": r, "k": k}, f, df, holder)


def ignition(rho: float = 0.3, r: float = 1.0, holder: Optional[HolderData] = None) -> Nonlinearity:
    """Ignition term r (u - rho)(1 - u) for u > rho, zero below the threshold."""
    if not 0.0 < rho < 1.0:
        raise ClassificationError(f"ignition threshold must lie in (0, 1), got {rho}")
    if not r > 0.0:
        raise ClassificationError(f"ignition rate must be positive, got {r}")

    def f(u):
        return np.where(u > rho, r * (u - rho) * (1.0 - u), 0.0)

    def df(u):
        return np.where(u > rho, r * (1.0 + rho - 2.0 * u), 0.0)

    return make_nonlinearity("ignition", {"rho": rho, "r": r}, f, df, holder, rho=rho)


def spline(
    u: Sequence[float], values: Sequence[float], slopes: Optional[Sequence[float]] = None, holder=None
) -> Nonlinearity:
    """
    Cubic spline through control points (u_i, f_i) spanning [0, 1].

    With ``slopes`` the spline is the C^1 Hermite interpolant; without, the monotone piecewise
    cubic (PCHIP) interpolant. Outside [0, 1] the spline is extended linearly with the end slopes.
    """
    u = np.asarray(u, dtype=float)
    values = np.asarray(values, dtype=float)
    if u.ndim != 1 or u.shape != values.shape or len(u) < 3:
        raise ClassificationError("spline needs at least three control points with matching values")
    if np.any(np.diff(u) <= 0.0):
        raise ClassificationError("spline control points must be strictly increasing")
    if abs(u[0]) > 1e-12 or abs(u[-1] - 1.0) > 1e-12:
        raise ClassificationError(f"spline control points must span [0, 1], got [{u[0]}, {u[-1]}]")
    if slopes is None:
        interpolant = PchipInterpolator(u, values, extrapolate=False)
    else:
        slopes = np.asarray(slopes, dtype=float)
        if slopes.shape != u.shape:
            raise ClassificationError("spline needs one slope per control point")
        interpolant = CubicHermiteSpline(u, values, slopes, extrapolate=False)
    derivative = interpolant.derivative()
    s0, s1 = float(derivative(0.0)), float(derivative(1.0))
    f0, f1 = float(interpolant(0.0)), float(interpolant(1.0))

    def f(x):
        x = np.asarray(x, dtype=float)
        inside = np.clip(x, 0.0, 1.0)
        return np.where(x < 0.0, f0 + s0 * x, np.where(x > 1.0, f1 + s1 * (x - 1.0), interpolant(inside)))

    def df(x):
        x = np.asarray(x, dtype=float)
        inside = np.clip(x, 0.0, 1.0)
        return np.where(x < 0.0, s0, np.where(x > 1.0, s1, derivative(inside)))

    params = {"u": u.tolist(), "f": values.tolist()}
    if slopes is not None:
        params["df"] = slopes.tolist()
    return make_nonlinearity("spline", params, f, df, holder)


# KPP with f'(0) = 0.6 < 1 whose g(u) = u - f(u) decreases on an interior interval
SHIPPED_SPLINE = {
    "u": [0.0, 0.4, 0.55, 0.7, 1.0],
    "f": [0.0, 0.12, 0.24, 0.33, 0.0],
    "df": [0.6, 0.4, 1.5, 0.2, -1.5],
}


def shipped_spline() -> Nonlinearity:
    return spline(SHIPPED_SPLINE["u"], SHIPPED_SPLINE["f"], SHIPPED_SPLINE["df"])


FAMILIES = {"logistic": logistic, "cubic": cubic, "ignition": ignition}


def nonlinearity_from_dict(description: dict) -> Nonlinearity:
    """
    Create a nonlinearity from its configuration block.

    Parameters
    ----------
    description : dict
        Mapping with the keys 'family', 'params' and optionally 'holder' (A, m, delta, gamma).
        Splines take params 'u', 'f' and optionally 'df'.

    Returns
    -------
    Nonlinearity
        The reaction term.

    Raises
    ------
    ClassificationError
        If the family is unknown or its parameters are invalid.
    """
    tag = description.get("family")
    params = dict(description.get("params", {}))
    holder = description.get("holder")
    if holder is not None:
        try:
            holder = HolderData(**holder)
        except TypeError as exc:
            raise ClassificationError(f"Hoelder block needs the keys A, m, delta, gamma, got {sorted(holder)}") from exc
    if tag == "spline":
        if not params:
            params = dict(SHIPPED_SPLINE)
        try:
            return spline(params["u"], params["f"], params.get("df"), holder=holder)
        except KeyError as exc:
            raise ClassificationError("spline nonlinearity needs the params 'u' and 'f'") from exc
    try:
        factory = FAMILIES[tag]
    except KeyError as exc:
        raise ClassificationError(f"Unknown nonlinearity family {tag}. Known: {', '.join(FAMILIES)}, spline") from exc
    try:
        return factory(holder=holder, **params)
    except TypeError as exc:
        raise ClassificationError(f"Invalid parameters {sorted(params)} for nonlinearity family {tag}") from exc
