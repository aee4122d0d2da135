# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Fronts pinned at a point, u(position) = level.

Two controls keep the front in place while the monotone sweeps converge:

- TAIL: the speed is given and u decays like exp(lambda x) beyond the left end, lambda the
  smallest positive root of eps lambda^2 + M(lambda) + f'(0) - 1 - c lambda. Every sweep is
  followed by a translation that moves the level crossing back to the pinned position; the
  amplitude of the exterior is the remaining unknown of the Newton refinement.
- SPEED: the boundary value at -r is given and every sweep picks the speed for which the swept
  profile meets the pin, as for ignition fronts.

This module provides:
- `tail_rate`, `TailExterior`, `tail_exterior`: the exponential left exterior.
- `front_guess`: a logistic start profile through the pinned point.
- `Control`: the two pinning controls.
- `solve_pinned`: sweeps with pinning, bordered Newton refinement and a centred polish.
"""

import logging
from collections import namedtuple
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from ..exceptions import (
    ClassificationError,
    InvalidValueError,
    IterationBudgetError,
    MGFOutOfRangeError,
    NonexistenceError,
    NoSignChangeError,
    SchemeViolationError,
)
from ..kernels.sampled import SampledKernel, lambda_evaluable_max, mgf
from ..util.convolution import exterior_tail
from .grid import Grid, Profile, crossing
from .truncated import (
    ORDER_TOLERANCE,
    STALL_WINDOW,
    BoundaryCorrections,
    IterationReport,
    Scheme,
    SolverSettings,
    bordered_newton,
    boundary_corrections,
    pin_weights,
    settled,
    shifted_solve,
    stalled,
    sweep_core,
)

logger = logging.getLogger(__name__)

RATE_MIN = 1e-3
RATE_POINTS = 512
RESET_LEVEL = 1e-3
INITIAL_RATE = 1.0
CLAMP_LIMIT = 50
LOCAL_WIDTH = 0.05
SPEED_XTOL = 1e-13
TOUCH_TOLERANCE = 1e-9


def tail_rate(kernel: SampledKernel, f, c: float, eps: float = 0.0) -> float:
    """
    Smallest positive root of eps lambda^2 + M(lambda) + f'(0) - 1 - c lambda.

    The left-hand side is convex and equals f'(0) > 0 at lambda = 0; a scan over 512 log-spaced
    rates up to the evaluable maximum finds the first nonpositive value, Brent's method the root. At
    the minimal speed, where the root is double, the refined minimum within 1e-9 of zero is taken.

    Raises
    ------
    ClassificationError
        If f'(0) <= 0.
    NonexistenceError
        If there is no positive root, the speed is below the minimal speed of the viscous problem.
    """
    if not f.fprime0 > 0.0:
        raise ClassificationError(f"an exponential tail needs f'(0) > 0, got {f.fprime0} for {f.name}")

    def deficit(lam: float) -> float:
        return eps * lam**2 + mgf(kernel, lam) + (f.fprime0 - 1.0) - c * lam

    lam_max = lambda_evaluable_max(kernel)
    rates, values = [], []
    if lam_max > RATE_MIN:
        for lam in np.geomspace(RATE_MIN, lam_max, RATE_POINTS):
            try:
                value = deficit(lam)
            except MGFOutOfRangeError:
                break
            if value <= 0.0:
                return float(brentq(deficit, rates[-1] if rates else 0.0, lam, xtol=1e-14))
            rates.append(lam)
            values.append(value)
    if len(rates) >= 3:
        # at the minimal speed the root is double and the samples only approach zero
        k = min(max(int(np.argmin(values)), 1), len(rates) - 2)
        bounds = (rates[k - 1], rates[k + 1])
        touch = minimize_scalar(deficit, bounds=bounds, method="bounded", options={"xatol": 1e-12})
        if touch.fun <= TOUCH_TOLERANCE:
            return float(touch.x)
    raise NonexistenceError(
        f"eps lambda^2 + M(lambda) + f'(0) - 1 = c lambda has no positive root for c = {c}, eps = {eps}; "
        "no front with this speed exists",
        diagnostics={"c": c, "eps": eps},
    )


TailExterior = namedtuple("TailExterior", ["rate", "masses"])
TailExterior.__doc__ = """
Named tuple holding the exponential exterior beyond the left end of a window.

Attributes
----------
rate : float
    Decay rate lambda of u(x) = u(-r) exp(lambda (x + r)) for x < -r.
masses : np.ndarray
    Contribution of the exterior to J * u at every node, per unit boundary value.
"""


def tail_exterior(kernel: SampledKernel, grid: Grid, rate: float) -> TailExterior:
    grid.check_kernel(kernel)
    return TailExterior(float(rate), exterior_tail(kernel.weights, grid.size, rate * grid.h))


def front_guess(grid: Grid, theta: float, level: float, rate: float, position: float = 0.0) -> np.ndarray:
    """Logistic profile from theta to 1 with rate ``rate`` that crosses ``level`` at ``position``."""
    share = (level - theta) / (1.0 - theta)
    centre = position + np.log((1.0 - share) / share) / rate
    u = theta + (1.0 - theta) / (1.0 + np.exp(-rate * (grid.x - centre)))
    u[0], u[-1] = theta, 1.0
    return u


def _reset_tail(x: np.ndarray, u: np.ndarray, rate: float) -> np.ndarray:
    """Replace the values below 1e-3 left of the front by the exponential through the first node above."""
    above = np.flatnonzero(u >= RESET_LEVEL)
    if len(above) == 0 or above[0] == 0:
        return u
    k = above[0]
    u = u.copy()
    u[:k] = u[k] * np.exp(rate * (x[:k] - x[k]))
    return u


def _translate(x: np.ndarray, u: np.ndarray, shift: float, rate: float) -> np.ndarray:
    """Values of u(x + shift), continued by the exponential on the left and by 1 on the right."""
    points = x + shift
    moved = np.interp(points, x, u, right=1.0)
    outside = points < x[0]
    moved[outside] = u[0] * np.exp(rate * (points[outside] - x[0]))
    moved[-1] = 1.0
    return moved


class Control(Enum):
    TAIL = "tail"
    """The speed is fixed, the front is held by translation and the exterior amplitude."""
    SPEED = "speed"
    """The boundary value at -r is fixed, the speed holds the front."""


class _SpeedPin:
    """Speed for which one sweep from a fixed right-hand side meets the pin."""

    def __init__(self, eps, h, shift, theta, pinned, level, bracket):
        self.eps, self.h, self.shift, self.theta = eps, h, shift, theta
        self.a, self.t = pinned
        self.level = level
        self.bracket = bracket
        self.clamped = 0

    def solve(self, core: np.ndarray, c: float) -> np.ndarray:
        return shifted_solve(core, c, self.eps, self.h, self.shift, self.theta, 1.0)

    def mismatch(self, core: np.ndarray, c: float) -> float:
        v = self.solve(core, c)
        return float((1.0 - self.t) * v[self.a - 1] + self.t * v[self.a] - self.level)

    def __call__(self, core: np.ndarray, c: float, width: float) -> float:
        low, high = self.bracket
        local = (max(low, c - width), min(high, c + width))
        for lower, upper in (local, self.bracket):
            g_lower, g_upper = self.mismatch(core, lower), self.mismatch(core, upper)
            if g_lower * g_upper <= 0.0:
                self.clamped = 0
                if g_lower == 0.0:
                    return lower
                if g_upper == 0.0:
                    return upper
                return float(brentq(lambda speed: self.mismatch(core, speed), lower, upper, xtol=SPEED_XTOL))
        # u(position) decreases in c; all too slow or all too fast
        self.clamped += 1
        return low if g_lower < 0.0 else high


def _check_arguments(grid, eps, theta, level, position, tail, bracket) -> Tuple[Control, Tuple[int, float]]:
    if (tail is None) == (bracket is None):
        raise InvalidValueError("a pinned solve needs either a tail exterior or a speed bracket")
    if not eps >= 0.0:
        raise InvalidValueError(f"viscosity must be nonnegative, got {eps}")
    if not 0.0 <= theta < 0.5:
        raise InvalidValueError(f"boundary value theta must lie in [0, 1/2), got {theta}")
    if tail is not None and theta != 0.0:
        raise InvalidValueError(f"an exponential exterior decays to 0, got theta = {theta}")
    if not theta < level < 1.0:
        raise InvalidValueError(f"pinned level must lie in ({theta}, 1), got {level}")
    if bracket is not None and not bracket[0] < bracket[1]:
        raise InvalidValueError(f"speed bracket must be an interval, got {bracket}")
    pinned = pin_weights(grid.x, position)
    if pinned is None:
        raise InvalidValueError(f"pinned position {position} lies outside the interior of [-{grid.r}, {grid.R}]")
    return (Control.TAIL if tail is not None else Control.SPEED), pinned


def solve_pinned(
    kernel: SampledKernel,
    f,
    grid: Grid,
    c: float,
    eps: float,
    theta: float = 0.0,
    level: float = 0.5,
    position: float = 0.0,
    settings: Optional[SolverSettings] = None,
    initial: Optional[np.ndarray] = None,
    tail: Optional[TailExterior] = None,
    bracket: Optional[Tuple[float, float]] = None,
    polish: Optional[bool] = None,
) -> Tuple[Profile, IterationReport]:
    """
    Front on ``grid`` with u(position) = level.

    With ``tail`` the speed c is fixed and the left exterior is the exponential of the tail; every
    sweep is translated so that its level crossing sits at ``position``. With ``bracket`` the
    boundary value at -r is theta and each sweep takes the speed in the bracket for which it meets
    the pin; c is the start speed. Once the change per sweep falls below
    ``settings.newton_switch``, or stops halving over 200 sweeps, Newton's method for the values
    and the control, the exterior amplitude or the speed, takes over on the upwind scheme. A
    centred Newton solve with the same pin finally refines the profile when ``polish`` is set.

    Parameters
    ----------
    kernel : SampledKernel
        The dispersal kernel, sampled with the grid spacing.
    f : Nonlinearity
        The reaction term.
    grid : Grid
        The window, containing ``position`` in its interior.
    c : float
        The speed with ``tail``, the start speed with ``bracket``.
    eps : float
        Viscosity, eps >= 0.
    theta : float, optional
        Boundary value at -r, by default 0; must be 0 with ``tail``.
    level, position : float, optional
        The pin u(position) = level, by default u(0) = 1/2.
    settings : SolverSettings, optional
        Solver settings, by default SolverSettings().
    initial : np.ndarray, optional
        Start values, by default a logistic through the pin.
    tail : TailExterior, optional
        Exponential exterior, selects the TAIL control.
    bracket : Tuple[float, float], optional
        Admissible speeds, selects the SPEED control.
    polish : bool, optional
        Overrides ``settings.polish``.

    Returns
    -------
    Tuple[Profile, IterationReport]
        The profile, with 'control', 'tail_rate', 'amplitude' and 'polished' in its metadata,
        and the iteration bookkeeping.

    Raises
    ------
    InvalidValueError
        If the arguments are inconsistent.
    NoSignChangeError
        If the speed stays at an end of the bracket for 50 consecutive sweeps.
    SchemeViolationError
        If an iterate leaves [theta, 1] or the converged profile is not monotone.
    IterationBudgetError
        If the iteration does not converge within the budget.
    """
    settings = settings or SolverSettings()
    polish = settings.polish if polish is None else polish
    control, pinned = _check_arguments(grid, eps, theta, level, position, tail, bracket)
    x, h = grid.x, grid.h
    corrections = boundary_corrections(kernel, grid, theta)
    shift = settings.shift_factor * f.lipschitz()
    rate = tail.rate if tail is not None else INITIAL_RATE
    if initial is None:
        u = front_guess(grid, theta, level, rate, position)
    else:
        if len(initial) != grid.size:
            raise InvalidValueError(f"a warm start needs {grid.size} initial values")
        u = np.clip(np.asarray(initial, dtype=float), theta, 1.0)
    u[-1] = 1.0
    if control is Control.TAIL:
        u = _reset_tail(x, u, rate)
        ratio = float(np.exp(-rate * h))
        masses = tail.masses
        exterior = BoundaryCorrections(np.zeros(grid.size), corrections.h_R)
    else:
        u[0] = theta
        speed_pin = _SpeedPin(eps, h, shift, theta, pinned, level, tuple(bracket))
        width = LOCAL_WIDTH * (bracket[1] - bracket[0])
        c = float(np.clip(c, *bracket))
    newton_from = 0 if settings.newton_switch > 0.0 else None
    history = []
    newton_steps = 0
    change = np.inf
    converged = False
    for iteration in range(1, settings.max_iterations + 1):
        due = change <= settings.newton_switch or stalled(history)
        if newton_from is not None and iteration >= newton_from and due:
            solved = bordered_newton(
                kernel,
                f,
                u,
                c,
                eps,
                theta,
                exterior if control is Control.TAIL else corrections,
                x,
                position,
                level,
                Scheme.UPWIND,
                settings.tol,
                masses if control is Control.TAIL else None,
            )
            if solved is not None:
                u, c, steps = solved
                newton_steps += steps
                converged = True
                break
            logger.debug("pinned Newton failed at iteration %d, continuing with sweeps", iteration)
            newton_from = iteration + STALL_WINDOW
        if control is Control.TAIL:
            core = sweep_core(kernel, f, u, shift, BoundaryCorrections(u[0] * masses, corrections.h_R))
            inner = shifted_solve(core, c, eps, h, shift, 0.0, 1.0, ratio)
            new = np.concatenate(([ratio * inner[0]], inner, [1.0]))
            new = _translate(x, new, crossing(x, new, level) - position, rate)
            moved = 0.0
        else:
            core = sweep_core(kernel, f, u, shift, corrections)
            c_new = speed_pin(core, c, width)
            if speed_pin.clamped >= CLAMP_LIMIT:
                raise NoSignChangeError(
                    f"the pin u({position}) = {level} cannot be met for speeds in [{bracket[0]:.6g}, {bracket[1]:.6g}]",
                    diagnostics={"c": c_new, "bracket": list(bracket), "iteration": iteration},
                )
            new = np.concatenate(([theta], speed_pin.solve(core, c_new), [1.0]))
            moved = abs(c_new - c)
            width = max(4.0 * moved, 1e-9 * (bracket[1] - bracket[0]))
            c = c_new
        if np.min(new) < theta - ORDER_TOLERANCE or np.max(new) > 1.0 + ORDER_TOLERANCE:
            raise SchemeViolationError(
                f"pinned iterate left [{theta}, 1] at sweep {iteration}",
                diagnostics={"iteration": iteration, "u_min": float(np.min(new)), "u_max": float(np.max(new))},
            )
        change = max(float(np.max(np.abs(new - u))), moved)
        history.append(change)
        u = new
        if change <= settings.tol:
            converged = True
            break
    if not converged:
        raise IterationBudgetError(
            f"pinned solve did not converge in {settings.max_iterations} iterations (change {change:.3e})",
            diagnostics={"c": c, "eps": eps, "control": control.value, "change": change, "grid": grid.describe()},
        )
    if np.min(np.diff(u)) < -ORDER_TOLERANCE:
        raise SchemeViolationError(
            "pinned profile is not monotone",
            diagnostics={"c": c, "eps": eps, "violation": float(-np.min(np.diff(u)))},
        )
    polished = False
    if polish:
        refined = bordered_newton(
            kernel,
            f,
            u,
            c,
            eps,
            theta,
            exterior if control is Control.TAIL else corrections,
            x,
            position,
            level,
            Scheme.CENTRED,
            settings.tol,
            masses if control is Control.TAIL else None,
        )
        if refined is None:
            logger.info("centred refinement of the pinned front rejected for c = %g, eps = %g", c, eps)
        else:
            u, c, _ = refined
            polished = True
    logger.debug(
        "pinned solve (%s) c = %.10f eps = %g: %d sweeps, %d Newton steps",
        control.value,
        c,
        eps,
        len(history),
        newton_steps,
    )
    report = IterationReport(len(history) + newton_steps, change, settled(history), history, newton_steps, polished)
    metadata = {
        "pinned": True,
        "control": control.value,
        "tail_rate": rate if control is Control.TAIL else None,
        "amplitude": float(u[0]),
        "polished": polished,
        "shift": shift,
    }
    return Profile(grid, u, float(c), float(eps), float(theta), metadata), report
