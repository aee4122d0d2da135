# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Explicit time stepping of dU/dt = J * U - U + f(U) on a moving window.

The exterior of the window is held at the two equilibria, so that the window sees the same
boundary states as a front. Convolutions fold the exterior in as partial kernel masses, the same
construction as the boundary corrections of the truncated front problem.

This module provides:
- `BoundaryPolicy`: which equilibrium lies beyond which end.
- `SimState`: the field on its window at a time.
- `EvolveSettings`: horizon, time step and output cadence.
- `step`: one classical Runge-Kutta step.
- `recenter`: shift of the window by half its width after the front.
- `simulate`: stepping, saving and recentering up to the horizon.
- `heaviside_initial`, `profile_initial`: front-like initial data.
"""

import logging
from collections import namedtuple
from dataclasses import dataclass, replace
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from ..exceptions import InstabilityError, InvalidValueError, NoCrossingError
from ..kernels.sampled import SampledKernel
from ..profile.grid import Grid, Profile, crossing

logger = logging.getLogger(__name__)

DT_FACTOR = 0.5
RANGE_TOLERANCE = 1e-9
RECENTER_FRACTION = 0.25
MONOTONE_TOLERANCE = 1e-12


class BoundaryPolicy(Enum):
    RIGHTWARD = "rightward"
    """U = 0 beyond the left end and U = 1 beyond the right end."""
    LEFTWARD = "leftward"
    """U = 1 beyond the left end and U = 0 beyond the right end."""
    FREE = "free"
    """U continues with its end values, for data that are not fronts."""

    @property
    def sign(self) -> float:
        """Factor turning the drift of the crossing into the speed c of U(x, t) = u(+-x + c t)."""
        return 1.0 if self is BoundaryPolicy.LEFTWARD else -1.0


@dataclass(frozen=True, eq=False)
class SimState:
    """
    Field values on a window at a time.

    Attributes
    ----------
    grid : Grid
        The window; recentering moves it along the line.
    u : np.ndarray
        Values in [0, 1].
    t : float
        Time.
    policy : BoundaryPolicy
        Exterior states of the window.
    """

    grid: Grid
    u: np.ndarray
    t: float = 0.0
    policy: BoundaryPolicy = BoundaryPolicy.RIGHTWARD

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    def exterior(self) -> Tuple[float, float]:
        """Values beyond the left and the right end."""
        if self.policy is BoundaryPolicy.RIGHTWARD:
            return 0.0, 1.0
        if self.policy is BoundaryPolicy.LEFTWARD:
            return 1.0, 0.0
        return float(self.u[0]), float(self.u[-1])

    def crossing(self, level: float = 0.5) -> float:
        """Position of the level crossing, read from the end where U is small."""
        if self.policy is BoundaryPolicy.LEFTWARD:
            return crossing(self.x[::-1], self.u[::-1], level)
        return crossing(self.x, self.u, level)


EvolveSettings = namedtuple(
    "EvolveSettings",
    ["T", "dt", "save_every", "track_level", "recenter"],
    defaults=(100.0, None, 1.0, 0.5, True),
)
EvolveSettings.__doc__ = """
Named tuple holding the settings of a simulation.

Attributes
----------
T : float
    Final time, by default 100.
dt : float or None
    Time step, by default 0.5 / (1 + Lip(f)).
save_every : float
    Time between saved frames, by default 1.
track_level : float
    Level of the tracked crossing, by default 1/2.
recenter : bool
    Whether the window follows the front, by default True.
"""


def stable_dt(f) -> float:
    """Largest admissible time step 0.5 / (1 + Lip(f))."""
    return DT_FACTOR / (1.0 + f.lipschitz())


def _rate(kernel: SampledKernel, f, u: np.ndarray, left: float, right: float) -> np.ndarray:
    return kernel.convolve(u, left=left, right=right, method="fft") - u + f(u)


def step(state: SimState, dt: float, kernel: SampledKernel, f) -> SimState:
    """
    Advance the field by one classical fourth order Runge-Kutta step.

    Parameters
    ----------
    state : SimState
        The current field.
    dt : float
        Time step, at most 0.5 / (1 + Lip(f)).
    kernel : SampledKernel
        The dispersal kernel, sampled with the spacing of the window.
    f : Nonlinearity
        The reaction term.

    Returns
    -------
    SimState
        The field at time t + dt.

    Raises
    ------
    InstabilityError
        If dt exceeds the stability bound or the field leaves [-1e-9, 1 + 1e-9].
    """
    limit = stable_dt(f)
    if not 0.0 < dt <= limit * (1.0 + 1e-12):
        raise InstabilityError(
            f"time step {dt} outside (0, {limit:.6g}]", diagnostics={"dt": dt, "dt_max": limit}
        )
    left, right = state.exterior()
    u = state.u
    k1 = _rate(kernel, f, u, left, right)
    k2 = _rate(kernel, f, u + 0.5 * dt * k1, left, right)
    k3 = _rate(kernel, f, u + 0.5 * dt * k2, left, right)
    k4 = _rate(kernel, f, u + dt * k3, left, right)
    new = u + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    low, high = float(np.min(new)), float(np.max(new))
    if low < -RANGE_TOLERANCE or high > 1.0 + RANGE_TOLERANCE:
        raise InstabilityError(
            f"field left [0, 1] at t = {state.t + dt:.6g}: range [{low:.3e}, {high:.3e}]",
            diagnostics={"t": state.t + dt, "u_min": low, "u_max": high, "dt": dt},
        )
    return replace(state, u=np.clip(new, 0.0, 1.0), t=state.t + dt)


def recenter(state: SimState, level: float = 0.5) -> Tuple[SimState, bool]:
    """
    Shift the window by half its width when the crossing is within a quarter of either end.

    Nodes entering the window take the exterior value of their side.
    """
    try:
        position = state.crossing(level)
    except NoCrossingError:
        return state, False
    grid = state.grid
    fraction = (position - grid.x[0]) / (grid.r + grid.R)
    if RECENTER_FRACTION <= fraction <= 1.0 - RECENTER_FRACTION:
        return state, False
    nodes = (grid.size - 1) // 2
    shift = nodes * grid.h
    left, right = state.exterior()
    if fraction < RECENTER_FRACTION:
        moved = Grid(grid.h, grid.r + shift, grid.R - shift)
        u = np.concatenate((np.full(nodes, left), state.u[:-nodes]))
    else:
        moved = Grid(grid.h, grid.r - shift, grid.R + shift)
        u = np.concatenate((state.u[nodes:], np.full(nodes, right)))
    logger.info("t = %.4g: window moved to [%.6g, %.6g]", state.t, moved.x[0], moved.x[-1])
    return replace(state, grid=moved, u=u), True


def _check_front_data(state: SimState) -> None:
    if state.policy is BoundaryPolicy.FREE:
        return
    steps = np.diff(state.u)
    if state.policy is BoundaryPolicy.LEFTWARD:
        steps = -steps
    if np.min(steps) < -MONOTONE_TOLERANCE:
        raise InvalidValueError(f"front initial data must be monotone for the {state.policy.value} boundary policy")


Simulation = namedtuple("Simulation", ["frames", "final", "dt", "recenterings"])
Simulation.__doc__ = """
Named tuple holding the outcome of a simulation.

Attributes
----------
frames : List[SimState]
    Saved states, the initial one first.
final : SimState
    The state at the final time.
dt : float
    The time step used.
recenterings : int
    Number of window shifts.
"""


def simulate(
    kernel: SampledKernel, f, initial: SimState, settings: Optional[EvolveSettings] = None
) -> Simulation:
    """
    Step the field up to time T, saving frames and following the front with the window.

    Parameters
    ----------
    kernel : SampledKernel
        The dispersal kernel; the window must be at least four kernel widths wide.
    f : Nonlinearity
        The reaction term.
    initial : SimState
        Monotone initial data.
    settings : EvolveSettings, optional
        Horizon, time step and output cadence.

    Returns
    -------
    Simulation
        Saved frames and the final state.

    Raises
    ------
    GridTooNarrowError, GridTooCoarseError
        If the window does not fit the kernel.
    InvalidValueError
        If the initial data are not monotone or the settings are out of range.
    InstabilityError
        If the field leaves [0, 1].
    """
    settings = settings or EvolveSettings()
    initial.grid.check_kernel(kernel)
    _check_front_data(initial)
    dt = stable_dt(f) if settings.dt is None else float(settings.dt)
    if not settings.T > 0.0 or not settings.save_every > 0.0:
        raise InvalidValueError(
            f"horizon and save interval must be positive, got T = {settings.T}, save_every = {settings.save_every}"
        )
    steps = int(np.ceil(settings.T / dt - 1e-9))
    dt = settings.T / steps
    stride = max(1, int(round(settings.save_every / dt)))
    state = initial
    frames: List[SimState] = [state]
    recenterings = 0
    for index in range(1, steps + 1):
        state = step(state, dt, kernel, f)
        if settings.recenter:
            state, moved = recenter(state, settings.track_level)
            recenterings += moved
        if index % stride == 0 or index == steps:
            frames.append(state)
    logger.info("simulated %d steps of dt = %.4g, %d frames, %d recenterings", steps, dt, len(frames), recenterings)
    return Simulation(frames, state, dt, recenterings)


def heaviside_initial(
    grid: Grid, position: float = 0.0, policy: BoundaryPolicy = BoundaryPolicy.RIGHTWARD
) -> SimState:
    """Step from 0 to 1 at ``position``, rising towards the side where the exterior is 1."""
    upper = grid.x >= position if policy is BoundaryPolicy.RIGHTWARD else grid.x <= position
    return SimState(grid, upper.astype(float), 0.0, policy)


def profile_initial(
    profile: Profile, grid: Grid, shift: float = 0.0, policy: BoundaryPolicy = BoundaryPolicy.RIGHTWARD
) -> SimState:
    """
    A computed front profile interpolated onto ``grid`` and moved by ``shift``.

    Beyond the profile window the values continue with its boundary states; the LEFTWARD
    policy mirrors the profile, x -> -x.
    """
    if policy is BoundaryPolicy.RIGHTWARD:
        u = np.interp(grid.x - shift, profile.x, profile.u, left=profile.theta, right=1.0)
    else:
        u = np.interp(shift - grid.x, profile.x, profile.u, left=profile.theta, right=1.0)
    return SimState(grid, u, 0.0, policy)
