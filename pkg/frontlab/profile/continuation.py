# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
From truncated viscous profiles to fronts on the line.

Every profile of the continuation is normalized by u(0) = 1/2. Reaction terms with f'(0) > 0 and
theta = 0 are solved with the pinned tail exterior of `solve_pinned`; the others with
`solve_truncated`, after which the profile is translated to put its 1/2-crossing at the origin.

This module provides:
- `default_schedule`: the viscosity ladder start * 2^-k.
- `schedule_start`: the largest start that keeps a viscous front at the requested speed.
- `viscosity_continuation`: warm-started solves along the ladder down to eps = 0.
- `extend_domain`: doubling of the window until the profile no longer depends on it.
- `solve_front`: the chain of both, used by the profile command.
"""

import logging
from collections import namedtuple
from typing import Optional, Sequence

import numpy as np

from ..dispersion.speeds import BELOW_C1_TOLERANCE, c1
from ..exceptions import (
    ContinuationDivergenceError,
    InvalidValueError,
    NoCrossingError,
    NonexistenceError,
    NumericalFailureError,
)
from ..kernels.sampled import SampledKernel
from .diagnostics import align_and_compare, endpoint_values, residual
from .grid import Grid, Profile
from .pinned import solve_pinned, tail_exterior, tail_rate
from .truncated import IterationReport, SolverSettings, Start, solve_truncated

logger = logging.getLogger(__name__)

SCHEDULE_START = 0.1
SCHEDULE_STEPS = 12
MAX_JUMP = 0.1
EXTENSION_TOLERANCE = 1e-6
ENDPOINT_TOLERANCE = 1e-3
ENDPOINT_ZERO_TOLERANCE = 1e-4
MAX_EXTENSIONS = 4


def default_schedule(c: float, start: float = SCHEDULE_START, steps: int = SCHEDULE_STEPS) -> list:
    """eps_k = start * 2^-k for k < steps, followed by 0 unless c = 0. A zero start gives [0]."""
    if start == 0.0:
        return [0.0]
    schedule = [start * 2.0**-k for k in range(steps)]
    if c != 0.0:
        schedule.append(0.0)
    return schedule


def schedule_start(kernel: SampledKernel, f, c: float) -> float:
    """
    First viscosity of the default ladder for a reaction term with f'(0) > 0.

    Returns min(0.1, (c - c1) / (2 lambda*)) when the minimal speed c1 is attained at lambda*, 0.1
    when it is not, and 0 at c = c1.

    Raises
    ------
    NonexistenceError
        If c lies below c1.
    """
    speed = c1(kernel, f)
    if c < speed.speed - BELOW_C1_TOLERANCE:
        raise NonexistenceError(
            f"c = {c} lies below the minimal speed c1 = {speed.speed:.8f}; no front with this speed exists",
            diagnostics={"c": c, "c1": speed.speed},
        )
    if not speed.attained:
        return SCHEDULE_START
    if c - speed.speed <= BELOW_C1_TOLERANCE:
        return 0.0
    # c*(eps) <= c1 + eps lambda*, the factor 2 leaves room for the discretization
    return min(SCHEDULE_START, (c - speed.speed) / (2.0 * speed.lambda_star))


def _check_schedule(schedule: Sequence[float]) -> list:
    schedule = [float(eps) for eps in schedule]
    if not schedule or min(schedule) < 0.0 or np.any(np.diff(schedule) >= 0.0):
        raise InvalidValueError(f"viscosity schedule must be nonnegative and strictly decreasing, got {schedule}")
    return schedule


def _uses_tail(f, theta: float) -> bool:
    return f.fprime0 > 0.0 and theta == 0.0


def _anchored(profile: Profile) -> Profile:
    """The profile translated so that it crosses 1/2 at x = 0; unchanged without a crossing."""
    try:
        shift = profile.crossing()
    except NoCrossingError:
        logger.debug("profile at c = %g does not cross 1/2, left in place", profile.c)
        return profile
    u = np.interp(profile.x + shift, profile.x, profile.u, left=profile.theta, right=1.0)
    return profile.with_values(u)


def _tail_rates(kernel: SampledKernel, f, c: float, schedule: list) -> dict:
    """Tail rate per viscosity; viscosities without a viscous front at speed c are left out."""
    rates = {schedule[-1]: tail_rate(kernel, f, c, schedule[-1])}
    for eps in schedule[:-1]:
        try:
            rates[eps] = tail_rate(kernel, f, c, eps)
        except NonexistenceError:
            logger.warning("no viscous front with c = %g at eps = %.4g, skipping this step", c, eps)
    return rates


def _solve_step(kernel, f, grid, c, eps, theta, settings, rate, previous, polish):
    if rate is not None:
        return solve_pinned(
            kernel,
            f,
            grid,
            c,
            eps,
            settings=settings,
            initial=None if previous is None else previous.u,
            tail=tail_exterior(kernel, grid, rate),
            polish=polish,
        )
    if previous is None:
        profile, report = solve_truncated(kernel, f, grid, c, eps, theta, settings, polish=polish)
    else:
        profile, report = solve_truncated(kernel, f, grid, c, eps, theta, settings, Start.WARM, previous.u, polish)
    return _anchored(profile), report


def viscosity_continuation(
    kernel: SampledKernel,
    f,
    grid: Grid,
    c: float,
    theta: float = 0.0,
    schedule: Optional[Sequence[float]] = None,
    settings: Optional[SolverSettings] = None,
) -> Profile:
    """
    Follow the front at speed c from the largest viscosity of the schedule down to eps = 0.

    Each step is warm started from the previous profile and normalized by u(0) = 1/2. Consecutive
    profiles are compared after translating their 1/2-crossings onto each other; the
    sup-distances are kept in the metadata of the result under 'distances'. For c = 0 a final
    eps = 0 is dropped and the profile of the smallest eps is returned with the flag
    'smallest_eps_only'.

    Without a schedule, reaction terms with f'(0) > 0 start at `schedule_start` and all others at
    0.1. With f'(0) > 0 and theta = 0, steps whose viscous problem admits no front at speed c are
    skipped.

    Raises
    ------
    InvalidValueError
        If the schedule is empty, negative or not strictly decreasing.
    NonexistenceError
        If c lies below the minimal speed of the last step.
    ContinuationDivergenceError
        If two consecutive aligned profiles differ by more than 0.1.
    """
    settings = settings or SolverSettings()
    tail = _uses_tail(f, theta)
    if schedule is None:
        schedule = default_schedule(c, schedule_start(kernel, f, c) if tail else SCHEDULE_START)
    schedule = _check_schedule(schedule)
    smallest_only = c == 0.0
    if smallest_only:
        schedule = [eps for eps in schedule if eps > 0.0] or schedule
    if tail:
        rates = _tail_rates(kernel, f, c, schedule)
        schedule = [eps for eps in schedule if eps in rates]
    previous = None
    report: Optional[IterationReport] = None
    distances = []
    for step, eps in enumerate(schedule):
        last = step == len(schedule) - 1
        profile, report = _solve_step(
            kernel, f, grid, c, eps, theta, settings, rates[eps] if tail else None, previous, settings.polish and last
        )
        if previous is not None:
            distance = align_and_compare(previous, profile).sup_distance
            distances.append(distance)
            if distance > MAX_JUMP:
                raise ContinuationDivergenceError(
                    f"profiles at eps = {schedule[step - 1]:.3g} and eps = {eps:.3g} differ by {distance:.3g} "
                    f"after alignment",
                    diagnostics={"c": c, "eps": eps, "distances": distances},
                )
        logger.info("continuation step eps = %.4g: %d iterations", eps, report.iterations)
        previous = profile
    metadata = dict(previous.metadata)
    metadata.update(
        {"distances": distances, "eps_schedule": schedule, "smallest_eps_only": smallest_only, "report": report}
    )
    return previous.with_values(previous.u, metadata=metadata)


def _boundary_insensitive(profile: Profile, kernel: SampledKernel, f) -> bool:
    ends = endpoint_values(profile, kernel, f)
    return (
        ends["u_left"] - profile.theta <= ENDPOINT_TOLERANCE
        and 1.0 - ends["u_right"] <= ENDPOINT_TOLERANCE
        and abs(ends["f_left"]) + abs(ends["f_right"]) <= ENDPOINT_ZERO_TOLERANCE
    )


def extend_domain(
    kernel: SampledKernel,
    f,
    profile: Profile,
    growth: float = 2.0,
    tolerance: float = EXTENSION_TOLERANCE,
    max_extensions: int = MAX_EXTENSIONS,
    settings: Optional[SolverSettings] = None,
) -> Profile:
    """
    Enlarge the window by ``growth`` and re-solve until the profile is insensitive to it.

    The enlarged solve is warm started from the previous profile and keeps its tail rate when it
    was pinned by a tail exterior. The extension is certified when the aligned sup-difference of
    consecutive profiles is at most ``tolerance`` and, one kernel radius inside either end, u is
    within 1e-3 of the boundary states with |f(u)| summing to at most 1e-4 there.

    Raises
    ------
    NonexistenceError
        If no extension is certified within ``max_extensions`` enlargements, which indicates that
        no front with speed c exists.
    """
    settings = settings or SolverSettings()
    rate = profile.metadata.get("tail_rate")
    current = profile
    distances = []
    for extension in range(1, max_extensions + 1):
        grid = current.grid.scaled(growth)
        warm = current.with_values(np.interp(grid.x, current.x, current.u, left=current.theta, right=1.0), grid=grid)
        try:
            enlarged, report = _solve_step(
                kernel, f, grid, current.c, current.eps, current.theta, settings, rate, warm, settings.polish
            )
            distance = align_and_compare(current, enlarged).sup_distance
        except NumericalFailureError as exc:
            raise NonexistenceError(
                f"re-solving on the enlarged window [-{grid.r}, {grid.R}] failed: {exc}",
                diagnostics={"c": current.c, "distances": distances, "cause": exc.diagnostics},
            ) from exc
        distances.append(distance)
        logger.info("extension to [-%g, %g]: aligned change %.3e", grid.r, grid.R, distance)
        current = enlarged
        if distance <= tolerance and _boundary_insensitive(current, kernel, f):
            metadata = dict(profile.metadata)
            metadata.update(current.metadata)
            metadata.update({"extensions": extension, "extension_distances": distances, "report": report})
            return current.with_values(current.u, metadata=metadata)
    raise NonexistenceError(
        f"the profile at c = {current.c} keeps depending on the window after {max_extensions} extensions; "
        "no front with this speed is expected",
        diagnostics={
            "c": current.c,
            "distances": distances,
            "endpoint_values": endpoint_values(current, kernel, f),
            "grid": current.grid.describe(),
        },
    )


FrontSolution = namedtuple("FrontSolution", ["profile", "residual", "endpoints"])
FrontSolution.__doc__ = """
Named tuple holding a front computed by continuation and domain extension.

Attributes
----------
profile : Profile
    The extended profile, normalized by u(0) = 1/2; its metadata holds the continuation and
    extension records.
residual : float
    Residual of the profile on its interior nodes.
endpoints : dict
    Values of u and f(u) one kernel radius inside either end.
"""


def solve_front(
    kernel: SampledKernel,
    f,
    c: float,
    grid: Grid,
    theta: float = 0.0,
    schedule: Optional[Sequence[float]] = None,
    settings: Optional[SolverSettings] = None,
    extend: bool = True,
) -> FrontSolution:
    """
    Viscosity continuation on ``grid`` followed by domain extension.

    Raises
    ------
    ContinuationDivergenceError
        If the continuation jumps.
    NonexistenceError
        If c lies below the minimal speed or the extension cannot be certified.
    """
    profile = viscosity_continuation(kernel, f, grid, c, theta, schedule, settings)
    if extend:
        profile = extend_domain(kernel, f, profile, settings=settings)
    return FrontSolution(profile, residual(profile, kernel, f), endpoint_values(profile, kernel, f))
