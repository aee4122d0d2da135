# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Speeds of ignition fronts, and the minimal monostable speed as the limit of ignition speeds of
cut-off nonlinearities.

For an ignition term with threshold rho the front is normalized by u(0) = rho. Its speed lies in
the a priori bracket |c| <= nu / min(rho, 1 - rho). A scan over the bracket relaxes a common start
profile at six speeds; the sweeps are order preserving and slow down as c grows, so
Phi(c) = u_c(0) - rho decreases in c and changes sign once. The pinned solve started between the
bracketing samples then determines profile and speed together.
"""

import logging
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence, Tuple

import numpy as np

from ..dispersion.speeds import speed_bracket
from ..exceptions import ClassificationError, GridTooCoarseError, InvalidValueError, NoSignChangeError
from ..kernels.sampled import SampledKernel
from ..nonlinearities.classify import classify
from ..nonlinearities.cutoff import ignition_approx
from .grid import Grid
from .pinned import INITIAL_RATE, front_guess, solve_pinned
from .truncated import SolverSettings, relax

logger = logging.getLogger(__name__)

SCAN_POINTS = 6
SCAN_SWEEPS = 60
ORDER_TOLERANCE = 1e-8
THETA_START = 0.2
THETA_STEPS = 8

IgnitionSpeed = namedtuple("IgnitionSpeed", ["c", "profile", "phi", "evaluations", "bracket"])
IgnitionSpeed.__doc__ = """
Named tuple holding the speed of an ignition front.

Attributes
----------
c : float
    The speed.
profile : Profile
    The pinned profile at that speed, u(0) = rho.
phi : float
    u(0) - rho of the returned profile.
evaluations : int
    Sweeps and Newton steps used, the scan included.
bracket : Tuple[float, float]
    The a priori bracket the search started from.
"""


def ignition_speed(
    kernel: SampledKernel,
    f,
    grid: Grid,
    eps: float = 0.0,
    settings: Optional[SolverSettings] = None,
    theta: float = 0.0,
    level: Optional[float] = None,
    bracket: Optional[Tuple[float, float]] = None,
) -> IgnitionSpeed:
    """
    Speed of the front of an ignition term, normalized by u(0) = rho.

    Phi(c) = u_c(0) - rho, with u_c the logistic start profile after 60 sweeps at speed c, is
    sampled at six speeds across the bracket; it must change sign exactly once there. The speed
    interpolated between the bracketing samples starts `solve_pinned` with the speed as control.

    Parameters
    ----------
    kernel : SampledKernel
        The dispersal kernel.
    f : Nonlinearity
        Ignition term with threshold rho.
    grid : Grid
        The window, it should contain x = 0 well inside.
    eps : float, optional
        Viscosity, by default 0.
    settings : SolverSettings, optional
        Settings of the pinned solve.
    theta : float, optional
        Boundary value at -r, below rho, by default 0.
    level : float, optional
        Normalization level u(0), by default the threshold rho.
    bracket : Tuple[float, float], optional
        Search interval, by default +-nu / min(rho, 1 - rho). Giving a bracket and a level admits
        reaction terms that are not of ignition type, such as balanced bistable ones.

    Returns
    -------
    IgnitionSpeed
        The speed, its profile and the search record.

    Raises
    ------
    ClassificationError
        If no bracket is given and f is not of ignition type.
    NoSignChangeError
        If Phi does not change sign exactly once on the sampled bracket.
    """
    settings = settings or SolverSettings()
    if level is None:
        level = f.rho if f.rho is not None else classify(f).rho
        if level is None:
            raise ClassificationError(f"{f.name} has no ignition threshold to normalize the front with")
    if bracket is None:
        bound = speed_bracket(kernel, f)
        bracket = (-bound, bound)
    if not bracket[0] < bracket[1]:
        raise InvalidValueError(f"speed bracket must be an interval, got {bracket}")
    start = front_guess(grid, theta, level, INITIAL_RATE)
    speeds = np.linspace(bracket[0], bracket[1], SCAN_POINTS)
    values = np.array(
        [
            float(np.interp(0.0, grid.x, relax(kernel, f, grid, c, eps, start, SCAN_SWEEPS, theta))) - level
            for c in speeds
        ]
    )
    logger.debug("ignition scan: Phi = %s at c = %s", values.tolist(), speeds.tolist())
    signs = np.where(values > 0.0, 1, -1)
    changes = np.flatnonzero(signs[:-1] != signs[1:])
    if len(changes) != 1:
        raise NoSignChangeError(
            f"Phi changes sign {len(changes)} times on [{bracket[0]:.6g}, {bracket[1]:.6g}]; "
            "check the ignition data or refine the grid",
            diagnostics={"c": speeds.tolist(), "phi": values.tolist(), "level": level},
        )
    k = int(changes[0])
    weight = values[k] / (values[k] - values[k + 1]) if values[k] != values[k + 1] else 0.5
    guess = float(speeds[k] + weight * (speeds[k + 1] - speeds[k]))
    profile, report = solve_pinned(
        kernel, f, grid, guess, eps, theta, level, 0.0, settings, start, bracket=tuple(bracket)
    )
    phi = float(np.interp(0.0, grid.x, profile.u)) - level
    evaluations = SCAN_POINTS * SCAN_SWEEPS + report.iterations
    logger.info("ignition speed %.10f after %d sweeps and Newton steps", profile.c, evaluations)
    return IgnitionSpeed(profile.c, profile, phi, evaluations, tuple(bracket))


MinimalSpeed = namedtuple("MinimalSpeed", ["c_star", "thetas", "speeds", "results"])
MinimalSpeed.__doc__ = """
Named tuple holding the ignition-limit estimate of the minimal monostable speed.

Attributes
----------
c_star : float
    Extrapolated limit of the cut-off speeds.
thetas : list of float
    Cutoff thresholds, decreasing.
speeds : list of float
    Speed of the cut-off front for every threshold.
results : list of IgnitionSpeed
    The individual shooting results.
"""


def extrapolate_speeds(thetas: Sequence[float], speeds: Sequence[float]) -> float:
    """
    Least-squares limit of c_theta in the basis 1, (ln theta)^-2, (ln theta)^-3.

    Cut-off fronts approach the minimal speed with an error of order (ln theta)^-2. With fewer
    than four thresholds the basis is shortened to keep the fit overdetermined.
    """
    logs = np.log(np.asarray(thetas, dtype=float))
    columns = [np.ones_like(logs), logs**-2.0, logs**-3.0]
    basis = np.column_stack(columns[: max(1, min(3, len(logs) - 1))])
    coefficients, *_ = np.linalg.lstsq(basis, np.asarray(speeds, dtype=float), rcond=None)
    return float(coefficients[0])


def minimal_speed_monostable(
    kernel: SampledKernel,
    f,
    grid: Grid,
    thetas: Optional[Sequence[float]] = None,
    eps: float = 0.0,
    settings: Optional[SolverSettings] = None,
    workers: int = 1,
) -> MinimalSpeed:
    """
    Minimal speed of a monostable term from the speeds of its ignition cutoffs f eta_theta.

    The cut-off speeds are computed independently, on up to ``workers`` threads, and collected in
    the order of ``thetas``. As theta decreases the cut-off terms increase, so their speeds must
    not decrease.

    Parameters
    ----------
    kernel : SampledKernel
        The dispersal kernel.
    f : Nonlinearity
        A monostable term.
    grid : Grid
        Window of the shooting solves.
    thetas : Sequence[float], optional
        Strictly decreasing thresholds in (0, 1/4), by default 0.2 * 2^-k for k < 8.
    eps : float, optional
        Viscosity of the truncated problems, by default 0.
    settings : SolverSettings, optional
        Settings of the truncated solves.
    workers : int, optional
        Threads for the independent solves, by default 1.

    Returns
    -------
    MinimalSpeed
        Extrapolated limit, raw sequence and shooting records.

    Raises
    ------
    ClassificationError
        If f is not monostable.
    GridTooCoarseError
        If the cut-off speeds decrease by more than 1e-8 as theta decreases.
    """
    if not classify(f).monostable:
        raise ClassificationError(f"minimal speed by cutoffs needs a monostable term, {f.name} is not one")
    thetas = [THETA_START * 2.0**-k for k in range(THETA_STEPS)] if thetas is None else [float(t) for t in thetas]
    if np.any(np.diff(thetas) >= 0.0):
        raise InvalidValueError(f"cutoff thresholds must decrease strictly, got {thetas}")

    def solve(theta: float) -> IgnitionSpeed:
        return ignition_speed(kernel, ignition_approx(f, theta), grid, eps, settings)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(solve, thetas))
    else:
        results = [solve(theta) for theta in thetas]
    speeds = [result.c for result in results]
    drops = np.diff(speeds)
    if np.any(drops < -ORDER_TOLERANCE):
        raise GridTooCoarseError(
            "cut-off speeds decrease as the threshold decreases; refine the grid",
            diagnostics={"thetas": thetas, "speeds": speeds},
        )
    c_star = extrapolate_speeds(thetas, speeds)
    logger.info("cut-off speeds %s extrapolate to c* = %.8f", np.round(speeds, 6).tolist(), c_star)
    return MinimalSpeed(c_star, thetas, speeds, results)
