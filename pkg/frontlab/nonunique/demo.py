# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Discontinuous stationary fronts of a reaction term whose g(u) = u - f(u) is not monotone.

For a kernel with c1 <= 0 the stationary problem J * u = g(u) has fronts at c = 0. The
regularizations g_n are invertible, so J * u_n = g_n(u_n) is solved by the pointwise update
u <- g_n^-1(J * u), translated after every sweep so that u_n(0) = a, and finished with a pinned
Newton iteration unless the settings ask for the plain fixed-point iteration. The window is
continued on the left by the exponential tail u(x_0) exp(lambda (x - x_0)) with lambda = lambda(0),
and by the state 1 on the right. As n grows the u_n converge to a front that jumps from a to b at
0 while J * u stays continuous.

This module provides:
- `build_case`: the shipped spline and rightward bump kernel, checked against every hypothesis.
- `stationary_map`: J * u on the window with the tail and the right exterior.
- `solve_regularized`: the stationary front of one regularization.
- `extract_discontinuous_limit`: the extrapolated limit and its jump certificate.
- `pin_sweep`: exploratory fronts pinned at u(0) = a' for a' in (a, b).
- `run_demo`: the whole chain.
"""

import logging
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.signal import convolve as _signal_convolve
from scipy.sparse.linalg import spsolve

from ..dispersion.speeds import c1, lambda_of_c
from ..exceptions import (
    DemoFailureError,
    FrontlabError,
    InvalidValueError,
    InvariantViolationError,
    IterationBudgetError,
    NoCrossingError,
)
from ..kernels.families import Bump, KernelFamily
from ..kernels.sampled import SampledKernel, build_kernel
from ..nonlinearities.classify import classify
from ..nonlinearities.families import Nonlinearity, shipped_spline
from ..nonlinearities.g_analysis import g_analysis
from ..profile.grid import Grid, Profile, crossing
from .regularize import RegularizedG, regularize

logger = logging.getLogger(__name__)

PLATEAU_TOLERANCE = 1e-8
NEWTON_ITERATIONS = 40
DAMPING_HALVINGS = 20
RANGE_TOLERANCE = 1e-10
ORDER_TOLERANCE = 1e-12
OFFJUMP_TOLERANCE = 1e-4
LIMIT_TOLERANCE = 0.02
CONTINUITY_SLACK = 1.1
ORDERING_SAMPLES = 2001
MIN_LEVELS = 4

DEFAULT_GRID = Grid(0.05, 20.0, 10.0)
DEFAULT_LEVELS = (4, 8, 16, 32)

DemoCase = namedtuple("DemoCase", ["f", "kernel", "classification", "analysis", "speed"])
DemoCase.__doc__ = """
Named tuple holding a reaction term and kernel with discontinuous stationary fronts.

Attributes
----------
f : Nonlinearity
    KPP term with 0 < f'(0) < 1, f'(1) < 0 and non-monotone g.
kernel : SampledKernel
    A kernel with c1 <= 0.
classification : Classification
    The classifier report of f.
analysis : GAnalysis
    Monotone pieces of g and the plateau pair (a, b).
speed : SpeedResult
    c1 of the pair.
"""


def build_case(h: float = 0.05, f: Optional[Nonlinearity] = None, family: Optional[KernelFamily] = None) -> DemoCase:
    """
    Assemble and check the reaction term and kernel of the demo.

    Parameters
    ----------
    h : float, optional
        Sampling step of the kernel, by default 0.05.
    f : Nonlinearity, optional
        Reaction term, by default the shipped spline.
    family : KernelFamily, optional
        Kernel family, by default the bump of width 1 centred at 2.

    Returns
    -------
    DemoCase
        The checked pair.

    Raises
    ------
    DemoFailureError
        If any hypothesis fails; the diagnostics name each failed check.
    """
    f = shipped_spline() if f is None else f
    kernel = build_kernel(Bump(2.0, 1.0) if family is None else family, h)
    classification = classify(f)
    analysis = g_analysis(f)
    speed = c1(kernel, f)
    failures = {}
    if not (classification.monostable and classification.kpp):
        failures["kpp"] = {key: violation._asdict() for key, violation in classification.violations.items()}
    if not 0.0 < f.fprime0 < 1.0:
        failures["fprime0"] = f.fprime0
    if not f.fprime1 < 0.0:
        failures["fprime1"] = f.fprime1
    if analysis.plateau is None:
        failures["plateau"] = "g is monotone"
    else:
        a, b = analysis.plateau
        gap = abs(float(f.g(np.array([a]))[0] - f.g(np.array([b]))[0]))
        if gap > PLATEAU_TOLERANCE:
            failures["plateau"] = {"a": a, "b": b, "gap": gap}
    if speed.speed > 0.0:
        failures["c1"] = speed.speed
    if failures:
        raise DemoFailureError(
            f"{f.name} with the {kernel.family.tag} kernel fails {sorted(failures)}", diagnostics=failures
        )
    logger.info("demo case %s: plateau %s, c1 = %.6f", f.name, analysis.plateau, speed.speed)
    return DemoCase(f, kernel, classification, analysis, speed)


STATIONARY_METHODS = ("newton", "fixed_point")

StationarySettings = namedtuple(
    "StationarySettings",
    ["tol", "max_sweeps", "newton_switch", "residual_tol", "method"],
    defaults=[1e-10, 500, 1e-6, 1e-8, "newton"],
)
StationarySettings.__doc__ = """
Named tuple holding the controls of the stationary solver.

Attributes
----------
tol : float
    Convergence threshold on the sup-change of an iterate, by default 1e-10.
max_sweeps : int
    Budget of translated sweeps, by default 500.
newton_switch : float
    Sup-change below which the pinned Newton iteration takes over, by default 1e-6.
residual_tol : float
    Largest stationary residual accepted for a converged front, by default 1e-8.
method : str
    'newton' hands over to the pinned Newton iteration below ``newton_switch``; 'fixed_point'
    keeps sweeping until the sup-change reaches ``tol``. By default 'newton'.
"""

StationarySolution = namedtuple(
    "StationarySolution", ["n", "regularized", "profile", "residual", "sweeps", "newton_steps", "decay_rate"]
)
StationarySolution.__doc__ = """
Named tuple holding the stationary front of one regularization.

Attributes
----------
n : int
    Regularization index.
regularized : RegularizedG
    The g_n that was inverted.
profile : Profile
    The front at c = 0, eps = 0.
residual : float
    max |J * u - g_n(u)| at the window nodes right of the first.
sweeps, newton_steps : int
    Work done by either stage.
decay_rate : float
    lambda(0) of the left tail.
"""


def _extended(u: np.ndarray, n: int, step: float) -> np.ndarray:
    tail = u[0] * np.exp(step * np.arange(-n, 0))
    return np.concatenate((tail, u, np.ones(n)))


def stationary_map(kernel: SampledKernel, u: np.ndarray, lam: float) -> np.ndarray:
    """
    J * u at the window nodes, u continued by u_0 exp(lam (x - x_0)) on the left and by 1 on the right.
    """
    u = np.asarray(u, dtype=float)
    return _signal_convolve(_extended(u, kernel.n, lam * kernel.h), kernel.weights, mode="valid")


def _translate(x: np.ndarray, v: np.ndarray, pin: float, lam: float) -> np.ndarray:
    shift = crossing(x, v, pin)
    moved = np.interp(x + shift, x, v, right=1.0)
    left = x + shift < x[0]
    moved[left] = v[0] * np.exp(lam * (x[left] + shift - x[0]))
    return moved


def _pin_row(x: np.ndarray) -> sparse.csr_matrix:
    h = x[1] - x[0]
    p = int(np.searchsorted(x, 0.0, side="right")) - 1
    if not 0 <= p <= len(x) - 2:
        raise InvalidValueError(f"the pin x = 0 lies outside the window [{x[0]:.6g}, {x[-1]:.6g}]")
    t = -x[p] / h
    return sparse.csr_matrix(([1.0 - t, t], ([0, 0], [p, p + 1])), shape=(1, len(x)))


def _jacobian(kernel: SampledKernel, regularized: RegularizedG, u: np.ndarray, lam: float) -> sparse.csr_matrix:
    n, m = kernel.n, len(u)
    # entry (i, j) of the convolution block is w_{i-j}
    convolution = sparse.diags(kernel.weights[::-1].tolist(), np.arange(-n, n + 1), shape=(m, m))
    pattern = np.concatenate((np.exp(lam * kernel.h * np.arange(-n, 0)), np.zeros(m + n)))
    tail = _signal_convolve(pattern, kernel.weights, mode="valid")
    tail_column = sparse.csr_matrix((tail, (np.arange(m), np.zeros(m, dtype=int))), shape=(m, m))
    return (convolution + tail_column - sparse.diags(regularized.derivative(u))).tocsr()


def _admissible(u: np.ndarray) -> bool:
    return bool(
        np.all(np.isfinite(u))
        and np.min(u) >= -RANGE_TOLERANCE
        and np.max(u) <= 1.0 + RANGE_TOLERANCE
        and np.min(np.diff(u)) >= -ORDER_TOLERANCE
    )


def _pinned_newton(kernel, regularized, u, lam, x, pin, tol):
    """Newton's method with the first equation replaced by u(0) = pin; None when it fails."""
    pin_row = _pin_row(x)
    for iteration in range(1, NEWTON_ITERATIONS + 1):
        rhs = regularized(u) - stationary_map(kernel, u, lam)
        rhs[0] = pin - float((pin_row @ u)[0])
        system = sparse.vstack((pin_row, _jacobian(kernel, regularized, u, lam)[1:])).tocsc()
        update = spsolve(system, rhs)
        if not np.all(np.isfinite(update)):
            return None
        step = 1.0
        for _ in range(DAMPING_HALVINGS):
            candidate = u + step * update
            if _admissible(candidate):
                break
            step *= 0.5
        else:
            return None
        u = candidate
        if step == 1.0 and np.max(np.abs(update)) <= tol:
            return np.clip(u, 0.0, 1.0), iteration
    return None


def solve_regularized(
    kernel: SampledKernel,
    regularized: RegularizedG,
    grid: Grid,
    pin: Optional[float] = None,
    settings: Optional[StationarySettings] = None,
    initial: Optional[np.ndarray] = None,
    lam: Optional[float] = None,
) -> StationarySolution:
    """
    Stationary front of J * u = g_n(u) pinned at u(0) = pin.

    Sweeps u <- g_n^-1(J * u) keep iterates in [0, 1] and monotone; each is translated so that
    it crosses ``pin`` at 0. With the default method, a square Newton iteration whose first row is
    the pin condition finishes the solve below ``settings.newton_switch``. With
    ``settings.method == "fixed_point"`` the sweeps alone run down to ``settings.tol``.

    Parameters
    ----------
    kernel : SampledKernel
        Kernel sampled with the grid spacing.
    regularized : RegularizedG
        The invertible g_n.
    grid : Grid
        The window, 0 inside it.
    pin : float, optional
        The value u(0), by default the plateau end a.
    settings : StationarySettings, optional
        Solver controls.
    initial : np.ndarray, optional
        Start values, by default the tail below 0 and 1 - (1 - b) exp(-x) above.
    lam : float, optional
        Tail rate, by default lambda(0) of the base term.

    Returns
    -------
    StationarySolution
        The front and the work done.

    Raises
    ------
    InvalidValueError
        If the pin lies outside (0, 1) or the method is unknown.
    IterationBudgetError
        If neither stage converges.
    InvariantViolationError
        If the converged front is not monotone or its residual exceeds ``settings.residual_tol``.
    """
    settings = settings or StationarySettings()
    grid.check_kernel(kernel)
    if settings.method not in STATIONARY_METHODS:
        raise InvalidValueError(f"stationary method must be one of {STATIONARY_METHODS}, got {settings.method!r}")
    fixed_point = settings.method == "fixed_point"
    threshold = settings.tol if fixed_point else settings.newton_switch
    a, b = regularized.plateau
    pin = a if pin is None else float(pin)
    if not 0.0 < pin < 1.0:
        raise InvalidValueError(f"the pinned value must lie in (0, 1), got {pin}")
    lam = lambda_of_c(kernel, regularized.base, 0.0).lam if lam is None else float(lam)
    x = grid.x
    if initial is None:
        u = np.where(x <= 0.0, pin * np.exp(lam * np.minimum(x, 0.0)), 1.0 - (1.0 - max(pin, b)) * np.exp(-x))
    else:
        u = np.clip(np.asarray(initial, dtype=float), 0.0, 1.0)

    change, sweeps = float("inf"), 0
    try:
        while sweeps < settings.max_sweeps and change > threshold:
            new = _translate(x, regularized.inverse(stationary_map(kernel, u, lam)), pin, lam)
            change = float(np.max(np.abs(new - u)))
            u, sweeps = new, sweeps + 1
    except NoCrossingError as exc:
        raise IterationBudgetError(
            f"sweeps of g_{regularized.n} lost the pinned level {pin:.6g}",
            diagnostics={"n": regularized.n, "sweeps": sweeps, **exc.diagnostics},
        ) from exc
    logger.debug("g_%d: %d sweeps, sup-change %.3e", regularized.n, sweeps, change)

    solved = None if fixed_point else _pinned_newton(kernel, regularized, u, lam, x, pin, settings.tol)
    if solved is not None:
        u, newton_steps = solved
    elif change <= settings.tol:
        newton_steps = 0
    else:
        raise IterationBudgetError(
            f"stationary front of g_{regularized.n} did not converge",
            diagnostics={"n": regularized.n, "sweeps": sweeps, "sup_change": change, "method": settings.method},
        )

    residual = float(np.max(np.abs(stationary_map(kernel, u, lam) - regularized(u))[1:]))
    if residual > settings.residual_tol or np.min(np.diff(u)) < -ORDER_TOLERANCE:
        raise InvariantViolationError(
            f"stationary front of g_{regularized.n} violates its invariants",
            diagnostics={"n": regularized.n, "residual": residual, "min_increment": float(np.min(np.diff(u)))},
        )
    logger.info(
        "g_%d: residual %.2e after %d sweeps and %d Newton steps", regularized.n, residual, sweeps, newton_steps
    )
    metadata = {"regularized": regularized.n, "pin": pin, "decay_rate": lam, "method": settings.method}
    profile = Profile(grid, u, 0.0, metadata=metadata)
    return StationarySolution(regularized.n, regularized, profile, residual, sweeps, newton_steps, lam)


DiscontinuousLimit = namedtuple(
    "DiscontinuousLimit",
    [
        "profile",
        "jump_at",
        "jump_left",
        "jump_right",
        "jump",
        "residual_offjump",
        "continuity",
        "continuity_bound",
        "ordering",
        "checks",
    ],
)
DiscontinuousLimit.__doc__ = """
Named tuple holding the extrapolated limit of the regularized fronts.

Attributes
----------
profile : Profile
    Nodewise limit values.
jump_at : float
    Location of the jump, the pinned point 0.
jump_left, jump_right : float
    One-sided limits u(0-) and u(0+), extrapolated from three nodes on either side.
jump : float
    jump_right - jump_left.
residual_offjump : float
    max |J * u - g~(u)| away from the jump.
continuity : float
    Largest increment of J * u between adjacent nodes.
continuity_bound : float
    The increment allowed for a monotone u with values in [0, 1], 1.1 h sup J.
ordering : List[dict]
    For consecutive levels: whether g_n and g_m are ordered and the fraction of nodes where the
    fronts are ordered the opposite way.
checks : dict
    Pass flags of the separation, the one-sided limits, the residual and the continuity.
"""


def _offjump_mask(size: int, p: int) -> np.ndarray:
    mask = np.ones(size, dtype=bool)
    mask[[0, p, p + 1]] = False
    return mask


def _ordering(first: StationarySolution, second: StationarySolution) -> dict:
    u = np.linspace(0.0, 1.0, ORDERING_SAMPLES)
    difference = first.regularized(u) - second.regularized(u)
    above, below = np.all(difference >= -ORDER_TOLERANCE), np.all(difference <= ORDER_TOLERANCE)
    record = {"levels": [first.n, second.n], "comparable": bool(above or below), "consistent_fraction": None}
    if record["comparable"]:
        # the larger g gives the smaller front
        gap = second.profile.u - first.profile.u if above else first.profile.u - second.profile.u
        record["consistent_fraction"] = float(np.mean(gap >= -RANGE_TOLERANCE))
    return record


def extract_discontinuous_limit(
    solutions: Sequence[StationarySolution], kernel: SampledKernel
) -> DiscontinuousLimit:
    """
    Extrapolate the fronts u_n to n = infinity and certify the jump at 0.

    At every node the values of the three finest levels are fitted by a quadratic in 1/n and
    evaluated at 0. The one-sided limits at 0 come from quadratic extrapolation of the three
    nearest nodes on either side.

    Parameters
    ----------
    solutions : Sequence[StationarySolution]
        At least four levels solved on one grid with the same pin.
    kernel : SampledKernel
        The kernel of the solves.

    Returns
    -------
    DiscontinuousLimit
        The limit, its jump and the certificate.

    Raises
    ------
    InvalidValueError
        If fewer than four levels are given, levels repeat or the grids differ.
    DemoFailureError
        If the one-sided limits are closer than (b - a) / 2.
    """
    solutions = sorted(solutions, key=lambda solution: solution.n)
    if len(solutions) < MIN_LEVELS:
        raise InvalidValueError(f"the limit needs {MIN_LEVELS} regularization levels, got {len(solutions)}")
    levels = [solution.n for solution in solutions]
    if len(set(levels)) != len(levels):
        raise InvalidValueError(f"regularization levels repeat: {levels}")
    grid = solutions[0].profile.grid
    if any(solution.profile.grid != grid for solution in solutions):
        raise InvalidValueError("regularization levels were solved on different grids")
    x = grid.x
    p = int(np.argmin(np.abs(x)))
    if abs(x[p]) > 1e-9 * grid.h or not 3 <= p <= len(x) - 4:
        raise InvalidValueError("the jump location 0 must be a grid node at least three nodes inside the window")

    finest = solutions[-3:]
    scale = np.array([1.0 / solution.n for solution in finest])
    coefficients = np.polyfit(scale, np.vstack([solution.profile.u for solution in finest]), 2)
    u = np.clip(coefficients[-1], 0.0, 1.0)

    regularized = solutions[-1].regularized
    a, b = regularized.plateau
    lam = solutions[-1].decay_rate
    jump_left = float(3.0 * u[p - 1] - 3.0 * u[p - 2] + u[p - 3])
    jump_right = float(3.0 * u[p + 1] - 3.0 * u[p + 2] + u[p + 3])
    jump = jump_right - jump_left
    if jump < 0.5 * (b - a):
        raise DemoFailureError(
            f"one-sided limits {jump_left:.6g} and {jump_right:.6g} do not separate by (b - a) / 2",
            diagnostics={"a": a, "b": b, "jump_left": jump_left, "jump_right": jump_right, "levels": levels},
        )

    convolved = stationary_map(kernel, u, lam)
    mismatch = np.abs(convolved - regularized.truncated(u))
    residual_offjump = float(np.max(mismatch[_offjump_mask(len(u), p)]))
    continuity = float(np.max(np.abs(np.diff(convolved))))
    continuity_bound = CONTINUITY_SLACK * grid.h * kernel.sup
    ordering = [_ordering(first, second) for first, second in zip(solutions[:-1], solutions[1:])]
    checks = {
        "separation": True,
        "left_limit": bool(jump_left <= a * (1.0 + LIMIT_TOLERANCE)),
        "right_limit": bool(abs(jump_right - b) <= LIMIT_TOLERANCE * b),
        "residual": bool(residual_offjump <= OFFJUMP_TOLERANCE),
        "continuity": bool(continuity <= continuity_bound),
    }
    logger.info(
        "limit jumps from %.6f to %.6f at 0 (a = %.6f, b = %.6f), off-jump residual %.2e",
        jump_left,
        jump_right,
        a,
        b,
        residual_offjump,
    )
    profile = Profile(grid, u, 0.0, metadata={"levels": levels, "jump_at": 0.0})
    return DiscontinuousLimit(
        profile, 0.0, jump_left, jump_right, jump, residual_offjump, continuity, continuity_bound, ordering, checks
    )


PinResult = namedtuple("PinResult", ["pin", "solution", "residual_offjump", "survives"])
PinResult.__doc__ = """
Named tuple holding one member of the exploratory pin sweep.

Attributes
----------
pin : float
    The value u(0) = a'.
solution : StationarySolution or None
    The pinned front of g_n, None when the solve failed.
residual_offjump : float or None
    max |J * u - g~(u)| away from the pinned node.
survives : bool
    Whether the residual stays below 1e-4.
"""


def pin_sweep(
    kernel: SampledKernel,
    regularized: RegularizedG,
    grid: Grid,
    pins: Optional[Sequence[float]] = None,
    settings: Optional[StationarySettings] = None,
    workers: int = 1,
) -> List[PinResult]:
    """
    Exploratory fronts of one regularization pinned at u(0) = a' for a' in (a, b).

    Each member is checked against the truncated g~ away from the pinned node. Surviving members
    are candidates for further discontinuous fronts, not proven solutions of the limit problem.
    """
    a, b = regularized.plateau
    pins = [a + (b - a) * fraction for fraction in (0.25, 0.5, 0.75)] if pins is None else [float(p) for p in pins]
    for value in pins:
        if not a < value < b:
            raise InvalidValueError(f"sweep pins must lie in the plateau ({a:.6g}, {b:.6g}), got {value}")
    lam = lambda_of_c(kernel, regularized.base, 0.0).lam
    p = int(np.argmin(np.abs(grid.x)))

    def solve(value: float) -> PinResult:
        try:
            solution = solve_regularized(kernel, regularized, grid, value, settings, lam=lam)
        except FrontlabError as exc:
            logger.info("pin %.6f: no front (%s)", value, exc)
            return PinResult(value, None, None, False)
        u = solution.profile.u
        mismatch = np.abs(stationary_map(kernel, u, lam) - regularized.truncated(u))
        residual = float(np.max(mismatch[_offjump_mask(len(u), p)]))
        return PinResult(value, solution, residual, residual <= OFFJUMP_TOLERANCE)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(solve, pins))
    else:
        results = [solve(value) for value in pins]
    logger.info("exploratory pin sweep: %d of %d members survive", sum(r.survives for r in results), len(results))
    return results


DemoResult = namedtuple("DemoResult", ["case", "solutions", "limit", "sweep", "certificate"])
DemoResult.__doc__ = """
Named tuple holding the outcome of the non-uniqueness demo.

Attributes
----------
case : DemoCase
    The reaction term and kernel.
solutions : List[StationarySolution]
    Fronts of the regularizations, ordered by n.
limit : DiscontinuousLimit
    The extrapolated discontinuous front.
sweep : List[PinResult]
    The exploratory pin sweep.
certificate : dict
    a, b, the one-sided limits, the off-jump residual, c1 and the pass flags.
"""


def run_demo(
    case: Optional[DemoCase] = None,
    grid: Grid = DEFAULT_GRID,
    levels: Sequence[int] = DEFAULT_LEVELS,
    pins: Optional[Sequence[float]] = None,
    settings: Optional[StationarySettings] = None,
    workers: int = 1,
) -> DemoResult:
    """
    Regularize, solve every level, extract the limit and sweep the pin.

    Levels are solved independently, on up to ``workers`` threads, and collected in the order of
    ``levels``.

    Raises
    ------
    DemoFailureError
        If a regularized term is not KPP or the limit does not separate.
    """
    case = case or build_case(grid.h)
    levels = sorted(int(n) for n in levels)
    regularizations = [regularize(case.f, n, case.analysis) for n in levels]
    for regularized in regularizations:
        if not classify(regularized.nonlinearity()).kpp:
            raise DemoFailureError(
                f"u - g_{regularized.n}(u) is not of KPP type", diagnostics=regularized.describe()
            )
    lam = lambda_of_c(case.kernel, case.f, 0.0, speed=case.speed).lam

    def solve(regularized: RegularizedG) -> StationarySolution:
        return solve_regularized(case.kernel, regularized, grid, settings=settings, lam=lam)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            solutions = list(pool.map(solve, regularizations))
    else:
        solutions = [solve(regularized) for regularized in regularizations]
    limit = extract_discontinuous_limit(solutions, case.kernel)
    sweep = pin_sweep(case.kernel, regularizations[-1], grid, pins, settings, workers)
    a, b = case.analysis.plateau
    certificate = {
        "a": a,
        "b": b,
        "jump_left": limit.jump_left,
        "jump_right": limit.jump_right,
        "jump": limit.jump,
        "residual_offjump": limit.residual_offjump,
        "c1": case.speed.speed,
        "continuity": limit.continuity,
        "continuity_bound": limit.continuity_bound,
        "checks": limit.checks,
    }
    return DemoResult(case, solutions, limit, sweep, certificate)
