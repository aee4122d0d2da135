# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Monotone iteration for the front problem truncated to a finite window.

On the grid of [-r, R] the profile solves

    eps u'' + (J * u - u) - c u' + f(u) = 0,   u(-r) = theta,   u(R) = 1,

where the mass of J reaching beyond the window is accounted for by the boundary corrections
h_r (exterior held at theta) and h_R (exterior held at 1). With K above the Lipschitz constant
of f every sweep

    (eps D2 - c D1 - (1 + K)) u_new = -(J * u + f(u) + K u + h_r + h_R)

is order preserving, so iterates started from theta increase and iterates started from 1
decrease towards a solution.

The position of a front on a long window is only weakly determined by the boundary data, the
translation direction is almost neutral. Newton steps are therefore damped and, where they
matter most, pinned: `pinned_newton` fixes the value of u at one point and solves for one more
unknown, the speed c or the amplitude of an exponential left exterior.

This module provides:
- `SolverSettings`, `IterationReport`, `Start`, `Scheme`: configuration, bookkeeping and options.
- `boundary_corrections`: the exterior masses h_r and h_R.
- `newton_system`: residual, sparse Jacobian and c-derivative of the discrete problem.
- `pin_weights`, `pinned_newton`: Newton's method with u fixed at one point.
- `relax`, `settled`: a fixed number of sweeps, and the signature of a monotone run.
- `solve_truncated`: the monotone iteration with Newton acceleration and a centred polish.
"""

import logging
from collections import namedtuple
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import sparse
from scipy.linalg import solve_banded
from scipy.sparse.linalg import spsolve

from ..exceptions import (
    ClassificationError,
    InvalidValueError,
    IterationBudgetError,
    NoCrossingError,
    SchemeViolationError,
)
from ..kernels.sampled import SampledKernel
from ..util.convolution import exterior_masses
from .grid import Grid, Profile, crossing

logger = logging.getLogger(__name__)

ORDER_TOLERANCE = 1e-12
RANGE_TOLERANCE = 1e-10
NEWTON_ITERATIONS = 30
DAMPING_HALVINGS = 12
SPEED_DRIFT = 1e-8
G_SAMPLES = 10001
SETTLING_SWEEPS = 5
STALL_WINDOW = 200
STALL_RATIO = 0.5

SolverSettings = namedtuple(
    "SolverSettings",
    ["tol", "max_iterations", "shift_factor", "newton_switch", "polish"],
    defaults=(1e-10, 20000, 1.1, 1e-5, True),
)
SolverSettings.__doc__ = """
Named tuple holding the settings of the truncated solver.

Attributes
----------
tol : float
    Convergence threshold on sup |u_new - u|, by default 1e-10.
max_iterations : int
    Iteration budget, by default 20000.
shift_factor : float
    K = shift_factor * Lip(f), by default 1.1.
newton_switch : float
    Sup-change below which damped Newton steps replace the monotone sweeps, by default 1e-5.
    Newton steps are also tried when the sup-change stalls above it. Zero disables the
    acceleration.
polish : bool
    Whether a converged upwind profile is refined on the centred scheme, by default True.
"""

IterationReport = namedtuple(
    "IterationReport", ["iterations", "sup_change", "monotone_iterates", "history", "newton_steps", "polished"]
)
IterationReport.__doc__ = """
Named tuple holding the bookkeeping of a truncated solve.

Attributes
----------
iterations : int
    Sweeps and Newton steps used.
sup_change : float
    Final sup |u_new - u|.
monotone_iterates : bool
    Whether the sup-change of the sweeps did not increase after the first five, see `settled`.
history : list of float
    Sup-change of every sweep.
newton_steps : int
    Accepted Newton steps.
polished : bool
    Whether the centred refinement was accepted.
"""

BoundaryCorrections = namedtuple("BoundaryCorrections", ["h_r", "h_R"])
BoundaryCorrections.__doc__ = """
Named tuple holding the kernel mass reaching beyond the window, weighted by the exterior states.

Attributes
----------
h_r : np.ndarray
    theta times the mass beyond -r at every node.
h_R : np.ndarray
    The mass beyond R at every node.
"""


class Start(Enum):
    ASCENDING = "ascending"
    """u = theta in the interior, iterates increase."""
    DESCENDING = "descending"
    """u = 1 in the interior, iterates decrease."""
    WARM = "warm"
    """A given profile, iterates are not ordered."""


class Scheme(Enum):
    UPWIND = "upwind"
    """D1 taken against the sign of c, the discrete operator is an M-matrix."""
    CENTRED = "centred"
    """Second order D1, used to refine converged profiles."""


def boundary_corrections(kernel: SampledKernel, grid: Grid, theta: float) -> BoundaryCorrections:
    """
    Partial kernel masses h_r = theta int_{-inf}^{-r} J(x - y) dy and h_R = int_R^inf J(x - y) dy.

    Both vanish at nodes farther than the kernel radius from the respective end.
    """
    grid.check_kernel(kernel)
    left, right = exterior_masses(kernel.weights, grid.size)
    return BoundaryCorrections(theta * left, right)


def _stencil(c: float, eps: float, h: float, scheme: Scheme) -> Tuple[float, float, float]:
    """Coefficients (lower, diagonal, upper) of eps D2 - c D1."""
    diffusion = eps / h**2
    if scheme is Scheme.UPWIND:
        return diffusion + max(c, 0.0) / h, -2.0 * diffusion - abs(c) / h, diffusion + max(-c, 0.0) / h
    return diffusion + 0.5 * c / h, -2.0 * diffusion, diffusion - 0.5 * c / h


def _nonlocal(kernel: SampledKernel, u: np.ndarray, corrections: BoundaryCorrections) -> np.ndarray:
    return kernel.convolve(u) + corrections.h_r + corrections.h_R


def _residual(kernel, f, u, c, eps, corrections, scheme) -> np.ndarray:
    lower, diagonal, upper = _stencil(c, eps, kernel.h, scheme)
    inner = u[1:-1]
    local = lower * u[:-2] + diagonal * inner + upper * u[2:]
    return local + _nonlocal(kernel, u, corrections)[1:-1] - inner + f(inner)


def newton_system(
    kernel: SampledKernel,
    f,
    u: np.ndarray,
    c: float,
    eps: float,
    corrections: BoundaryCorrections,
    scheme: Scheme = Scheme.UPWIND,
) -> Tuple[np.ndarray, sparse.csc_matrix, np.ndarray]:
    """
    Residual, Jacobian and c-derivative of the discrete problem at the interior nodes.

    Parameters
    ----------
    kernel : SampledKernel
        The dispersal kernel, its half width n is the bandwidth of the Jacobian.
    f : Nonlinearity
        The reaction term.
    u : np.ndarray
        Values at all nodes, boundary nodes included.
    c, eps : float
        Speed and viscosity.
    corrections : BoundaryCorrections
        Exterior masses of the window.
    scheme : Scheme, optional
        Differencing of the advection term, by default UPWIND.

    Returns
    -------
    Tuple[np.ndarray, sparse.csc_matrix, np.ndarray]
        F at the interior nodes, the sparse Jacobian dF/du with 2n + 1 diagonals and dF/dc.
    """
    h, n = kernel.h, kernel.n
    m = len(u) - 2
    lower, diagonal, upper = _stencil(c, eps, h, scheme)
    inner = u[1:-1]
    # entry (i, j) of the convolution block is w_{i-j}
    convolution = sparse.diags(kernel.weights[::-1].tolist(), np.arange(-n, n + 1), shape=(m, m))
    local = sparse.diags(
        [np.full(m - 1, lower), diagonal - 1.0 + f.df(inner), np.full(m - 1, upper)], [-1, 0, 1], shape=(m, m)
    )
    if scheme is Scheme.UPWIND:
        slope = (u[1:-1] - u[:-2]) / h if c >= 0.0 else (u[2:] - u[1:-1]) / h
    else:
        slope = 0.5 * (u[2:] - u[:-2]) / h
    residual = _residual(kernel, f, u, c, eps, corrections, scheme)
    return residual, (convolution + local).tocsc(), -slope


def _admissible(u: np.ndarray, theta: float, tolerance: float) -> bool:
    return bool(
        np.all(np.isfinite(u))
        and np.min(u) >= theta - tolerance
        and np.max(u) <= 1.0 + tolerance
        and np.min(np.diff(u)) >= -tolerance
    )


def _damped_newton(kernel, f, u, c, eps, theta, corrections, scheme) -> Tuple[Optional[np.ndarray], float]:
    """One Newton step, halved until it stays monotone in range and decreases the residual."""
    residual, jacobian, _ = newton_system(kernel, f, u, c, eps, corrections, scheme)
    norm = float(np.max(np.abs(residual)))
    direction = spsolve(jacobian, -residual)
    if not np.all(np.isfinite(direction)):
        return None, 0.0
    step = 1.0
    for _ in range(DAMPING_HALVINGS):
        candidate = u.copy()
        candidate[1:-1] += step * direction
        if _admissible(candidate, theta, ORDER_TOLERANCE):
            trial = _residual(kernel, f, candidate, c, eps, corrections, scheme)
            if np.max(np.abs(trial)) < (1.0 - 1e-4 * step) * norm:
                return candidate, step
        step *= 0.5
    return None, 0.0


def pin_weights(x: np.ndarray, position: float) -> Optional[Tuple[int, float]]:
    """
    Node index a and weight t with u(position) = (1 - t) u[a] + t u[a + 1].

    None when the position is not strictly inside the interior nodes.
    """
    a = int(np.searchsorted(x, position, side="right")) - 1
    if not 1 <= a <= len(x) - 3:
        return None
    return a, float((position - x[a]) / (x[1] - x[0]))


def _boundary_column(kernel: SampledKernel, size: int, lower: float, tail_masses: np.ndarray) -> np.ndarray:
    """dF/du_0 at the interior nodes when the exterior scales with u_0."""
    unit = np.zeros(size)
    unit[0] = 1.0
    column = kernel.convolve(unit)[1:-1] + tail_masses[1:-1]
    column[0] += lower
    return column


def bordered_newton(
    kernel, f, u, c, eps, theta, corrections, x, position, level, scheme, tol, tail_masses=None
) -> Optional[Tuple[np.ndarray, float, int]]:
    """`pinned_newton` that also returns the number of steps taken."""
    pinned = pin_weights(x, position)
    if pinned is None:
        return None
    a, t = pinned
    m = len(u) - 2
    pin = sparse.csr_matrix(([1.0 - t, t], ([0, 0], [a - 1, a])), shape=(1, m))
    u = u.copy()
    if tail_masses is not None:
        column = _boundary_column(kernel, len(u), _stencil(c, eps, kernel.h, scheme)[0], tail_masses)
    for iteration in range(1, NEWTON_ITERATIONS + 1):
        if tail_masses is not None:
            corrections = BoundaryCorrections(u[0] * tail_masses, corrections.h_R)
            residual, jacobian, _ = newton_system(kernel, f, u, c, eps, corrections, scheme)
        else:
            residual, jacobian, column = newton_system(kernel, f, u, c, eps, corrections, scheme)
        mismatch = (1.0 - t) * u[a] + t * u[a + 1] - level
        system = sparse.bmat([[jacobian, sparse.csc_matrix(column[:, None])], [pin, None]], format="csc")
        update = spsolve(system, -np.concatenate((residual, [mismatch])))
        if not np.all(np.isfinite(update)):
            return None
        step = 1.0
        for _ in range(DAMPING_HALVINGS):
            candidate = u.copy()
            candidate[1:-1] += step * update[:-1]
            if tail_masses is not None:
                candidate[0] += step * update[-1]
            if _admissible(candidate, theta, RANGE_TOLERANCE):
                break
            step *= 0.5
        else:
            return None
        u = candidate
        if tail_masses is None:
            c = c + step * update[-1]
        if step == 1.0 and np.max(np.abs(update)) <= tol:
            return np.clip(u, theta, 1.0), float(c), iteration
    return None


def pinned_newton(
    kernel: SampledKernel,
    f,
    u: np.ndarray,
    c: float,
    eps: float,
    theta: float,
    corrections: BoundaryCorrections,
    x: np.ndarray,
    position: float,
    level: float,
    scheme: Scheme = Scheme.CENTRED,
    tol: float = 1e-10,
    tail_masses: Optional[np.ndarray] = None,
) -> Optional[Tuple[np.ndarray, float]]:
    """
    Newton's method for u and one scalar with the side condition u(position) = level.

    The side condition, by linear interpolation between the neighbouring nodes, removes the
    translation freedom of the front, and the bordered system stays well conditioned on long
    windows. The scalar is the speed c, or with ``tail_masses`` the boundary value u(-r), which
    then also scales the exterior. Steps are halved until the iterate is monotone and within
    [theta, 1].

    Parameters
    ----------
    kernel : SampledKernel
        The dispersal kernel.
    f : Nonlinearity
        The reaction term.
    u : np.ndarray
        Start values at all nodes.
    c : float
        Start speed.
    eps, theta : float
        Viscosity and lower bound of the values; theta is also the boundary value at -r unless
        ``tail_masses`` is given.
    corrections : BoundaryCorrections
        Exterior masses of the window; h_r is rebuilt from ``tail_masses`` when given.
    x : np.ndarray
        Node positions.
    position, level : float
        The pinned point and the value of u there.
    scheme : Scheme, optional
        Differencing of the advection term, by default CENTRED.
    tol : float, optional
        Convergence threshold on the full Newton update, by default 1e-10.
    tail_masses : np.ndarray, optional
        Exterior contribution per unit boundary value, see `exterior_tail`. The speed stays fixed.

    Returns
    -------
    Tuple[np.ndarray, float] or None
        Converged values and speed, None when the iteration fails.
    """
    solved = bordered_newton(kernel, f, u, c, eps, theta, corrections, x, position, level, scheme, tol, tail_masses)
    return None if solved is None else solved[:2]


def _polish(kernel, f, u, c, eps, theta, corrections, x, tol) -> Optional[np.ndarray]:
    """Centred refinement pinned at the 1/2-crossing, rejected when the speed has to move."""
    try:
        position = crossing(x, u)
    except NoCrossingError:
        return None
    solved = pinned_newton(kernel, f, u, c, eps, theta, corrections, x, position, 0.5, Scheme.CENTRED, tol)
    if solved is None or abs(solved[1] - c) > SPEED_DRIFT:
        return None
    return solved[0]


def shifted_solve(core, c, eps, h, shift, left, right, ratio: float = 0.0) -> np.ndarray:
    """
    Interior values of ((1 + K) - (eps D2 - c D1)) v = core with v(-r) = left + ratio v_1 and v(R) = right.

    A positive ``ratio`` ties the boundary value to the first interior node, as for an exponential
    exterior. The matrix stays strictly diagonally dominant for ratio in [0, 1].
    """
    lower, diagonal, upper = _stencil(c, eps, h, Scheme.UPWIND)
    rhs = core.copy()
    rhs[0] += lower * left
    rhs[-1] += upper * right
    band = np.zeros((3, len(core)))
    band[0, 1:] = -upper
    band[1] = 1.0 + shift - diagonal
    band[1, 0] -= lower * ratio
    band[2, :-1] = -lower
    return solve_banded((1, 1), band, rhs)


def sweep_core(kernel, f, u, shift, corrections) -> np.ndarray:
    """Right-hand side J * u + h_r + h_R + f(u) + K u of a sweep at the interior nodes."""
    inner = u[1:-1]
    return _nonlocal(kernel, u, corrections)[1:-1] + f(inner) + shift * inner


def _sweep(kernel, f, u, c, eps, shift, corrections) -> np.ndarray:
    """One monotone sweep keeping the boundary values of u."""
    new = u.copy()
    new[1:-1] = shifted_solve(sweep_core(kernel, f, u, shift, corrections), c, eps, kernel.h, shift, u[0], u[-1])
    return new


def settled(history: Sequence[float], skip: int = SETTLING_SWEEPS) -> bool:
    """Whether the sup-changes after the first ``skip`` sweeps never increase, up to 1e-12."""
    later = np.asarray(history[skip:], dtype=float)
    return bool(np.all(np.diff(later) <= ORDER_TOLERANCE))


def stalled(history: Sequence[float]) -> bool:
    """Whether the last sup-change is more than half of the one 200 sweeps earlier."""
    return len(history) > STALL_WINDOW and history[-1] > STALL_RATIO * history[-1 - STALL_WINDOW]


def relax(
    kernel: SampledKernel,
    f,
    grid: Grid,
    c: float,
    eps: float,
    u: np.ndarray,
    sweeps: int,
    theta: float = 0.0,
    shift_factor: float = 1.1,
) -> np.ndarray:
    """
    ``sweeps`` monotone sweeps at speed c from ``u``, without a convergence test.

    The map is order preserving and, on profiles increasing in x, non-increasing in c, so the
    results for a common start are ordered by c.
    """
    corrections = boundary_corrections(kernel, grid, theta)
    shift = shift_factor * f.lipschitz()
    u = np.asarray(u, dtype=float).copy()
    u[0], u[-1] = theta, 1.0
    for _ in range(sweeps):
        u = _sweep(kernel, f, u, c, eps, shift, corrections)
    return u


def _check_g_monotone(f) -> None:
    u = np.linspace(0.0, 1.0, G_SAMPLES)
    if np.any(f.dg(u) <= 0.0):
        raise ClassificationError(
            f"eps = 0 and c = 0 need g(u) = u - f(u) strictly increasing, {f.name} violates this; "
            "use demo-nonunique for stationary fronts of non-monotone g"
        )


def _initial(grid: Grid, theta: float, start: Start, initial: Optional[np.ndarray]) -> np.ndarray:
    if start is Start.ASCENDING:
        u = np.full(grid.size, theta)
    elif start is Start.DESCENDING:
        u = np.ones(grid.size)
    else:
        if initial is None or len(initial) != grid.size:
            raise InvalidValueError(f"a warm start needs {grid.size} initial values")
        u = np.clip(np.asarray(initial, dtype=float), theta, 1.0)
    u[0], u[-1] = theta, 1.0
    return u


def solve_truncated(
    kernel: SampledKernel,
    f,
    grid: Grid,
    c: float,
    eps: float,
    theta: float = 0.0,
    settings: Optional[SolverSettings] = None,
    start: Start = Start.ASCENDING,
    initial: Optional[np.ndarray] = None,
    polish: Optional[bool] = None,
) -> Tuple[Profile, IterationReport]:
    """
    Solve the truncated front problem by monotone iteration.

    Sweeps solve the shifted linear two-point problem with upwind advection, an M-matrix, so
    ordered starts give ordered iterates; this is checked at every sweep. Once the sup-change
    falls below ``settings.newton_switch``, or has not halved over the last 200 sweeps, damped
    Newton steps on the same discrete problem take over; sweeps resume for another 200 if a step
    fails. The converged upwind profile is finally refined on the centred scheme, pinned at its
    1/2-crossing, when the refinement stays monotone and in range and does not need to move c by
    more than 1e-8.

    At a fixed speed the front sits where the boundary data put it, usually against one end of
    the window. `solve_pinned` computes fronts pinned at a point instead.

    Parameters
    ----------
    kernel : SampledKernel
        The dispersal kernel, sampled with the grid spacing.
    f : Nonlinearity
        The reaction term.
    grid : Grid
        The window.
    c : float
        The speed.
    eps : float
        Viscosity, eps >= 0.
    theta : float, optional
        Boundary value at -r, in [0, 1/2), by default 0.
    settings : SolverSettings, optional
        Solver settings, by default SolverSettings().
    start : Start, optional
        ASCENDING (u = theta), DESCENDING (u = 1) or WARM, by default ASCENDING.
    initial : np.ndarray, optional
        Start values for a WARM start.
    polish : bool, optional
        Overrides ``settings.polish``.

    Returns
    -------
    Tuple[Profile, IterationReport]
        The profile and the iteration bookkeeping.

    Raises
    ------
    InvalidValueError
        If eps or theta lie outside their range.
    ClassificationError
        If eps = c = 0 and g(u) = u - f(u) is not strictly increasing.
    SchemeViolationError
        If a sweep leaves [theta, 1], loses the ordering of the iterates or ends non-monotone.
    IterationBudgetError
        If the iteration does not converge within the budget.
    """
    settings = settings or SolverSettings()
    polish = settings.polish if polish is None else polish
    if not eps >= 0.0:
        raise InvalidValueError(f"viscosity must be nonnegative, got {eps}")
    if not 0.0 <= theta < 0.5:
        raise InvalidValueError(f"boundary value theta must lie in [0, 1/2), got {theta}")
    if eps == 0.0 and c == 0.0:
        _check_g_monotone(f)
    corrections = boundary_corrections(kernel, grid, theta)
    shift = settings.shift_factor * f.lipschitz()
    u = _initial(grid, theta, start, initial)
    ordered = start is not Start.WARM
    newton_from = 0 if settings.newton_switch > 0.0 else None
    history = []
    newton_steps = 0
    change = np.inf
    for iteration in range(1, settings.max_iterations + 1):
        due = change <= settings.newton_switch or stalled(history)
        if newton_from is not None and iteration >= newton_from and due:
            candidate, step = _damped_newton(kernel, f, u, c, eps, theta, corrections, Scheme.UPWIND)
            if candidate is not None:
                change = float(np.max(np.abs(candidate - u)))
                u = np.clip(candidate, theta, 1.0)
                newton_steps += 1
                ordered = False
                if step == 1.0 and change <= settings.tol:
                    break
                continue
            logger.debug("Newton step rejected at iteration %d, continuing with sweeps", iteration)
            newton_from = iteration + STALL_WINDOW
        new = _sweep(kernel, f, u, c, eps, shift, corrections)
        if np.min(new) < theta - ORDER_TOLERANCE or np.max(new) > 1.0 + ORDER_TOLERANCE:
            raise SchemeViolationError(
                f"iterate left [{theta}, 1] at sweep {iteration}",
                diagnostics={"iteration": iteration, "u_min": float(np.min(new)), "u_max": float(np.max(new))},
            )
        if ordered:
            step = new - u if start is Start.ASCENDING else u - new
            if np.min(step) < -ORDER_TOLERANCE:
                raise SchemeViolationError(
                    f"{start.value} iterates lost their ordering at sweep {iteration}; K = {shift:.4g} is too small",
                    diagnostics={"iteration": iteration, "shift": shift, "violation": float(-np.min(step))},
                )
        change = float(np.max(np.abs(new - u)))
        history.append(change)
        u = new
        if change <= settings.tol:
            break
    else:
        raise IterationBudgetError(
            f"truncated solve did not converge in {settings.max_iterations} iterations (sup-change {change:.3e})",
            diagnostics={"c": c, "eps": eps, "theta": theta, "sup_change": change, "grid": grid.describe()},
        )
    if np.min(np.diff(u)) < -ORDER_TOLERANCE:
        raise SchemeViolationError(
            "converged profile is not monotone",
            diagnostics={"c": c, "eps": eps, "violation": float(-np.min(np.diff(u)))},
        )
    polished = False
    if polish:
        refined = _polish(kernel, f, u, c, eps, theta, corrections, grid.x, settings.tol)
        if refined is None:
            logger.info("centred refinement rejected for c = %g, eps = %g; keeping the upwind profile", c, eps)
        else:
            u, polished = refined, True
    logger.debug(
        "truncated solve c = %g eps = %g: %d iterations (%d Newton), change %.2e",
        c,
        eps,
        iteration,
        newton_steps,
        change,
    )
    report = IterationReport(iteration, change, settled(history), history, newton_steps, polished)
    profile = Profile(grid, u, float(c), float(eps), float(theta), {"polished": polished, "shift": shift})
    return profile, report
