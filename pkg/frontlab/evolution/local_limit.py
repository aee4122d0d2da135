# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
The diffusion limit of rescaled kernels.

For J_eps(x) = J(x / eps) / eps and a smooth phi,

    J_eps * phi - phi = eps beta phi' + eps^2 alpha phi'' + o(eps^2),

with the drift beta = -int z J and alpha = int z^2 J / 2. `local_limit_check` measures the
remainder on a grid; `local_limit_ladder` follows it over halving eps.
"""

import logging
from collections import namedtuple
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from ..exceptions import GridTooCoarseError, InvalidValueError
from ..kernels.sampled import SampledKernel

logger = logging.getLogger(__name__)

MAX_EPS = 0.5
DILATION_TOLERANCE = 1e-9
FIELD_HALF_WIDTH = 5.0
TEST_POINTS = 2001
DEFAULT_LADDER = (0.4, 0.2, 0.1, 0.05)


@dataclass(frozen=True)
class SmoothField:
    """A test function with its first two derivatives."""

    name: str
    phi: Callable[[np.ndarray], np.ndarray]
    dphi: Callable[[np.ndarray], np.ndarray]
    d2phi: Callable[[np.ndarray], np.ndarray]

    @classmethod
    def gaussian(cls) -> "SmoothField":
        """exp(-x^2 / 2)."""
        return cls(
            "gaussian",
            lambda x: np.exp(-0.5 * x**2),
            lambda x: -x * np.exp(-0.5 * x**2),
            lambda x: (x**2 - 1.0) * np.exp(-0.5 * x**2),
        )

    @classmethod
    def tanh(cls) -> "SmoothField":
        """(1 + tanh x) / 2, a front-shaped probe."""
        return cls(
            "tanh",
            lambda x: 0.5 * (1.0 + np.tanh(x)),
            lambda x: 0.5 / np.cosh(x) ** 2,
            lambda x: -np.tanh(x) / np.cosh(x) ** 2,
        )

    @classmethod
    def polynomial(cls, coefficients: Sequence[float]) -> "SmoothField":
        """Polynomial with the given coefficients in increasing degree."""
        p = Polynomial(coefficients)
        return cls(f"polynomial{len(coefficients) - 1}", p, p.deriv(1), p.deriv(2))

    @classmethod
    def from_name(cls, name: str) -> "SmoothField":
        probes = {"gaussian": cls.gaussian, "tanh": cls.tanh}
        if name not in probes:
            raise InvalidValueError(f"unknown test function '{name}', choose from {sorted(probes)}")
        return probes[name]()


LimitCheck = namedtuple("LimitCheck", ["eps", "error", "scaled_error", "dilation", "h"])
LimitCheck.__doc__ = """
Named tuple holding the remainder of the diffusion expansion at one eps.

Attributes
----------
eps : float
    The scale of the kernel.
error : float
    sup |J_eps * phi - phi - eps beta phi' - eps^2 alpha phi''| over the test points.
scaled_error : float
    error / eps^2, which tends to zero with eps.
dilation : int
    Grid steps per kernel step, eps h_kernel / h.
h : float
    Spacing of the evaluation grid.
"""


def _dilation(kernel: SampledKernel, eps: float, h: float) -> int:
    ratio = eps * kernel.h / h
    m = int(round(ratio))
    if m < 1 or abs(ratio - m) > DILATION_TOLERANCE * max(1.0, ratio):
        raise GridTooCoarseError(
            f"spacing {h} does not resolve the kernel scaled by eps = {eps}: eps h_kernel / h = {ratio:.6g} "
            "must be a positive integer",
            diagnostics={"eps": eps, "h": h, "kernel_h": kernel.h},
        )
    return m


def local_limit_check(
    kernel: SampledKernel,
    eps: float,
    probe: SmoothField,
    h: Optional[float] = None,
    half_width: float = FIELD_HALF_WIDTH,
) -> LimitCheck:
    """
    Remainder of the second order expansion of J_eps * phi - phi on a grid.

    The rescaled kernel lives on the nodes eps z_k = k m h of an evaluation grid with spacing h,
    so J_eps * phi at a grid node is the weighted sum of phi at grid nodes m steps apart. About
    2001 evenly strided grid nodes serve as test points.

    Parameters
    ----------
    kernel : SampledKernel
        The kernel J; its weights and moments are reused for every eps.
    eps : float
        Scale, 0 < eps <= 0.5.
    probe : SmoothField
        The test function.
    h : float, optional
        Spacing of the evaluation grid, by default eps times the kernel spacing.
    half_width : float, optional
        Test points cover [-half_width, half_width], by default 5.

    Returns
    -------
    LimitCheck
        The remainder and its scaled value.

    Raises
    ------
    InvalidValueError
        If eps is outside (0, 0.5].
    GridTooCoarseError
        If eps h_kernel / h is not a positive integer.
    """
    if not 0.0 < eps <= MAX_EPS:
        raise InvalidValueError(f"eps must lie in (0, {MAX_EPS}], got {eps}")
    h = eps * kernel.h if h is None else float(h)
    m = _dilation(kernel, eps, h)
    nodes = int(np.ceil(half_width / h))
    stride = max(1, (2 * nodes + 1) // TEST_POINTS)
    x = h * np.arange(-nodes, nodes + 1, stride)
    offsets = m * h * np.arange(-kernel.n, kernel.n + 1)
    convolution = probe.phi(x[:, None] - offsets[None, :]) @ kernel.weights
    expansion = probe.phi(x) + eps * kernel.beta * probe.dphi(x) + eps**2 * kernel.alpha * probe.d2phi(x)
    error = float(np.max(np.abs(convolution - expansion)))
    logger.debug("local limit eps = %g (m = %d): remainder %.3e", eps, m, error)
    return LimitCheck(float(eps), error, error / eps**2, m, h)


LimitLadder = namedtuple("LimitLadder", ["checks", "decreasing"])
LimitLadder.__doc__ = """
Named tuple holding the remainders over a decreasing eps ladder.

Attributes
----------
checks : List[LimitCheck]
    One check per eps, in ladder order.
decreasing : bool
    Whether error / eps^2 decreases strictly along the ladder.
"""


def local_limit_ladder(
    kernel: SampledKernel,
    probe: SmoothField,
    eps_values: Sequence[float] = DEFAULT_LADDER,
    h: Optional[float] = None,
) -> LimitLadder:
    """
    Run `local_limit_check` for every eps on one evaluation grid.

    The grid spacing defaults to the smallest eps times the kernel spacing, so that every larger
    eps of a halving ladder is resolved by an integer dilation.
    """
    eps_values = [float(eps) for eps in eps_values]
    if len(eps_values) < 2 or np.any(np.diff(eps_values) >= 0.0):
        raise InvalidValueError(f"eps ladder must hold at least two strictly decreasing values, got {eps_values}")
    h = min(eps_values) * kernel.h if h is None else float(h)
    checks = [local_limit_check(kernel, eps, probe, h) for eps in eps_values]
    scaled = np.array([check.scaled_error for check in checks])
    decreasing = bool(np.all(np.diff(scaled) < 0.0))
    logger.info("scaled remainders %s, decreasing = %s", np.array2string(scaled, precision=3), decreasing)
    return LimitLadder(checks, decreasing)
