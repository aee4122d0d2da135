# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Grid samples of dispersal kernels and the quantities derived from them.

This module provides:
- `SampledKernel`: immutable grid samples of a kernel with cached moments.
- `build_kernel`: sampling, truncation and normalization of a `KernelFamily`.
- `mgf`: the moment generating integral M(lambda) = int J(-x) exp(lambda x) dx.
- `mollison_check`: whether a one-sided exponential moment exists.
- `reflect`: the kernel x -> J(-x).
- `is_c1`: smoothness flag used before tail asymptotics.
- `truncation_edge_weight`: weight of the truncated tails in an MGF evaluation.
"""

import logging
import warnings
from collections import namedtuple
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
from scipy.integrate import trapezoid
from scipy.optimize import brentq

from ..exceptions import InvalidKernelError, MGFOutOfRangeError, TruncationWarning
from ..util.convolution import convolve as _convolve
from .families import MAX_EXPONENT, KernelFamily

logger = logging.getLogger(__name__)

OMITTED_MASS = 1e-12
EDGE_WEIGHT_TOLERANCE = 1e-6
MASS_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class SampledKernel:
    """
    Kernel samples J(x_k) on the nodes x_k = k h, k = -n .. n.

    Attributes
    ----------
    family : KernelFamily
        Analytic descriptor the samples were built from.
    h : float
        Grid spacing.
    values : np.ndarray
        Nonnegative samples, normalized to unit trapezoid mass. Read only.
    support : Tuple[float, float]
        Declared support bounds of the family, infinite for analytic tails.
    mass, mean, nu, alpha, beta : float
        Cached moments: mass, first moment, first absolute moment int |z| J, half second moment
        int z^2 J / 2 and the drift beta = -mean.
    metadata : dict
        Construction details, among them the truncation radius and the omitted tail mass.
    """

    family: KernelFamily
    h: float
    values: np.ndarray
    support: Tuple[float, float]
    mass: float
    mean: float
    nu: float
    alpha: float
    beta: float
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def n(self) -> int:
        """Half width of the index range."""
        return (len(self.values) - 1) // 2

    @property
    def x(self) -> np.ndarray:
        return np.arange(-self.n, self.n + 1) * self.h

    @property
    def radius(self) -> float:
        return self.n * self.h

    @property
    def weights(self) -> np.ndarray:
        """Convolution weights summing to one exactly."""
        return self.values / self.values.sum()

    @property
    def sup(self) -> float:
        return float(self.values.max())

    def convolve(self, u: np.ndarray, left: float = 0.0, right: float = 0.0, method: str = "auto") -> np.ndarray:
        """
        Discrete J * u on a window of spacing h with the exterior held at ``left`` and ``right``.
        """
        return _convolve(self.weights, u, left, right, method)

    def to_csv(self, path: Union[str, Path]) -> None:
        """Write the samples with the columns x, J."""
        np.savetxt(path, np.column_stack((self.x, self.values)), delimiter=",", header="x,J", comments="")


def _truncation_radius(family: KernelFamily, omitted_mass: float, max_radius: float) -> float:
    radius = 1.0
    while family.tail_mass(radius) >= omitted_mass and radius < max_radius:
        radius *= 2.0
    if radius >= max_radius:
        radius = max_radius
        left_over = family.tail_mass(radius)
        if left_over >= omitted_mass:
            warnings.warn(
                f"{family.tag} kernel truncated at the radius cap {max_radius} with omitted mass {left_over:.3e}",
                TruncationWarning,
            )
            return radius
    lower = radius / 2.0 if radius > 1.0 else 0.0
    return brentq(lambda r: family.tail_mass(r) - omitted_mass, lower, radius, xtol=1e-10)


def _moments(x: np.ndarray, values: np.ndarray) -> Tuple[float, float, float, float]:
    mass = trapezoid(values, x)
    mean = trapezoid(x * values, x)
    nu = trapezoid(np.abs(x) * values, x)
    alpha = 0.5 * trapezoid(x**2 * values, x)
    return float(mass), float(mean), float(nu), float(alpha)


def build_kernel(
    family: KernelFamily, h: float, max_radius: float = 2000.0, omitted_mass: float = OMITTED_MASS
) -> SampledKernel:
    """
    Sample a kernel family on a uniform grid and cache its moments.

    Families with a cumulative distribution are sampled by cell averages
    (F(x + h/2) - F(x - h/2)) / h, all others by point values. Infinite tails are cut where the
    omitted mass drops below ``omitted_mass``; the samples are then renormalized to unit
    trapezoid mass. Symmetric families are symmetrized so that the drift vanishes exactly.

    Parameters
    ----------
    family : KernelFamily
        The analytic kernel family.
    h : float
        Grid spacing, positive.
    max_radius : float, optional
        Cap on the truncation radius of infinite tails, by default 2000.0. Reaching the cap emits a
        `TruncationWarning`.
    omitted_mass : float, optional
        Tail mass that may be dropped, by default 1e-12.

    Returns
    -------
    SampledKernel
        The normalized kernel.

    Raises
    ------
    InvalidKernelError
        If h is not positive or the family cannot be resolved at spacing h.
    """
    if not h > 0.0:
        raise InvalidKernelError(f"kernel spacing must be positive, got h = {h}")
    s_min, s_max = family.support()
    if family.is_compact:
        radius = max(abs(s_min), abs(s_max))
        truncation = None
    else:
        radius = _truncation_radius(family, omitted_mass, max_radius)
        truncation = radius
    n = int(np.ceil(radius / h - 1e-9)) + 2
    x = np.arange(-n, n + 1) * h
    if family.cdf(0.0) is not None:
        cell_left = family.cdf(x + 0.5 * h) - family.cdf(x - 0.5 * h)
        cell_right = family.sf(x - 0.5 * h) - family.sf(x + 0.5 * h)
        values = np.where(x <= 0.0, cell_left, cell_right) / h
        sampling = "cell average"
    else:
        values = np.asarray(family.density(x), dtype=float)
        sampling = "point"
    values = np.maximum(values, 0.0)
    if family.is_symmetric:
        values = 0.5 * (values + values[::-1])
    if np.count_nonzero(values) < 2:
        raise InvalidKernelError(f"{family.tag} kernel is not resolved at spacing h = {h}")

    omitted = 0.0 if truncation is None else family.tail_mass(truncation)
    values = values / trapezoid(values, x)
    values.setflags(write=False)
    mass, mean, nu, alpha = _moments(x, values)
    if abs(mass - 1.0) > MASS_TOLERANCE:
        raise InvalidKernelError(f"{family.tag} kernel mass {mass} deviates from 1 after normalization")
    if family.is_symmetric:
        mean = 0.0
    if not alpha > 0.0:
        raise InvalidKernelError(f"{family.tag} kernel degenerates to a point mass at spacing h = {h}")
    logger.debug("built %s kernel with %d nodes, truncation radius %s", family.tag, 2 * n + 1, truncation)
    return SampledKernel(
        family=family,
        h=float(h),
        values=values,
        support=(float(s_min), float(s_max)),
        mass=mass,
        mean=mean,
        nu=nu,
        alpha=alpha,
        beta=-mean,
        metadata={"truncation_radius": truncation, "omitted_mass": omitted, "sampling": sampling},
    )


def truncation_edge_weight(kernel: SampledKernel, lam: float) -> float:
    """
    Relative weight of the two outermost nodes in the trapezoid sum of M(lambda).

    A large value means the truncated tails would still contribute to the integral.
    """
    x = kernel.x
    exponent = -lam * x
    _check_quadrature_exponent(exponent, lam)
    integrand = kernel.values * np.exp(exponent)
    total = trapezoid(integrand, x)
    return float(kernel.h * max(integrand[0], integrand[-1]) / total)


def _check_quadrature_exponent(exponent: np.ndarray, lam: float):
    largest = float(np.max(exponent))
    if largest > MAX_EXPONENT:
        raise MGFOutOfRangeError(
            f"lambda = {lam} is out of the evaluable range of the sampled kernel",
            diagnostics={"lambda": lam, "exponent": largest},
        )


def mgf(kernel: SampledKernel, lam: float, method: str = "quadrature") -> float:
    """
    Moment generating integral M(lambda) = int J(-x) exp(lambda x) dx = int J(z) exp(-lambda z) dz.

    Parameters
    ----------
    kernel : SampledKernel
        The sampled kernel.
    lam : float
        The rate lambda.
    method : str, optional
        'quadrature' (trapezoid rule on the samples), 'analytic' (closed form of the family) or
        'auto' (closed form when the family has one), by default 'quadrature'.

    Returns
    -------
    float
        M(lambda).

    Raises
    ------
    MGFOutOfRangeError
        If the integral is infinite or would overflow at lambda.
    """
    if method not in ("quadrature", "analytic", "auto"):
        raise ValueError(f"unknown mgf method {method}")
    if method != "quadrature":
        value = kernel.family.analytic_mgf(lam)
        if value is not None:
            return value
        if method == "analytic":
            raise MGFOutOfRangeError(f"{kernel.family.tag} kernels have no closed form moment generating integral")
    if lam == 0.0:
        return float(trapezoid(kernel.values, kernel.x))
    x = kernel.x
    exponent = -lam * x
    _check_quadrature_exponent(exponent, lam)
    integrand = kernel.values * np.exp(exponent)
    total = float(trapezoid(integrand, x))
    if kernel.metadata.get("truncation_radius") is not None:
        edge = kernel.h * max(integrand[0], integrand[-1]) / total
        if edge > EDGE_WEIGHT_TOLERANCE:
            warnings.warn(
                f"truncated tail carries relative weight {edge:.2e} in M({lam})",
                TruncationWarning,
            )
    return total


MollisonResult = namedtuple("MollisonResult", ["satisfied", "witness", "diagnosis"])
MollisonResult.__doc__ = """
Named tuple holding the outcome of a Mollison check.

Attributes
----------
satisfied : bool
    Whether int_0^inf J(-z) exp(lambda z) dz is finite for some lambda > 0.
witness : float or None
    A rate lambda for which the one-sided integral is finite.
diagnosis : str
    Human readable reason.
"""


def mollison_check(kernel: SampledKernel) -> MollisonResult:
    """
    Decide the Mollison condition from the family of the kernel.

    Compactly supported and exponentially decaying families pass, algebraic tails fail.
    """
    witness = kernel.family.mollison_witness()
    if witness is None:
        return MollisonResult(
            False,
            None,
            f"{kernel.family.tag} kernel has no exponential moment: Mollison violated, no finite speed"
            + " (fronts accelerate)",
        )
    if kernel.family.is_compact:
        diagnosis = "compact support, every lambda > 0 is admissible"
    else:
        diagnosis = f"exponential tail integrability, lambda = {witness} admissible"
    return MollisonResult(True, float(witness), diagnosis)


def reflect(kernel: SampledKernel) -> SampledKernel:
    """Kernel x -> J(-x) with reflected family, support and first moments."""
    values = kernel.values[::-1].copy()
    values.setflags(write=False)
    s_min, s_max = kernel.support
    return replace(
        kernel,
        family=kernel.family.reflected(),
        values=values,
        support=(-s_max, -s_min),
        mean=-kernel.mean if kernel.mean != 0.0 else 0.0,
        beta=-kernel.beta if kernel.beta != 0.0 else 0.0,
        metadata=dict(kernel.metadata),
    )


def is_c1(kernel: SampledKernel) -> bool:
    """Whether the kernel family is continuously differentiable."""
    return kernel.family.is_c1


def lambda_evaluable_max(kernel: SampledKernel, tolerance: float = EDGE_WEIGHT_TOLERANCE) -> float:
    """
    Largest rate at which M(lambda) can be trusted.

    Families with a closed form MGF or compact support use their analytic bound. Truncated tails
    without a closed form use the largest lambda keeping the truncation-edge weight below
    ``tolerance``.
    """
    family = kernel.family
    if family.is_compact or family.analytic_mgf(0.0) is not None:
        return family.lambda_bound()

    def log_excess(lam: float) -> float:
        try:
            return np.log(truncation_edge_weight(kernel, lam)) - np.log(tolerance)
        except MGFOutOfRangeError:
            return np.inf

    upper = family.lambda_bound()
    if log_excess(upper) <= 0.0:
        return upper
    if log_excess(1e-6) > 0.0:
        return 0.0
    return brentq(log_excess, 1e-6, upper, xtol=1e-10)


def kernel_summary(kernel: SampledKernel) -> Dict[str, Optional[float]]:
    """Cached moments and construction details as plain data."""
    return {
        "family": kernel.family.tag,
        "h": kernel.h,
        "nodes": len(kernel.values),
        "mass": kernel.mass,
        "mean": kernel.mean,
        "nu": kernel.nu,
        "alpha": kernel.alpha,
        "beta": kernel.beta,
        "truncation_radius": kernel.metadata.get("truncation_radius"),
        "omitted_mass": kernel.metadata.get("omitted_mass"),
    }
