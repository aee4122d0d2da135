# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Projection of N-dimensional dispersal densities (N <= 3) onto a direction.

For a unit vector e the one-dimensional kernel is J(s) = int over the hyperplane
{y : y . e = s} of the density, computed by tensor trapezoid quadrature on an orthonormal
basis of the complement of e.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.linalg import null_space
from scipy.special import gamma

from ..exceptions import InvalidDirectionError, UnsupportedDensityError
from .families import KernelFamily, bump_profile
from .sampled import SampledKernel, build_kernel

# quadrature nodes per complement axis
NODES_PER_AXIS = {1: 1, 2: 201, 3: 81}
GAUSSIAN_REACH = 8.0
CHUNK = 64


@lru_cache(maxsize=None)
def _radial_bump_mass(dim: int) -> float:
    sphere = 2.0 * np.pi ** (dim / 2.0) / gamma(dim / 2.0)
    radial = quad(lambda r: float(bump_profile(np.array([r]))[0]) * r ** (dim - 1), 0.0, 1.0, epsabs=1e-14)[0]
    return sphere * radial


@dataclass(frozen=True)
class SeparableDensity:
    """
    Product of one-dimensional factors, each gaussian (scale = standard deviation) or uniform
    (scale = half width), centred on ``centers``.
    """

    kinds: Tuple[str, ...]
    centers: Tuple[float, ...]
    scales: Tuple[float, ...]

    def __post_init__(self):
        if not len(self.kinds) == len(self.centers) == len(self.scales):
            raise UnsupportedDensityError("separable density needs one kind, center and scale per axis")
        unknown = set(self.kinds) - {"gaussian", "uniform"}
        if unknown:
            raise UnsupportedDensityError(f"unsupported separable factors {sorted(unknown)}")
        if any(scale <= 0.0 for scale in self.scales):
            raise UnsupportedDensityError(f"separable density needs positive scales, got {self.scales}")

    @property
    def dim(self) -> int:
        return len(self.kinds)

    @property
    def center(self) -> Tuple[float, ...]:
        return self.centers

    @property
    def is_c1(self) -> bool:
        return all(kind == "gaussian" for kind in self.kinds)

    def reach(self) -> float:
        """Radius around the centre outside which the density is negligible."""
        extents = [
            GAUSSIAN_REACH * scale if kind == "gaussian" else scale for kind, scale in zip(self.kinds, self.scales)
        ]
        return float(np.linalg.norm(extents))

    def __call__(self, y: np.ndarray) -> np.ndarray:
        out = np.ones(y.shape[:-1])
        for axis, (kind, center, scale) in enumerate(zip(self.kinds, self.centers, self.scales)):
            z = (y[..., axis] - center) / scale
            if kind == "gaussian":
                out = out * np.exp(-0.5 * z**2) / (scale * np.sqrt(2.0 * np.pi))
            else:
                out = out * np.where(np.abs(z) <= 1.0, 0.5 / scale, 0.0)
        return out


@dataclass(frozen=True)
class RadialBump:
    """Radially symmetric smooth bump exp(1 / (r^2 - 1)), r = |y - center| / radius, unit mass."""

    center: Tuple[float, ...]
    radius: float = 1.0

    def __post_init__(self):
        if not self.radius > 0.0:
            raise UnsupportedDensityError(f"radial bump needs a positive radius, got {self.radius}")

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def is_c1(self) -> bool:
        return True

    def reach(self) -> float:
        return float(self.radius)

    def normalization(self) -> float:
        return _radial_bump_mass(self.dim) * self.radius**self.dim

    def __call__(self, y: np.ndarray) -> np.ndarray:
        r = np.linalg.norm(y - np.asarray(self.center), axis=-1) / self.radius
        return bump_profile(r) / self.normalization()


@dataclass(frozen=True)
class ProjectedFamily(KernelFamily):
    """
    Kernel family J(s) obtained by integrating a density over the hyperplanes y . e = s.

    The support is the reach of the source density around its centre, so gaussian sources are
    cut at eight standard deviations.
    """

    source: object
    direction: Tuple[float, ...]
    tag = "projected"

    @property
    def offset(self) -> float:
        """Component of the density centre along the direction."""
        return float(np.dot(self.source.center, self.direction))

    def support(self):
        reach = self.source.reach()
        return (self.offset - reach, self.offset + reach)

    def density(self, x):
        e = np.asarray(self.direction, dtype=float)
        s = np.atleast_1d(np.asarray(x, dtype=float))
        dim = len(e)
        if dim == 1:
            return self.source(s[:, None] * e[None, :])
        basis = null_space(e[None, :])
        bound = float(np.linalg.norm(self.source.center)) + self.source.reach()
        t = np.linspace(-bound, bound, NODES_PER_AXIS[dim])
        trap = np.full(len(t), t[1] - t[0])
        trap[[0, -1]] *= 0.5
        axes = [t] * (dim - 1)
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim - 1)
        cell = np.prod(np.stack(np.meshgrid(*([trap] * (dim - 1)), indexing="ij"), axis=-1), axis=-1).reshape(-1)
        plane = mesh @ basis.T
        out = np.empty(len(s))
        for start in range(0, len(s), CHUNK):
            chunk = s[start : start + CHUNK]
            points = chunk[:, None, None] * e[None, None, :] + plane[None, :, :]
            out[start : start + CHUNK] = self.source(points) @ cell
        return out

    def reflected(self):
        return ProjectedFamily(self.source, tuple(-value for value in self.direction))

    @property
    def is_symmetric(self):
        return self.offset == 0.0

    @property
    def is_c1(self):
        return self.source.is_c1

    def describe(self):
        return {"family": self.tag, "params": {"source": repr(self.source), "direction": list(self.direction)}}


def project_direction(density, e: Sequence[float], h: float) -> SampledKernel:
    """
    Project an N-dimensional density onto the direction e.

    Parameters
    ----------
    density : SeparableDensity or RadialBump
        The N-dimensional density, N <= 3.
    e : Sequence[float]
        Unit direction of length N.
    h : float
        Grid spacing of the resulting kernel.

    Returns
    -------
    SampledKernel
        The one-dimensional kernel J(s).

    Raises
    ------
    UnsupportedDensityError
        If the density family is not separable or radial, or N > 3.
    InvalidDirectionError
        If e is not a unit vector of length N.
    """
    if not isinstance(density, (SeparableDensity, RadialBump)):
        raise UnsupportedDensityError(f"cannot project densities of type {type(density).__name__}")
    if density.dim > 3:
        raise UnsupportedDensityError(f"projection supports dimensions up to 3, got {density.dim}")
    e = np.asarray(e, dtype=float)
    if e.shape != (density.dim,):
        raise InvalidDirectionError(f"direction {e.tolist()} does not match the density dimension {density.dim}")
    if abs(np.linalg.norm(e) - 1.0) > 1e-12:
        raise InvalidDirectionError(f"direction {e.tolist()} is not a unit vector")
    return build_kernel(ProjectedFamily(density, tuple(float(value) for value in e)), h)
