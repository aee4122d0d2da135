# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Grids of the truncated front problem and the profiles computed on them.

This module provides:
- `Grid`: uniform nodes on the window [-r, R].
- `Profile`: grid values of a front with its speed, viscosity and boundary data.
- `crossing`: the level crossing of a monotone profile by linear interpolation.
"""

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from ..exceptions import GridTooCoarseError, GridTooNarrowError, InvalidValueError, NoCrossingError
from ..kernels.sampled import SampledKernel

SPACING_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Grid:
    """
    Uniform grid with spacing h on the window [-r, R].

    Attributes
    ----------
    h : float
        Node spacing.
    r, R : float
        Distances of the left and the right end from the origin; R + r is an exact multiple of h.
    """

    h: float
    r: float
    R: float

    def __post_init__(self):
        if not self.h > 0.0:
            raise InvalidValueError(f"grid spacing must be positive, got {self.h}")
        if not self.r + self.R > 0.0:
            raise InvalidValueError(f"grid window [-{self.r}, {self.R}] is empty")
        cells = (self.r + self.R) / self.h
        if abs(cells - round(cells)) > SPACING_TOLERANCE * max(1.0, cells):
            raise InvalidValueError(f"grid width {self.r + self.R} is not a multiple of the spacing {self.h}")

    @classmethod
    def from_string(cls, description: str) -> "Grid":
        """Parse the command line form 'h,r,R'."""
        try:
            h, r, R = (float(part) for part in description.split(","))
        except ValueError as exc:
            raise InvalidValueError(f"grid must be given as 'h,r,R', got '{description}'") from exc
        return cls(h, r, R)

    @property
    def size(self) -> int:
        """Number of nodes."""
        return int(round((self.r + self.R) / self.h)) + 1

    @property
    def x(self) -> np.ndarray:
        return -self.r + self.h * np.arange(self.size)

    def scaled(self, factor: float) -> "Grid":
        """The grid with both ends moved ``factor`` times farther from the origin."""
        return Grid(self.h, self.r * factor, self.R * factor)

    def check_kernel(self, kernel: SampledKernel) -> None:
        """
        Make sure the kernel is sampled with the grid spacing and its support fits four times.

        Raises
        ------
        GridTooCoarseError
            If the kernel was sampled with another spacing.
        GridTooNarrowError
            If the kernel support is wider than a quarter of the window.
        """
        if abs(kernel.h - self.h) > SPACING_TOLERANCE * self.h:
            raise GridTooCoarseError(
                f"kernel spacing {kernel.h} differs from grid spacing {self.h}",
                diagnostics={"kernel_h": kernel.h, "grid_h": self.h},
            )
        if 2.0 * kernel.radius > 0.25 * (self.r + self.R):
            raise GridTooNarrowError(
                f"kernel support width {2.0 * kernel.radius} exceeds a quarter of the window width {self.r + self.R}",
                diagnostics={"kernel_radius": kernel.radius, "r": self.r, "R": self.R},
            )

    def describe(self) -> Dict[str, float]:
        return {"h": self.h, "r": self.r, "R": self.R, "nodes": self.size}


def crossing(x: np.ndarray, u: np.ndarray, level: float = 0.5) -> float:
    """
    First position where a sampled profile reaches ``level``, by linear interpolation.

    Raises
    ------
    NoCrossingError
        If the samples stay on one side of the level.
    """
    above = np.flatnonzero(u >= level)
    if len(above) == 0 or above[0] == 0:
        if len(above) and u[0] == level:
            return float(x[0])
        raise NoCrossingError(
            f"profile does not cross {level} inside [{x[0]:.6g}, {x[-1]:.6g}]",
            diagnostics={"level": level, "u_min": float(np.min(u)), "u_max": float(np.max(u))},
        )
    k = above[0]
    weight = (level - u[k - 1]) / (u[k] - u[k - 1])
    return float(x[k - 1] + weight * (x[k] - x[k - 1]))


@dataclass(frozen=True, eq=False)
class Profile:
    """
    Front profile on a grid.

    Attributes
    ----------
    grid : Grid
        The nodes the values live on.
    u : np.ndarray
        Values in [0, 1].
    c : float
        Speed of the front.
    eps : float
        Viscosity the profile was computed with.
    theta : float
        Boundary value at -r; the value at R is 1.
    metadata : dict
        Solver flags, among them 'polished' and 'smallest_eps_only'.
    """

    grid: Grid
    u: np.ndarray
    c: float
    eps: float = 0.0
    theta: float = 0.0
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    @property
    def anchor(self) -> int:
        """Index of the first node where u reaches 1/2."""
        above = np.flatnonzero(self.u >= 0.5)
        if len(above) == 0:
            raise NoCrossingError("profile stays below 1/2", diagnostics={"u_max": float(np.max(self.u))})
        return int(above[0])

    def crossing(self, level: float = 0.5) -> float:
        return crossing(self.x, self.u, level)

    def with_values(self, u: np.ndarray, **changes) -> "Profile":
        return replace(self, u=np.asarray(u, dtype=float), **changes)

    def to_csv(self, path: Union[str, Path]) -> None:
        """Write the columns x, u."""
        np.savetxt(path, np.column_stack((self.x, self.u)), delimiter=",", header="x,u", comments="")
