# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Analytic descriptors of one-dimensional dispersal kernels.

Every family is an immutable dataclass that knows its density, its support and, where a closed
form exists, its cumulative distribution and its moment generating integral
M(lambda) = int J(z) exp(-lambda z) dz. The families are:

- `Uniform`: uniform density on an interval [a, b].
- `Gaussian`: normal density with mean and standard deviation.
- `Laplace`: two-sided exponential density with mean and scale.
- `Bump`: the smooth compactly supported bump exp(1 / (x^2 - 1)), shifted and scaled.
- `Algebraic`: fat tailed density proportional to (1 + |x - center| / scale)^(-p).
- `Mixture`: weighted sum of other families.

Families are turned into grid samples by `frontlab.kernels.sampled.build_kernel`.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.special import ndtr

from ..exceptions import InvalidKernelError, MGFOutOfRangeError

# exp overflows a float64 beyond this exponent
MAX_EXPONENT = 700.0

# rates above this value are never scanned for compactly supported kernels
COMPACT_LAMBDA_MAX = 50.0


def _check_exponent(exponent: float, lam: float):
    if exponent > MAX_EXPONENT:
        raise MGFOutOfRangeError(
            f"lambda = {lam} is out of the evaluable range (exponent {exponent:.1f})",
            diagnostics={"lambda": lam, "exponent": exponent},
        )


def bump_profile(x: np.ndarray) -> np.ndarray:
    """Unnormalized smooth bump exp(1 / (x^2 - 1)) on (-1, 1), zero elsewhere."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    out[inside] = np.exp(1.0 / (x[inside] ** 2 - 1.0))
    return out


@lru_cache(maxsize=None)
def bump_mass() -> float:
    """Integral of `bump_profile` over (-1, 1)."""
    return quad(lambda t: float(bump_profile(np.array([t]))[0]), -1.0, 1.0, epsabs=1e-14, epsrel=1e-14)[0]


class KernelFamily:
    """
    Base class of the analytic kernel families.

    Subclasses set the class attribute ``tag`` and implement `density` and `support`. Closed forms
    of the cumulative distribution, the tail mass and the moment generating integral are optional;
    `None` signals that sampling and quadrature are used instead.
    """

    tag = "family"

    def density(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def support(self) -> Tuple[float, float]:
        raise NotImplementedError

    def cdf(self, x: np.ndarray) -> Optional[np.ndarray]:
        return None

    def sf(self, x: np.ndarray) -> Optional[np.ndarray]:
        """Survival function 1 - cdf, evaluated without cancellation in the right tail."""
        return None

    def tail_mass(self, radius: float) -> float:
        """Mass of the density outside [-radius, radius]."""
        s_min, s_max = self.support()
        if s_min >= -radius and s_max <= radius:
            return 0.0
        if self.cdf(0.0) is not None:
            return float(self.cdf(-radius) + self.sf(radius))
        if not self.is_compact:
            raise NotImplementedError(f"{self.tag} kernels need a tail mass to be truncated")
        outside = 0.0
        if s_min < -radius:
            outside += quad(lambda t: float(self.density(np.array([t]))[0]), s_min, min(-radius, s_max))[0]
        if s_max > radius:
            outside += quad(lambda t: float(self.density(np.array([t]))[0]), max(radius, s_min), s_max)[0]
        return outside

    def analytic_mgf(self, lam: float) -> Optional[float]:
        return None

    def lambda_bound(self) -> float:
        """Largest rate at which the moment generating integral is finite and representable."""
        if not self.is_compact:
            return COMPACT_LAMBDA_MAX
        s_min, s_max = self.support()
        reach = max(abs(s_min), abs(s_max), 1e-300)
        return min(COMPACT_LAMBDA_MAX, MAX_EXPONENT / reach)

    def reflected(self) -> "KernelFamily":
        raise NotImplementedError

    @property
    def is_compact(self) -> bool:
        return bool(np.all(np.isfinite(self.support())))

    @property
    def is_symmetric(self) -> bool:
        return False

    @property
    def is_c1(self) -> bool:
        return False

    def mollison_witness(self) -> Optional[float]:
        """
        A rate lambda > 0 with int_0^inf J(-z) exp(lambda z) dz finite, or None if there is none.
        """
        return 1.0 if self.is_compact else None

    def describe(self) -> dict:
        """Family tag and parameters as plain data."""
        params = {key: value for key, value in self.__dict__.items()}
        return {"family": self.tag, "params": params}


@dataclass(frozen=True)
class Uniform(KernelFamily):
    """Uniform density on the interval [a, b]."""

    a: float = -1.0
    b: float = 1.0
    tag = "uniform"

    def __post_init__(self):
        if not self.a < self.b:
            raise InvalidKernelError(f"uniform kernel needs a < b, got a = {self.a}, b = {self.b}")

    def density(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= self.a) & (x <= self.b), 1.0 / (self.b - self.a), 0.0)

    def support(self):
        return (self.a, self.b)

    def cdf(self, x):
        return np.clip((np.asarray(x, dtype=float) - self.a) / (self.b - self.a), 0.0, 1.0)

    def sf(self, x):
        return np.clip((self.b - np.asarray(x, dtype=float)) / (self.b - self.a), 0.0, 1.0)

    def analytic_mgf(self, lam):
        if lam == 0.0:
            return 1.0
        width = self.b - self.a
        _check_exponent(max(-lam * self.a, -lam * self.b), lam)
        # (exp(-lam a) - exp(-lam b)) / (lam width) without cancellation for small lam
        return float(-np.exp(-lam * self.a) * np.expm1(-lam * width) / (lam * width))

    def reflected(self):
        return Uniform(-self.b, -self.a)

    @property
    def is_symmetric(self):
        return self.a == -self.b


@dataclass(frozen=True)
class Gaussian(KernelFamily):
    """Normal density with the given mean and standard deviation."""

    mean: float = 0.0
    sigma: float = 1.0
    tag = "gaussian"

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise InvalidKernelError(f"gaussian kernel needs sigma > 0, got {self.sigma}")

    def density(self, x):
        z = (np.asarray(x, dtype=float) - self.mean) / self.sigma
        return np.exp(-0.5 * z**2) / (self.sigma * np.sqrt(2.0 * np.pi))

    def support(self):
        return (-np.inf, np.inf)

    def cdf(self, x):
        return ndtr((np.asarray(x, dtype=float) - self.mean) / self.sigma)

    def sf(self, x):
        return ndtr((self.mean - np.asarray(x, dtype=float)) / self.sigma)

    def analytic_mgf(self, lam):
        exponent = -lam * self.mean + 0.5 * (lam * self.sigma) ** 2
        _check_exponent(exponent, lam)
        return float(np.exp(exponent))

    def lambda_bound(self):
        # positive root of sigma^2 lam^2 / 2 + |mean| lam = MAX_EXPONENT
        s2 = self.sigma**2
        m = abs(self.mean)
        root = (-m + np.sqrt(m**2 + 2.0 * s2 * MAX_EXPONENT)) / s2
        return float(min(COMPACT_LAMBDA_MAX, 0.999 * root))

    def reflected(self):
        return Gaussian(-self.mean, self.sigma)

    @property
    def is_symmetric(self):
        return self.mean == 0.0

    @property
    def is_c1(self):
        return True

    def mollison_witness(self):
        return 1.0


@dataclass(frozen=True)
class Laplace(KernelFamily):
    """Two-sided exponential density exp(-|x - mean| / scale) / (2 scale)."""

    mean: float = 0.0
    scale: float = 1.0
    tag = "laplace"

    def __post_init__(self):
        if not self.scale > 0.0:
            raise InvalidKernelError(f"laplace kernel needs scale > 0, got {self.scale}")

    def density(self, x):
        return np.exp(-np.abs(np.asarray(x, dtype=float) - self.mean) / self.scale) / (2.0 * self.scale)

    def support(self):
        return (-np.inf, np.inf)

    def cdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mean) / self.scale
        return np.where(z < 0.0, 0.5 * np.exp(np.minimum(z, 0.0)), 1.0 - 0.5 * np.exp(-np.maximum(z, 0.0)))

    def sf(self, x):
        z = (self.mean - np.asarray(x, dtype=float)) / self.scale
        return np.where(z < 0.0, 0.5 * np.exp(np.minimum(z, 0.0)), 1.0 - 0.5 * np.exp(-np.maximum(z, 0.0)))

    def analytic_mgf(self, lam):
        if abs(lam) * self.scale >= 1.0:
            raise MGFOutOfRangeError(
                f"lambda = {lam} lies outside the exponential moment range |lambda| < {1.0 / self.scale}",
                diagnostics={"lambda": lam, "scale": self.scale},
            )
        _check_exponent(-lam * self.mean, lam)
        return float(np.exp(-lam * self.mean) / (1.0 - (lam * self.scale) ** 2))

    def lambda_bound(self):
        return min(COMPACT_LAMBDA_MAX, 0.999 / self.scale)

    def reflected(self):
        return Laplace(-self.mean, self.scale)

    @property
    def is_symmetric(self):
        return self.mean == 0.0

    def mollison_witness(self):
        return 0.5 / self.scale


@dataclass(frozen=True)
class Bump(KernelFamily):
    """Smooth bump exp(1 / (y^2 - 1)), y = (x - center) / width, normalized to unit mass."""

    center: float = 0.0
    width: float = 1.0
    tag = "bump"

    def __post_init__(self):
        if not self.width > 0.0:
            raise InvalidKernelError(f"bump kernel needs width > 0, got {self.width}")

    def density(self, x):
        y = (np.asarray(x, dtype=float) - self.center) / self.width
        return bump_profile(y) / (bump_mass() * self.width)

    def support(self):
        return (self.center - self.width, self.center + self.width)

    def reflected(self):
        return Bump(-self.center, self.width)

    @property
    def is_symmetric(self):
        return self.center == 0.0

    @property
    def is_c1(self):
        return True


@dataclass(frozen=True)
class Algebraic(KernelFamily):
    """
    Fat tailed density (p - 1) / (2 scale) (1 + |x - center| / scale)^(-p).

    The mass is finite for p > 1 and the first absolute moment for p > 2. No exponential moment
    exists, so these kernels violate the Mollison condition.
    """

    p: float = 3.0
    scale: float = 1.0
    center: float = 0.0
    tag = "algebraic"

    def __post_init__(self):
        if not self.scale > 0.0:
            raise InvalidKernelError(f"algebraic kernel needs scale > 0, got {self.scale}")
        if self.p <= 1.0:
            raise InvalidKernelError(f"algebraic kernel with p = {self.p} <= 1 is not normalizable")
        if self.p <= 2.0:
            raise InvalidKernelError(f"algebraic kernel with p = {self.p} <= 2 has an infinite first moment")

    def density(self, x):
        z = np.abs(np.asarray(x, dtype=float) - self.center) / self.scale
        return (self.p - 1.0) / (2.0 * self.scale) * (1.0 + z) ** (-self.p)

    def support(self):
        return (-np.inf, np.inf)

    def cdf(self, x):
        d = (np.asarray(x, dtype=float) - self.center) / self.scale
        half_tail = 0.5 * (1.0 + np.abs(d)) ** (1.0 - self.p)
        return np.where(d < 0.0, half_tail, 1.0 - half_tail)

    def sf(self, x):
        d = (self.center - np.asarray(x, dtype=float)) / self.scale
        half_tail = 0.5 * (1.0 + np.abs(d)) ** (1.0 - self.p)
        return np.where(d < 0.0, half_tail, 1.0 - half_tail)

    def analytic_mgf(self, lam):
        if lam == 0.0:
            return 1.0
        raise MGFOutOfRangeError(
            f"the algebraic kernel has no exponential moment at lambda = {lam}",
            diagnostics={"lambda": lam, "p": self.p},
        )

    def lambda_bound(self):
        return 0.0

    def reflected(self):
        return Algebraic(self.p, self.scale, -self.center)

    @property
    def is_symmetric(self):
        return self.center == 0.0

    def mollison_witness(self):
        return None


@dataclass(frozen=True)
class Mixture(KernelFamily):
    """Weighted sum of kernel families; the weights are normalized to sum to one."""

    weights: Tuple[float, ...] = ()
    components: Tuple[KernelFamily, ...] = field(default=())
    tag = "mixture"

    def __post_init__(self):
        if len(self.weights) == 0 or len(self.weights) != len(self.components):
            raise InvalidKernelError("mixture needs one weight per component and at least one component")
        if any(weight < 0.0 for weight in self.weights) or sum(self.weights) <= 0.0:
            raise InvalidKernelError(f"mixture weights must be nonnegative with a positive sum, got {self.weights}")
        total = float(sum(self.weights))
        object.__setattr__(self, "weights", tuple(float(weight) / total for weight in self.weights))
        object.__setattr__(self, "components", tuple(self.components))

    def density(self, x):
        return sum(weight * comp.density(x) for weight, comp in zip(self.weights, self.components))

    def support(self):
        supports = [comp.support() for comp in self.components]
        return (min(s[0] for s in supports), max(s[1] for s in supports))

    def cdf(self, x):
        parts = [comp.cdf(x) for comp in self.components]
        if any(part is None for part in parts):
            return None
        return sum(weight * part for weight, part in zip(self.weights, parts))

    def sf(self, x):
        parts = [comp.sf(x) for comp in self.components]
        if any(part is None for part in parts):
            return None
        return sum(weight * part for weight, part in zip(self.weights, parts))

    def tail_mass(self, radius):
        return float(sum(weight * comp.tail_mass(radius) for weight, comp in zip(self.weights, self.components)))

    def analytic_mgf(self, lam):
        values = [comp.analytic_mgf(lam) for comp in self.components]
        if any(value is None for value in values):
            return None
        return float(sum(weight * value for weight, value in zip(self.weights, values)))

    def lambda_bound(self):
        return min(comp.lambda_bound() for comp in self.components)

    def reflected(self):
        return Mixture(self.weights, tuple(comp.reflected() for comp in self.components))

    @property
    def is_symmetric(self):
        return all(comp.is_symmetric for comp in self.components)

    @property
    def is_c1(self):
        return all(comp.is_c1 for comp in self.components)

    def mollison_witness(self):
        witnesses = [comp.mollison_witness() for comp in self.components]
        if any(witness is None for witness in witnesses):
            return None
        return min(witnesses)

    def describe(self):
        return {
            "family": self.tag,
            "params": {
                "weights": list(self.weights),
                "components": [comp.describe() for comp in self.components],
            },
        }


FAMILIES = {family.tag: family for family in (Uniform, Gaussian, Laplace, Bump, Algebraic)}


def family_from_dict(description: dict) -> KernelFamily:
    """
    Create a kernel family from its configuration block.

    Parameters
    ----------
    description : dict
        Mapping with the keys 'family' and 'params'. Mixtures list their components under
        params['components'], each again a mapping with 'family' and 'params'.

    Returns
    -------
    KernelFamily
        The analytic kernel family.

    Raises
    ------
    InvalidKernelError
        If the family tag is unknown or the parameters do not fit the family.
    """
    tag = description.get("family")
    params = dict(description.get("params", {}))
    if tag == "mixture":
        components = tuple(family_from_dict(comp) for comp in params.get("components", []))
        return Mixture(tuple(params.get("weights", [])), components)
    try:
        family = FAMILIES[tag]
    except KeyError as exc:
        raise InvalidKernelError(f"Unknown kernel family {tag}. Known: {', '.join(FAMILIES)}, mixture") from exc
    try:
        return family(**params)
    except TypeError as exc:
        raise InvalidKernelError(f"Invalid parameters {sorted(params)} for kernel family {tag}") from exc
