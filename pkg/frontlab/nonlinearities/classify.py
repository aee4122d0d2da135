# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Classification of reaction terms by dense sampling.

A term is monostable when f(0) = f(1) = 0, f'(1) < 0, f > 0 inside (0, 1) and f <= 0 outside;
KPP when it is monostable and f(s) <= f'(0) s; ignition when f vanishes on [0, rho], is positive
on (rho, 1) and f'(1) < 0. Every flag comes with the worst sampled point so the decision can be
audited.
"""

import logging
from collections import namedtuple
from typing import Dict, Optional

import numpy as np

from ..exceptions import ClassificationError

logger = logging.getLogger(__name__)

SAMPLES = 10_000
TOLERANCE = 1e-10
# smooth cutoffs underflow to zero just above their threshold
IGNITION_LAYER = 0.01

Classification = namedtuple("Classification", ["monostable", "kpp", "ignition", "rho", "violations"])
Classification.__doc__ = """
Named tuple holding the classification flags of a reaction term.

Attributes
----------
monostable : bool
    f(0) = f(1) = 0, f'(1) < 0, f > 0 on (0, 1) and f <= 0 outside [0, 1].
kpp : bool
    Monostable and f(s) <= f'(0) s on (0, 1).
ignition : bool
    f = 0 on [0, rho], f > 0 on (rho, 1) and f'(1) < 0.
rho : float or None
    The ignition threshold, declared by the term or detected from the samples.
violations : Dict[str, Violation]
    For every failed condition the worst sampled point.
"""

Violation = namedtuple("Violation", ["condition", "u", "value"])
Violation.__doc__ = """
Named tuple holding the worst sampled point of a failed condition.

Attributes
----------
condition : str
    Human readable condition that failed.
u : float
    Sampled state with the largest violation.
value : float
    Size of the violation at u.
"""


def _worst(condition: str, u: np.ndarray, excess: np.ndarray, strict: bool = False) -> Optional[Violation]:
    """Violation record for the largest excess, None if every excess is negative (or zero unless strict)."""
    if len(u) == 0:
        return None
    index = int(np.argmax(excess))
    if excess[index] < 0.0 or (excess[index] == 0.0 and not strict):
        return None
    return Violation(condition, float(u[index]), float(excess[index]))


def detect_threshold(f, samples: int = SAMPLES, tolerance: float = TOLERANCE) -> Optional[float]:
    """Largest sampled s such that f vanishes on [0, s], None if f is not zero beyond s = 0."""
    u = np.linspace(0.0, 1.0, samples + 1)
    positive = np.nonzero(np.abs(f.f(u)) > tolerance)[0]
    if len(positive) == 0 or positive[0] <= 1:
        return None
    return float(u[positive[0] - 1])


def classify(f, samples: int = SAMPLES, tolerance: float = TOLERANCE) -> Classification:
    """
    Decide the monostable, KPP and ignition flags of a reaction term.

    Parameters
    ----------
    f : Nonlinearity
        The reaction term.
    samples : int, optional
        Number of sampled interior points, by default 10 000.
    tolerance : float, optional
        Tolerance of the pointwise checks, by default 1e-10.

    Returns
    -------
    Classification
        Flags, threshold and worst offending points.

    Raises
    ------
    ClassificationError
        If f(0) or f(1) differs from zero by more than the tolerance.
    """
    ends = f.f(np.array([0.0, 1.0]))
    if np.any(np.abs(ends) > tolerance):
        raise ClassificationError(
            f"{f.name} does not vanish at the states 0 and 1: f(0) = {ends[0]:.3e}, f(1) = {ends[1]:.3e}",
            diagnostics={"f0": float(ends[0]), "f1": float(ends[1])},
        )
    interior = np.linspace(0.0, 1.0, samples + 2)[1:-1]
    outside = np.concatenate(
        (np.linspace(-0.1, 0.0, samples // 10, endpoint=False), np.linspace(1.0, 1.1, samples // 10 + 1)[1:])
    )
    values = f.f(interior)
    violations: Dict[str, Violation] = {}

    def record(key, violation):
        if violation is not None:
            violations[key] = violation

    stable_end = f.fprime1 < 0.0
    if not stable_end:
        violations["stable_end"] = Violation("f'(1) < 0", 1.0, float(f.fprime1))
    record("positive", _worst("f > 0 on (0, 1)", interior, -values, strict=True))
    record("outside", _worst("f <= 0 outside [0, 1]", outside, f.f(outside) - tolerance))
    monostable = stable_end and "positive" not in violations and "outside" not in violations

    record("kpp", _worst("f(s) <= f'(0) s", interior, values - f.fprime0 * interior - tolerance))
    kpp = monostable and "kpp" not in violations

    rho = f.rho if f.rho is not None else detect_threshold(f, samples, tolerance)
    ignition = False
    if rho is not None and 0.0 < rho < 1.0:
        below = interior[interior <= rho]
        above = interior[interior > rho * (1.0 + IGNITION_LAYER)]
        layer = interior[(interior > rho) & (interior <= rho * (1.0 + IGNITION_LAYER))]
        record("ignition_zero", _worst("f = 0 on [0, rho]", below, np.abs(f.f(below)) - tolerance))
        record("ignition_positive", _worst("f > 0 on (rho, 1)", above, -f.f(above), strict=True))
        record("ignition_layer", _worst("f >= 0 just above rho", layer, -f.f(layer) - tolerance))
        ignition = stable_end and not any(
            key in violations for key in ("ignition_zero", "ignition_positive", "ignition_layer")
        )
    logger.debug("classified %s: monostable=%s kpp=%s ignition=%s", f.name, monostable, kpp, ignition)
    return Classification(monostable, kpp, ignition, rho if ignition else f.rho, violations)
