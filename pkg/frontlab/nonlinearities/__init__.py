# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

from .classify import Classification, Violation, classify
from .cutoff import CutoffFamily, base_cutoff, ignition_approx
from .families import (
    HolderData,
    Nonlinearity,
    cubic,
    ignition,
    logistic,
    nonlinearity_from_dict,
    shipped_spline,
    spline,
)
from .g_analysis import GAnalysis, g_analysis

__all__ = [
    "Classification",
    "Violation",
    "classify",
    "CutoffFamily",
    "base_cutoff",
    "ignition_approx",
    "HolderData",
    "Nonlinearity",
    "cubic",
    "ignition",
    "logistic",
    "nonlinearity_from_dict",
    "shipped_spline",
    "spline",
    "GAnalysis",
    "g_analysis",
]
