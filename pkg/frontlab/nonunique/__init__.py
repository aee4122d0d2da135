# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

from .demo import (
    DemoCase,
    DemoResult,
    DiscontinuousLimit,
    STATIONARY_METHODS,
    PinResult,
    StationarySettings,
    StationarySolution,
    build_case,
    extract_discontinuous_limit,
    pin_sweep,
    run_demo,
    solve_regularized,
    stationary_map,
)
from .regularize import RegularizedG, regularize

__all__ = [
    "DemoCase",
    "DemoResult",
    "DiscontinuousLimit",
    "PinResult",
    "STATIONARY_METHODS",
    "StationarySettings",
    "StationarySolution",
    "build_case",
    "extract_discontinuous_limit",
    "pin_sweep",
    "run_demo",
    "solve_regularized",
    "stationary_map",
    "RegularizedG",
    "regularize",
]
