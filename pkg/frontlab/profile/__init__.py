# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

from .continuation import (
    FrontSolution,
    default_schedule,
    extend_domain,
    schedule_start,
    solve_front,
    viscosity_continuation,
)
from .diagnostics import (
    Alignment,
    FitComparison,
    TailFit,
    align_and_compare,
    compare_fits,
    endpoint_values,
    residual,
    tail_fit,
)
from .grid import Grid, Profile, crossing
from .ignition import IgnitionSpeed, MinimalSpeed, extrapolate_speeds, ignition_speed, minimal_speed_monostable
from .pinned import Control, TailExterior, front_guess, solve_pinned, tail_exterior, tail_rate
from .truncated import (
    BoundaryCorrections,
    IterationReport,
    Scheme,
    SolverSettings,
    Start,
    boundary_corrections,
    newton_system,
    pin_weights,
    pinned_newton,
    relax,
    settled,
    solve_truncated,
)

__all__ = [
    "FrontSolution",
    "default_schedule",
    "extend_domain",
    "schedule_start",
    "solve_front",
    "viscosity_continuation",
    "Alignment",
    "FitComparison",
    "TailFit",
    "align_and_compare",
    "compare_fits",
    "endpoint_values",
    "residual",
    "tail_fit",
    "Grid",
    "Profile",
    "crossing",
    "IgnitionSpeed",
    "MinimalSpeed",
    "extrapolate_speeds",
    "ignition_speed",
    "minimal_speed_monostable",
    "Control",
    "TailExterior",
    "front_guess",
    "solve_pinned",
    "tail_exterior",
    "tail_rate",
    "BoundaryCorrections",
    "IterationReport",
    "Scheme",
    "SolverSettings",
    "Start",
    "boundary_corrections",
    "newton_system",
    "pin_weights",
    "pinned_newton",
    "relax",
    "settled",
    "solve_truncated",
]
