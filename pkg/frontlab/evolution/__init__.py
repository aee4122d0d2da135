# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

from .local_limit import LimitCheck, LimitLadder, SmoothField, local_limit_check, local_limit_ladder
from .stepper import (
    BoundaryPolicy,
    EvolveSettings,
    SimState,
    Simulation,
    heaviside_initial,
    profile_initial,
    recenter,
    simulate,
    stable_dt,
    step,
)
from .tracking import Acceleration, FrontTrack, SpeedFit, accelerating_detector, measure_speed, track_front

__all__ = [
    "LimitCheck",
    "LimitLadder",
    "SmoothField",
    "local_limit_check",
    "local_limit_ladder",
    "BoundaryPolicy",
    "EvolveSettings",
    "SimState",
    "Simulation",
    "heaviside_initial",
    "profile_initial",
    "recenter",
    "simulate",
    "stable_dt",
    "step",
    "Acceleration",
    "FrontTrack",
    "SpeedFit",
    "accelerating_detector",
    "measure_speed",
    "track_front",
]
