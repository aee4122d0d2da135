# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

from .speeds import (
    DispersionCurve,
    LambdaRoot,
    Multiplicity,
    Orientation,
    SpeedResult,
    c1,
    c_star_left,
    deficit,
    dispersion_curve,
    jensen_lower_bound,
    lambda_of_c,
    local_speed_shift,
    speed_bracket,
    speed_of_rate,
)
from .supersolution import (
    CappedExponential,
    ConstantState,
    Supersolution,
    SupersolutionCheck,
    SupersolutionResult,
    build_supersolution,
    kpp_exponential_supersolution,
    verify_supersolution,
)

__all__ = [
    "DispersionCurve",
    "LambdaRoot",
    "Multiplicity",
    "Orientation",
    "SpeedResult",
    "c1",
    "c_star_left",
    "deficit",
    "dispersion_curve",
    "jensen_lower_bound",
    "lambda_of_c",
    "local_speed_shift",
    "speed_bracket",
    "speed_of_rate",
    "CappedExponential",
    "ConstantState",
    "Supersolution",
    "SupersolutionCheck",
    "SupersolutionResult",
    "build_supersolution",
    "kpp_exponential_supersolution",
    "verify_supersolution",
]
