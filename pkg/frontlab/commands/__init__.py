# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

from .dispatch import run
from .runners import (
    RUNNERS,
    run_check_limit,
    run_check_supersolution,
    run_demo_nonunique,
    run_evolve,
    run_profile,
    run_speed,
    write_summary,
)

__all__ = [
    "run",
    "RUNNERS",
    "run_check_limit",
    "run_check_supersolution",
    "run_demo_nonunique",
    "run_evolve",
    "run_profile",
    "run_speed",
    "write_summary",
]
