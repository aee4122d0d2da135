# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

from .experiment import (
    DEFAULTS,
    ExperimentConfig,
    KernelSpec,
    NonlinearitySpec,
    grid_from_block,
    kernel_spec,
    load_config,
    nonlinearity_spec,
    read_config_file,
    solver_settings,
    stationary_settings,
    validate,
)
from .output import Artefacts, to_builtin, write_csv, write_json

__all__ = [
    "DEFAULTS",
    "ExperimentConfig",
    "KernelSpec",
    "NonlinearitySpec",
    "grid_from_block",
    "kernel_spec",
    "load_config",
    "nonlinearity_spec",
    "read_config_file",
    "solver_settings",
    "stationary_settings",
    "validate",
    "Artefacts",
    "to_builtin",
    "write_csv",
    "write_json",
]
