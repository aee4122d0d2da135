# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

from .families import Algebraic, Bump, Gaussian, KernelFamily, Laplace, Mixture, Uniform, family_from_dict
from .projection import ProjectedFamily, RadialBump, SeparableDensity, project_direction
from .sampled import (
    MollisonResult,
    SampledKernel,
    build_kernel,
    is_c1,
    kernel_summary,
    lambda_evaluable_max,
    mgf,
    mollison_check,
    reflect,
    truncation_edge_weight,
)

__all__ = [
    "Algebraic",
    "Bump",
    "Gaussian",
    "KernelFamily",
    "Laplace",
    "Mixture",
    "Uniform",
    "family_from_dict",
    "ProjectedFamily",
    "RadialBump",
    "SeparableDensity",
    "project_direction",
    "MollisonResult",
    "SampledKernel",
    "build_kernel",
    "is_c1",
    "kernel_summary",
    "lambda_evaluable_max",
    "mgf",
    "mollison_check",
    "reflect",
    "truncation_edge_weight",
]
