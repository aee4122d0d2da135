# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Travelling fronts of the nonlocal dispersal equation J * u - u - c u' + f(u) = 0.

Kernels live in `frontlab.kernels`, reaction terms in `frontlab.nonlinearities`, minimal speeds
in `frontlab.dispersion`, front profiles in `frontlab.profile`, the time dependent problem in
`frontlab.evolution` and the discontinuous stationary fronts in `frontlab.nonunique`. The command
line interface is `python -m frontlab`.
"""

__version__ = "0.1.0"
