# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0
"""
frontlab command line interface

Every subcommand reads an optional YAML or JSON experiment configuration, applies the flags on
top of it and writes its artefacts together with manifest.json into the output directory.

The subcommands are:
1. speed: minimal speeds c1 of the dispersion relation and the sampled curve c(lambda).
2. profile: a travelling front at a given speed, at the minimal speed or at the ignition speed.
3. evolve: the Cauchy problem from step data with front tracking and speed measurement.
4. demo-nonunique: discontinuous stationary fronts as limits of monotone regularizations.
5. check-limit: remainders of the diffusion expansion of a rescaled kernel.
6. check-supersolution: a supersolution and its defect on a window.

Flags mirror configuration keys and take precedence over the file; FRONTLAB_OUT overrides the
output directory. The exit status is 0 on success, 2 for configuration errors, 3 for numerical
failures and 4 when a check of the command fails.

Example:
    `$ python -m frontlab speed --config configs/uniform_kpp.yml`

    `$ python -m frontlab profile --config configs/uniform_kpp.yml --c 1.1 --grid 0.02,60,60 -v`
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from .commands import run
from .config import load_config
from .exceptions import ConfigSchemaError, InvalidValueError
from .profile import Grid

logger = logging.getLogger(__name__)

LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


def _floats(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got '{text}'") from exc


def _integers(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got '{text}'") from exc


def _grid(text: str) -> Dict[str, float]:
    try:
        grid = Grid.from_string(text)
    except InvalidValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    return {"h": grid.h, "r": grid.r, "R": grid.R}


def _pair(text: str) -> List[float]:
    values = _floats(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected x_min,x_max, got '{text}'")
    return values


def _option(parser: argparse.ArgumentParser, flag: str, pointer: str, **kwargs) -> None:
    """A flag overriding the configuration key at ``pointer``; absent flags leave the key alone."""
    parser.add_argument(flag, dest=pointer, default=argparse.SUPPRESS, **kwargs)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="YAML or JSON experiment configuration.")
    common.add_argument("-v", "--verbose", action="count", default=0, help="INFO with -v, DEBUG with -vv.")
    _option(common, "--output-dir", "/output_dir", type=str, help="Directory of the run artefacts.")
    _option(common, "--workers", "/workers", type=int, help="Cap on internal parallelism.")
    _option(common, "--seed", "/seed", type=int, help="Seed for randomized test data.")
    _option(common, "--kernel-h", "/kernel/h", type=float, help="Kernel sampling step of grid-less commands.")

    parser = argparse.ArgumentParser(
        prog="frontlab", description="Travelling fronts of nonlocal dispersal equations J * u - u - c u' + f(u) = 0."
    )
    subparsers = parser.add_subparsers(dest="command", required=True, help="Commands")

    speed = subparsers.add_parser("speed", parents=[common], help="Minimal speed from the dispersion relation.")
    _option(speed, "--orientation", "/speed/orientation", choices=("forward", "reflected", "both"))
    _option(speed, "--method", "/speed/method", choices=("auto", "quadrature"), help="MGF evaluation method.")

    profile = subparsers.add_parser("profile", parents=[common], help="Travelling front profile.")
    _option(profile, "--c", "/profile/c", type=float, help="Speed of the front.")
    _option(profile, "--c-factor", "/profile/c_factor", type=float, help="Speed as a multiple of c1.")
    _option(
        profile,
        "--find-min-speed",
        "/profile/find_min_speed",
        action="store_true",
        help="Solve at the minimal speed from the ignition cutoffs.",
    )
    _option(profile, "--eps-schedule", "/profile/schedule", type=_floats, help="Decreasing viscosities.")
    _option(profile, "--theta", "/profile/theta", type=float, help="Boundary value at the left end.")
    _option(profile, "--grid", "/profile/grid", type=_grid, help="Window as h,r,R.")
    _option(profile, "--no-extend", "/profile/extend", action="store_false", help="Skip the domain extension.")
    _option(profile, "--no-tail-fit", "/profile/tail_fit", action="store_false", help="Skip the tail fit.")

    evolve = subparsers.add_parser("evolve", parents=[common], help="Simulate the Cauchy problem.")
    _option(evolve, "--T", "/evolve/T", type=float, help="Final time.")
    _option(evolve, "--dt", "/evolve/dt", type=float, help="Time step, by default 0.5 / (1 + Lip f).")
    _option(evolve, "--save-every", "/evolve/save_every", type=float, help="Time between saved frames.")
    _option(evolve, "--track-level", "/evolve/track_level", type=float, help="Level of the tracked crossing.")
    _option(evolve, "--grid", "/evolve/grid", type=_grid, help="Window as h,r,R.")
    _option(evolve, "--policy", "/evolve/policy", choices=("rightward", "leftward"))
    _option(evolve, "--position", "/evolve/position", type=float, help="Position of the initial step.")
    _option(evolve, "--no-detect", "/evolve/detect", action="store_false", help="Skip the acceleration test.")

    demo = subparsers.add_parser("demo-nonunique", parents=[common], help="Discontinuous stationary fronts.")
    _option(demo, "--levels", "/demo-nonunique/levels", type=_integers, help="Regularization levels n.")
    _option(demo, "--grid", "/demo-nonunique/grid", type=_grid, help="Window as h,r,R.")
    _option(demo, "--pins", "/demo-nonunique/pins", type=_floats, help="Pinned values of the exploratory sweep.")

    limit = subparsers.add_parser("check-limit", parents=[common], help="Diffusion expansion of a rescaled kernel.")
    _option(limit, "--eps", "/check-limit/eps", type=_floats, help="Decreasing kernel scales.")
    _option(limit, "--probe", "/check-limit/probe", choices=("gaussian", "tanh"))
    _option(limit, "--h", "/check-limit/h", type=float, help="Spacing of the evaluation grid.")

    sup = subparsers.add_parser("check-supersolution", parents=[common], help="Verify a supersolution.")
    _option(sup, "--mode", "/check-supersolution/mode", choices=("kpp", "joined"))
    _option(sup, "--lam", "/check-supersolution/lam", type=float, help="Rate of the left exponential tail.")
    _option(sup, "--delta", "/check-supersolution/delta", type=float, help="Rate of the right tail.")
    _option(sup, "--N", "/check-supersolution/N", type=float, help="Half width of the join region.")
    _option(sup, "--window", "/check-supersolution/window", type=_pair, help="Tested window as x_min,x_max.")
    return parser


def overrides_from_args(args: argparse.Namespace) -> Dict[str, Any]:
    """Nest the flags given on the command line by their configuration pointers."""
    overrides: Dict[str, Any] = {}
    for pointer, value in vars(args).items():
        if not pointer.startswith("/"):
            continue
        *path, key = pointer[1:].split("/")
        block = overrides
        for name in path:
            block = block.setdefault(name, {})
        block[key] = value
    return overrides


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI function"""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=LOG_LEVELS[min(args.verbose, len(LOG_LEVELS) - 1)], format="%(levelname)s %(name)s: %(message)s"
    )
    logging.captureWarnings(True)
    try:
        config = load_config(args.config, overrides_from_args(args))
    except ConfigSchemaError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return exc.exit_code
    return run(args.command, config)


if __name__ == "__main__":
    sys.exit(main())
