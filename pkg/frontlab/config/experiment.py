# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Experiment configuration: loading, validation and resolution of YAML or JSON files.

A configuration is a mapping with the blocks 'kernel', 'nonlinearity', one block per command and
the run settings 'output_dir', 'seed', 'workers' and 'tolerances'. Every key is checked against
a nested schema before anything is computed; errors name the offending key by its JSON pointer,
for example /kernel/params/wdith. Values are resolved with the precedence

    defaults < configuration file < command line flags,

and the environment variable FRONTLAB_OUT overrides the output directory.

This module provides:
- `load_config`: read, validate and resolve a configuration.
- `validate`: the schema check of a raw mapping.
- `kernel_spec`, `nonlinearity_spec`, `grid_from_block`: the objects described by the blocks.
- `solver_settings`, `stationary_settings`: solver controls with the tolerance overrides applied.
"""

import inspect
import logging
import os
from collections import namedtuple
from collections.abc import Mapping
from copy import deepcopy
from dataclasses import fields
from numbers import Integral, Real
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Union

import yaml

from ..exceptions import InvalidValueError, MissingKeyError, UnknownKeyError
from ..kernels.families import FAMILIES as KERNEL_FAMILIES
from ..kernels.families import KernelFamily, family_from_dict
from ..nonlinearities.families import FAMILIES as NONLINEARITY_FAMILIES
from ..nonlinearities.families import Nonlinearity, nonlinearity_from_dict
from ..nonunique.demo import STATIONARY_METHODS, StationarySettings
from ..profile.grid import Grid
from ..profile.truncated import SolverSettings

logger = logging.getLogger(__name__)

OUTPUT_VARIABLE = "FRONTLAB_OUT"

Validator = Callable[[Any, str], None]


def _fail(pointer: str, expected: str, value: Any):
    raise InvalidValueError(f"{pointer} must be {expected}, got {value!r}", diagnostics={"pointer": pointer})


def _number(value, pointer):
    if isinstance(value, bool) or not isinstance(value, Real):
        _fail(pointer, "a number", value)


def _positive(value, pointer):
    _number(value, pointer)
    if not value > 0.0:
        _fail(pointer, "positive", value)


def _nonnegative(value, pointer):
    _number(value, pointer)
    if value < 0.0:
        _fail(pointer, "nonnegative", value)


def _fraction(value, pointer):
    _number(value, pointer)
    if not 0.0 < value < 1.0:
        _fail(pointer, "in (0, 1)", value)


def _optional(validator: Validator) -> Validator:
    def check(value, pointer):
        if value is not None:
            validator(value, pointer)

    return check


def _count(value, pointer):
    if isinstance(value, bool) or not isinstance(value, Integral) or value < 1:
        _fail(pointer, "a positive integer", value)


def _integer(value, pointer):
    if isinstance(value, bool) or not isinstance(value, Integral):
        _fail(pointer, "an integer", value)


def _boolean(value, pointer):
    if not isinstance(value, bool):
        _fail(pointer, "true or false", value)


def _string(value, pointer):
    if not isinstance(value, str):
        _fail(pointer, "a string", value)


def _list_of(validator: Validator) -> Validator:
    def check(value, pointer):
        if not isinstance(value, list) or not value:
            _fail(pointer, "a non-empty list", value)
        for index, item in enumerate(value):
            validator(item, f"{pointer}/{index}")

    return check


def _choice(*options: str) -> Validator:
    def check(value, pointer):
        if value not in options:
            _fail(pointer, f"one of {', '.join(options)}", value)

    return check


GRID = {"h": _positive, "r": _positive, "R": _positive}
KERNEL_FAMILY = _choice(*sorted(KERNEL_FAMILIES), "mixture")
NONLINEARITY_FAMILY = _choice(*sorted(NONLINEARITY_FAMILIES), "spline")
HOLDER = {"A": _positive, "m": _positive, "delta": _positive, "gamma": _positive}

SCHEMA: Dict[str, Any] = {
    "kernel": {"family": KERNEL_FAMILY, "params": "kernel-params", "h": _positive},
    "nonlinearity": {"family": NONLINEARITY_FAMILY, "params": "nonlinearity-params", "holder": HOLDER},
    "speed": {"orientation": _choice("forward", "reflected", "both"), "method": _choice("auto", "quadrature")},
    "profile": {
        "c": _optional(_number),
        "c_factor": _positive,
        "theta": _nonnegative,
        "grid": GRID,
        "find_min_speed": _boolean,
        "extend": _boolean,
        "tail_fit": _boolean,
        "schedule": _optional(_list_of(_nonnegative)),
    },
    "evolve": {
        "T": _positive,
        "dt": _optional(_positive),
        "save_every": _positive,
        "policy": _choice("rightward", "leftward"),
        "grid": GRID,
        "position": _number,
        "track_level": _fraction,
        "detect": _boolean,
    },
    "demo-nonunique": {
        "levels": _list_of(_count),
        "grid": GRID,
        "pins": _optional(_list_of(_number)),
        "method": _choice(*STATIONARY_METHODS),
    },
    "check-limit": {"eps": _list_of(_positive), "probe": _choice("gaussian", "tanh"), "h": _optional(_positive)},
    "check-supersolution": {
        "mode": _choice("kpp", "joined"),
        "lam": _optional(_positive),
        "delta": _positive,
        "N": _positive,
        "window": _list_of(_number),
    },
    "output_dir": _string,
    "seed": _integer,
    "workers": _count,
    "tolerances": {
        "tol": _positive,
        "max_iterations": _count,
        "newton_switch": _nonnegative,
        "residual_tol": _positive,
        "max_sweeps": _count,
    },
}

REQUIRED = {"/kernel": ("family",), "/nonlinearity": ("family",)}
for _block in ("/profile/grid", "/evolve/grid", "/demo-nonunique/grid"):
    REQUIRED[_block] = ("h", "r", "R")

DEFAULTS: Dict[str, Any] = {
    "kernel": {"family": "uniform", "params": {"a": -1.0, "b": 1.0}, "h": 0.02},
    "nonlinearity": {"family": "logistic", "params": {"r": 1.0}},
    "speed": {"orientation": "forward", "method": "quadrature"},
    "profile": {
        "c": None,
        "c_factor": 1.2,
        "theta": 0.0,
        "grid": {"h": 0.02, "r": 60.0, "R": 60.0},
        "find_min_speed": False,
        "extend": True,
        "tail_fit": True,
        "schedule": None,
    },
    "evolve": {
        "T": 100.0,
        "dt": None,
        "save_every": 0.5,
        "policy": "rightward",
        "grid": {"h": 0.05, "r": 20.0, "R": 20.0},
        "position": 0.0,
        "track_level": 0.5,
        "detect": True,
    },
    "demo-nonunique": {
        "levels": [4, 8, 16, 32],
        "grid": {"h": 0.05, "r": 20.0, "R": 10.0},
        "pins": None,
        "method": "newton",
    },
    "check-limit": {"eps": [0.4, 0.2, 0.1, 0.05], "probe": "gaussian", "h": None},
    "check-supersolution": {"mode": "kpp", "lam": None, "delta": 0.5, "N": 4.0, "window": [-20.0, 5.0]},
    "output_dir": "frontlab-out",
    "seed": 0,
    "workers": 1,
    "tolerances": {},
}


def _params_schema(block: Mapping, kind: str, pointer: str) -> Dict[str, Any]:
    family = block.get("family")
    if kind == "kernel-params":
        if family == "mixture":
            return {"weights": _list_of(_positive), "components": "components"}
        if family not in KERNEL_FAMILIES:
            _fail(f"{pointer}/family", f"one of {', '.join(sorted(KERNEL_FAMILIES))}, mixture", family)
        return {item.name: _number for item in fields(KERNEL_FAMILIES[family])}
    if family == "spline":
        return {"u": _list_of(_number), "f": _list_of(_number), "df": _list_of(_number)}
    if family not in NONLINEARITY_FAMILIES:
        _fail(f"{pointer}/family", f"one of {', '.join(sorted(NONLINEARITY_FAMILIES))}, spline", family)
    signature = inspect.signature(NONLINEARITY_FAMILIES[family])
    return {name: _number for name in signature.parameters if name != "holder"}


def _check(value: Any, schema: Any, pointer: str, parent: Mapping, partial: bool) -> None:
    if callable(schema):
        schema(value, pointer)
    elif schema in ("kernel-params", "nonlinearity-params"):
        _walk(value, _params_schema(parent, schema, pointer.rsplit("/", 1)[0]), pointer, partial)
    elif schema == "components":
        if not isinstance(value, list) or not value:
            _fail(pointer, "a non-empty list", value)
        for index, component in enumerate(value):
            _walk(component, {"family": KERNEL_FAMILY, "params": "kernel-params"}, f"{pointer}/{index}", partial)
    else:
        _walk(value, schema, pointer, partial)


def _walk(block: Any, schema: Dict[str, Any], pointer: str, partial: bool = False) -> None:
    if not isinstance(block, Mapping):
        _fail(pointer or "/", "a mapping", block)
    for key in block:
        if key not in schema:
            raise UnknownKeyError(
                f"unknown key {pointer}/{key}, expected one of {', '.join(schema)}",
                diagnostics={"pointer": f"{pointer}/{key}"},
            )
    for key in () if partial else REQUIRED.get(pointer, ()):
        if key not in block:
            raise MissingKeyError(f"missing key {pointer}/{key}", diagnostics={"pointer": f"{pointer}/{key}"})
    for key, value in block.items():
        _check(value, schema[key], f"{pointer}/{key}", block, partial)


def validate(raw: Any, partial: bool = False) -> Dict[str, Any]:
    """
    Check a raw configuration mapping against the schema.

    Parameters
    ----------
    raw : Any
        The parsed file contents, None for an empty file.
    partial : bool, optional
        Skip the required keys, for command line overrides; by default False.

    Returns
    -------
    Dict[str, Any]
        The same mapping, an empty one for None.

    Raises
    ------
    UnknownKeyError
        For keys the schema does not know.
    MissingKeyError
        For required keys that are absent.
    InvalidValueError
        For values of the wrong type or outside their range.
    """
    raw = {} if raw is None else raw
    _walk(raw, SCHEMA, "", partial)
    return raw


def _merge(base: Dict[str, Any], update: Mapping) -> Dict[str, Any]:
    merged = deepcopy(base)
    for key, value in update.items():
        if key == "family" and value != merged.get("family"):
            # parameters of another family do not carry over
            merged.pop("params", None)
            merged.pop("holder", None)
        if key == "params" or not isinstance(value, Mapping) or not isinstance(merged.get(key), dict):
            merged[key] = deepcopy(value)
        else:
            merged[key] = _merge(merged[key], value)
    return merged


ExperimentConfig = namedtuple("ExperimentConfig", ["resolved", "provided", "output_dir", "seed", "workers", "source"])
ExperimentConfig.__doc__ = """
Named tuple holding a validated and resolved experiment configuration.

Attributes
----------
resolved : Dict[str, Any]
    Every block with defaults, file values and flags merged; echoed into the run manifest.
provided : frozenset
    Top-level keys set by the file or the flags rather than by the defaults.
output_dir : Path
    Directory of the run artefacts.
seed : int
    Seed for randomized test data.
workers : int
    Cap on internal parallelism.
source : Path or None
    The configuration file.
"""


def read_config_file(path: Union[str, Path]) -> Any:
    """
    Parse a YAML or JSON configuration file; JSON is read as YAML.

    Raises
    ------
    InvalidValueError
        If the file cannot be read or parsed.
    """
    try:
        with open(path, "r", encoding="UTF-8") as fobj:
            return yaml.safe_load(fobj)
    except OSError as exc:
        raise InvalidValueError(f"cannot read configuration {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise InvalidValueError(f"configuration {path} is not valid YAML or JSON: {exc}") from exc


def load_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping] = None,
    environ: Optional[Mapping] = None,
) -> ExperimentConfig:
    """
    Read, validate and resolve an experiment configuration.

    Parameters
    ----------
    path : str or Path, optional
        YAML or JSON file; without it the defaults are used.
    overrides : Mapping, optional
        Values from command line flags, nested like the file.
    environ : Mapping, optional
        Environment to read FRONTLAB_OUT from, by default os.environ.

    Returns
    -------
    ExperimentConfig
        The resolved configuration.

    Raises
    ------
    ConfigSchemaError
        If the file or the overrides violate the schema.
    """
    raw = validate(read_config_file(path)) if path is not None else {}
    overrides = validate(dict(overrides or {}), partial=True)
    resolved = _merge(_merge(DEFAULTS, raw), overrides)
    environ = os.environ if environ is None else environ
    if environ.get(OUTPUT_VARIABLE):
        resolved["output_dir"] = environ[OUTPUT_VARIABLE]
    provided = frozenset(raw) | frozenset(overrides)
    logger.debug("configuration from %s with blocks %s", path, sorted(provided))
    return ExperimentConfig(
        resolved,
        provided,
        Path(resolved["output_dir"]),
        int(resolved["seed"]),
        int(resolved["workers"]),
        None if path is None else Path(path),
    )


KernelSpec = namedtuple("KernelSpec", ["family", "h", "description"])
KernelSpec.__doc__ = """
Named tuple holding the kernel of an experiment.

Attributes
----------
family : KernelFamily
    The analytic family.
h : float
    Sampling step for commands without a grid.
description : dict
    The resolved 'kernel' block.
"""

NonlinearitySpec = namedtuple("NonlinearitySpec", ["f", "description"])
NonlinearitySpec.__doc__ = """
Named tuple holding the reaction term of an experiment.

Attributes
----------
f : Nonlinearity
    The reaction term.
description : dict
    The resolved 'nonlinearity' block.
"""


def kernel_spec(config: ExperimentConfig) -> KernelSpec:
    block = config.resolved["kernel"]
    family: KernelFamily = family_from_dict(block)
    return KernelSpec(family, float(block["h"]), block)


def nonlinearity_spec(config: ExperimentConfig) -> NonlinearitySpec:
    block = config.resolved["nonlinearity"]
    f: Nonlinearity = nonlinearity_from_dict(block)
    return NonlinearitySpec(f, block)


def grid_from_block(block: Mapping) -> Grid:
    return Grid(float(block["h"]), float(block["r"]), float(block["R"]))


def solver_settings(config: ExperimentConfig) -> SolverSettings:
    """Truncated solver settings with the 'tolerances' block applied."""
    tolerances = config.resolved["tolerances"]
    keys = [key for key in SolverSettings._fields if key in tolerances]
    return SolverSettings(**{key: tolerances[key] for key in keys})


def stationary_settings(config: ExperimentConfig) -> StationarySettings:
    """Stationary solver settings with the 'tolerances' block and the demo method applied."""
    tolerances = config.resolved["tolerances"]
    keys = [key for key in StationarySettings._fields if key in tolerances]
    values = {key: tolerances[key] for key in keys}
    return StationarySettings(method=config.resolved["demo-nonunique"]["method"], **values)
