# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
One runner per subcommand.

A runner takes the resolved `ExperimentConfig` and the `Artefacts` of the run, computes, writes
its CSV and JSON files and returns the invariant checks of the command as a mapping from check
name to outcome. Every number of a JSON summary is also written to a CSV of the same name.
"""

import logging
from typing import Any, Dict, Mapping

import numpy as np

from ..config.experiment import (
    ExperimentConfig,
    grid_from_block,
    kernel_spec,
    nonlinearity_spec,
    solver_settings,
    stationary_settings,
)
from ..config.output import Artefacts
from ..dispersion import (
    Orientation,
    build_supersolution,
    c1,
    c_star_left,
    jensen_lower_bound,
    kpp_exponential_supersolution,
    local_speed_shift,
    verify_supersolution,
)
from ..evolution import (
    BoundaryPolicy,
    EvolveSettings,
    SmoothField,
    accelerating_detector,
    heaviside_initial,
    local_limit_ladder,
    measure_speed,
    simulate,
    track_front,
)
from ..exceptions import ClassificationError, InsufficientSamplesError, InvalidValueError, NoFiniteSpeedError
from ..kernels import build_kernel, kernel_summary, mollison_check
from ..nonlinearities import classify
from ..nonunique import build_case, run_demo
from ..profile import (
    compare_fits,
    endpoint_values,
    ignition_speed,
    minimal_speed_monostable,
    residual,
    solve_front,
    tail_fit,
)

logger = logging.getLogger(__name__)

Checks = Dict[str, bool]

PROFILE_RESIDUAL = 1e-6
ENDPOINT_TOLERANCE = 1e-3
TAIL_RATE_TOLERANCE = 0.02
MONOTONE_TOLERANCE = 1e-12


def write_summary(artefacts: Artefacts, name: str, summary: Mapping[str, Any]) -> None:
    """
    Write ``name``.json and a one-row ``name``.csv holding its numeric entries.

    Flags are written to the CSV as 0 and 1, entries that are None or not numbers only to the JSON.
    """
    artefacts.json(f"{name}.json", summary)
    numbers = {
        key: [float(value)]
        for key, value in sorted(summary.items())
        if isinstance(value, (bool, int, float, np.number))
    }
    if numbers:
        artefacts.csv(f"{name}.csv", numbers)


def _monotone(u: np.ndarray) -> bool:
    return bool(np.all(np.diff(u) >= -MONOTONE_TOLERANCE))


def run_speed(config: ExperimentConfig, artefacts: Artefacts) -> Checks:
    """Minimal speeds of the dispersion relation in the requested orientations."""
    spec = kernel_spec(config)
    f = nonlinearity_spec(config).f
    block = config.resolved["speed"]
    kernel = build_kernel(spec.family, spec.h)
    artefacts.save("kernel.csv", kernel)
    classification = classify(f)
    if block["orientation"] == "both":
        orientations = [Orientation.FORWARD, Orientation.REFLECTED]
    else:
        orientations = [Orientation(block["orientation"])]

    summary: Dict[str, Any] = {
        "jensen_bound": jensen_lower_bound(kernel, f),
        "local_speed_shift": local_speed_shift(kernel),
        "kpp": classification.kpp,
        "fprime0": f.fprime0,
    }
    checks: Checks = {}
    results = {}
    for orientation in orientations:
        suffix = "" if orientation is Orientation.FORWARD else "_left"
        result = c1(kernel, f, orientation, block["method"])
        results[orientation] = result
        curve_name = f"curve_{orientation.value}.csv"
        artefacts.save(curve_name, result.curve)
        summary.update(
            {
                f"c1{suffix}": result.speed,
                f"lambda_star{suffix}": result.lambda_star,
                f"lambda_max{suffix}": result.lambda_max,
                f"attained{suffix}": result.attained,
                f"curve_csv_path{suffix}": curve_name,
            }
        )
        checks[f"finite_speed{suffix}"] = bool(np.isfinite(result.speed))
        logger.info("%s minimal speed %.8f at lambda = %.6f", orientation.value, result.speed, result.lambda_star)
    # c_star is the leftward minimal speed whatever orientation was asked for
    leftward = results.get(Orientation.REFLECTED)
    if leftward is None:
        try:
            leftward = c_star_left(kernel, f, block["method"])
        except NoFiniteSpeedError as exc:
            logger.info("no leftward minimal speed: %s", exc)
    summary["c_star"] = None if leftward is None else leftward.speed
    summary.update({f"kernel_{key}": value for key, value in kernel_summary(kernel).items()})
    summary["mollison"] = mollison_check(kernel).diagnosis
    write_summary(artefacts, "speed", summary)
    return checks


def _profile_speed(config, kernel, f, grid, classification, settings) -> Dict[str, Any]:
    block = config.resolved["profile"]
    if classification.ignition:
        found = ignition_speed(kernel, f, grid, settings=settings)
        return {"c": found.c, "c1": None, "speed": None, "ignition": found}
    speed = c1(kernel, f)
    if block["find_min_speed"]:
        minimal = minimal_speed_monostable(kernel, f, grid, settings=settings, workers=config.workers)
        # no monostable front is slower than c1
        c = max(minimal.c_star, speed.speed)
    elif block["c"] is not None:
        c = float(block["c"])
    else:
        c = block["c_factor"] * speed.speed
    return {"c": c, "c1": speed.speed, "speed": speed, "ignition": None}


def run_profile(config: ExperimentConfig, artefacts: Artefacts) -> Checks:
    """
    Travelling front of the configured pair at a given speed, the minimal speed or the ignition speed.
    """
    f = nonlinearity_spec(config).f
    block = config.resolved["profile"]
    grid = grid_from_block(block["grid"])
    kernel = build_kernel(kernel_spec(config).family, grid.h)
    settings = solver_settings(config)
    classification = classify(f)
    chosen = _profile_speed(config, kernel, f, grid, classification, settings)
    c = chosen["c"]

    if chosen["ignition"] is not None:
        profile = chosen["ignition"].profile
        solution_residual = None
    else:
        solution = solve_front(kernel, f, c, grid, block["theta"], block["schedule"], settings, block["extend"])
        profile = solution.profile
        solution_residual = solution.residual
    value = residual(profile, kernel, f) if solution_residual is None else solution_residual
    endpoints = endpoint_values(profile, kernel, f)
    artefacts.save("profile.csv", profile)

    report = profile.metadata.get("report")
    if report is not None:
        artefacts.json("iteration_report.json", report._asdict())
        artefacts.csv("iteration_history.csv", {"sweep": np.arange(len(report.history)), "sup_change": report.history})

    summary: Dict[str, Any] = {"c": c, "c1": chosen["c1"], "residual": value, "theta": block["theta"]}
    summary.update(endpoints)
    checks: Checks = {
        "residual": value <= PROFILE_RESIDUAL,
        "monotone": _monotone(profile.u),
        "endpoints": abs(endpoints["u_left"] - block["theta"]) <= ENDPOINT_TOLERANCE
        and abs(1.0 - endpoints["u_right"]) <= ENDPOINT_TOLERANCE,
    }
    if block["tail_fit"] and chosen["speed"] is not None and block["theta"] == 0.0:
        try:
            fit = tail_fit(profile, kernel, f, speed=chosen["speed"])
            comparison = compare_fits(profile, kernel, f, speed=chosen["speed"])
        except InsufficientSamplesError as exc:
            logger.warning("no tail fit: %s", exc)
        else:
            summary.update(
                {
                    "lambda_hat": fit.lam_hat,
                    "lambda_of_c": fit.lambda_of_c,
                    "log_corrected": fit.log_corrected,
                    "tail_r2": fit.r2,
                    "plain_fit_residual": comparison.plain.fit_residual,
                    "corrected_fit_residual": comparison.corrected.fit_residual,
                }
            )
            if fit.log_corrected:
                checks["tail_shape"] = comparison.corrected.fit_residual < comparison.plain.fit_residual
            elif fit.lambda_of_c is not None:
                checks["tail_rate"] = abs(fit.lam_hat - fit.lambda_of_c) <= TAIL_RATE_TOLERANCE * fit.lambda_of_c
    write_summary(artefacts, "diagnostics_profile", summary)
    return checks


def run_evolve(config: ExperimentConfig, artefacts: Artefacts) -> Checks:
    """Simulate the Cauchy problem from step data, track the front and measure its speed."""
    f = nonlinearity_spec(config).f
    block = config.resolved["evolve"]
    grid = grid_from_block(block["grid"])
    kernel = build_kernel(kernel_spec(config).family, grid.h)
    policy = BoundaryPolicy(block["policy"])
    settings = EvolveSettings(block["T"], block["dt"], block["save_every"], block["track_level"])
    simulation = simulate(kernel, f, heaviside_initial(grid, block["position"], policy), settings)

    frames = simulation.frames
    artefacts.csv(
        "frames.csv",
        {
            "t": np.concatenate([np.full(len(frame.u), frame.t) for frame in frames]),
            "x": np.concatenate([frame.x for frame in frames]),
            "u": np.concatenate([frame.u for frame in frames]),
        },
    )
    track = track_front(frames, block["track_level"])
    artefacts.save("track.csv", track)
    fit = measure_speed(track)

    orientation = Orientation.REFLECTED if policy is BoundaryPolicy.LEFTWARD else Orientation.FORWARD
    try:
        predicted = c1(kernel, f, orientation).speed
    except (NoFiniteSpeedError, ClassificationError) as exc:
        logger.info("no minimal speed to compare with: %s", exc)
        predicted = None

    summary: Dict[str, Any] = {
        "measured_speed": fit.speed,
        "fit_residual": fit.fit_residual,
        "c1": predicted,
        "dt": simulation.dt,
        "recenterings": simulation.recenterings,
        "T": block["T"],
    }
    if block["detect"]:
        try:
            acceleration = accelerating_detector(track)
        except InsufficientSamplesError as exc:
            logger.warning("no acceleration test: %s", exc)
        else:
            summary.update(
                {
                    "accelerating": acceleration.accelerating,
                    "speed_ratio": acceleration.speed_ratio,
                    "early_speed": acceleration.early.speed,
                    "late_speed": acceleration.late.speed,
                }
            )
    write_summary(artefacts, "evolve", summary)
    final = simulation.final.u if policy is BoundaryPolicy.RIGHTWARD else simulation.final.u[::-1]
    return {"monotone": _monotone(final), "bounded": bool(np.all((final >= 0.0) & (final <= 1.0)))}


def run_demo_nonunique(config: ExperimentConfig, artefacts: Artefacts) -> Checks:
    """Regularized stationary fronts, their discontinuous limit and the exploratory pin sweep."""
    block = config.resolved["demo-nonunique"]
    grid = grid_from_block(block["grid"])
    f = nonlinearity_spec(config).f if "nonlinearity" in config.provided else None
    family = kernel_spec(config).family if "kernel" in config.provided else None
    case = build_case(grid.h, f, family)
    result = run_demo(case, grid, block["levels"], block["pins"], stationary_settings(config), config.workers)

    for solution in result.solutions:
        artefacts.save(f"level_{solution.n}.csv", solution.profile)
    artefacts.save("limit.csv", result.limit.profile)
    artefacts.csv(
        "levels.csv",
        {
            "n": [solution.n for solution in result.solutions],
            "residual": [solution.residual for solution in result.solutions],
            "sweeps": [solution.sweeps for solution in result.solutions],
            "newton_steps": [solution.newton_steps for solution in result.solutions],
            "decay_rate": [solution.decay_rate for solution in result.solutions],
        },
    )
    artefacts.csv(
        "pin_sweep.csv",
        {
            "pin": [member.pin for member in result.sweep],
            "residual_offjump": [
                np.nan if member.residual_offjump is None else member.residual_offjump for member in result.sweep
            ],
            "survives": [member.survives for member in result.sweep],
        },
    )
    certificate = dict(result.certificate)
    checks = dict(certificate.pop("checks"))
    write_summary(artefacts, "certificate", certificate)
    artefacts.json(
        "exploratory_pins.json",
        {
            "label": "exploratory",
            "pins": [
                {"pin": member.pin, "residual_offjump": member.residual_offjump, "survives": member.survives}
                for member in result.sweep
            ],
            "ordering": result.limit.ordering,
        },
    )
    return checks


def run_check_limit(config: ExperimentConfig, artefacts: Artefacts) -> Checks:
    """Remainders of the diffusion expansion of the rescaled kernel over a ladder of scales."""
    spec = kernel_spec(config)
    block = config.resolved["check-limit"]
    kernel = build_kernel(spec.family, spec.h)
    ladder = local_limit_ladder(kernel, SmoothField.from_name(block["probe"]), block["eps"], block["h"])
    columns = ("eps", "error", "scaled_error", "dilation", "h")
    artefacts.csv("limit_ladder.csv", {name: [getattr(check, name) for check in ladder.checks] for name in columns})
    write_summary(
        artefacts,
        "check_limit",
        {"decreasing": ladder.decreasing, "alpha": kernel.alpha, "beta": kernel.beta, "probe": block["probe"]},
    )
    return {"decreasing": ladder.decreasing}


def run_check_supersolution(config: ExperimentConfig, artefacts: Artefacts) -> Checks:
    """Build the KPP or the joined supersolution and verify its defect on a window."""
    spec = kernel_spec(config)
    f = nonlinearity_spec(config).f
    block = config.resolved["check-supersolution"]
    window = block["window"]
    if len(window) != 2 or not window[0] < window[1]:
        raise InvalidValueError(
            f"/check-supersolution/window must be [x_min, x_max] with x_min < x_max, got {window}",
            diagnostics={"pointer": "/check-supersolution/window"},
        )
    kernel = build_kernel(spec.family, spec.h)
    lam = block["lam"]
    if block["mode"] == "kpp":
        lam = c1(kernel, f).lambda_star if lam is None else lam
        result = kpp_exponential_supersolution(kernel, f, lam)
    else:
        lam = max(c1(kernel, f).lambda_star, 2.0 * block["delta"]) if lam is None else lam
        result = build_supersolution(kernel, f, lam, block["delta"], block["N"])
    check = verify_supersolution(result.w, result.kappa, kernel, f, window[0], window[1])
    artefacts.csv("defect.csv", {"x": check.x, "defect": check.defect})
    summary: Dict[str, Any] = {
        "kappa": result.kappa,
        "lambda": lam,
        "worst_violation": check.worst_violation,
        "location": check.location,
        "ok": check.ok,
    }
    summary.update({f"component_{key}": value for key, value in result.components.items()})
    write_summary(artefacts, "supersolution", summary)
    return {"supersolution": check.ok}


RUNNERS = {
    "speed": run_speed,
    "profile": run_profile,
    "evolve": run_evolve,
    "demo-nonunique": run_demo_nonunique,
    "check-limit": run_check_limit,
    "check-supersolution": run_check_supersolution,
}
