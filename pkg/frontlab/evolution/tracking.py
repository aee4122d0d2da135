# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Front positions of saved frames, the speeds fitted to them and the test for accelerating fronts.
"""

import logging
from collections import namedtuple
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Tuple, Union

import numpy as np
from scipy.stats import linregress

from ..exceptions import InsufficientSamplesError, NoCrossingError
from .stepper import BoundaryPolicy, SimState

logger = logging.getLogger(__name__)

MIN_SPEED_SAMPLES = 20
MIN_SPAN_SAMPLES = 40
MIN_WINDOW_SAMPLES = 3
ACCELERATION_RATIO = 1.10
RELATIVE_FIT_RESIDUAL = 0.25


@dataclass
class FrontTrack:
    """
    Positions of a level crossing over time.

    Attributes
    ----------
    level : float
        The tracked level.
    policy : BoundaryPolicy
        Orientation of the front, fixes the sign of the speed.
    times, positions : List[float]
        Sample times and crossing positions.
    """

    level: float = 0.5
    policy: BoundaryPolicy = BoundaryPolicy.RIGHTWARD
    times: List[float] = field(default_factory=list)
    positions: List[float] = field(default_factory=list)

    def append(self, t: float, position: float) -> None:
        self.times.append(float(t))
        self.positions.append(float(position))

    def __len__(self) -> int:
        return len(self.times)

    def arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.times), np.asarray(self.positions)

    def to_csv(self, path: Union[str, Path]) -> None:
        """Write the columns t, x_front."""
        np.savetxt(path, np.column_stack(self.arrays()), delimiter=",", header="t,x_front", comments="")


def track_front(states: Iterable[SimState], level: float = 0.5, track: Optional[FrontTrack] = None) -> FrontTrack:
    """
    Append the level crossing of every state to a track.

    Raises
    ------
    NoCrossingError
        If the front has left the window of a state; the window has to follow the front.
    """
    for state in states:
        if track is None:
            track = FrontTrack(level, state.policy)
        try:
            position = state.crossing(level)
        except NoCrossingError as exc:
            raise NoCrossingError(
                f"front left the window [{state.x[0]:.6g}, {state.x[-1]:.6g}] at t = {state.t:.6g}; "
                "recenter the window",
                diagnostics={"t": state.t, "level": level, **exc.diagnostics},
            ) from exc
        track.append(state.t, position)
    return track if track is not None else FrontTrack(level)


SpeedFit = namedtuple("SpeedFit", ["speed", "fit_residual", "samples", "span"])
SpeedFit.__doc__ = """
Named tuple holding a least-squares speed.

Attributes
----------
speed : float
    The speed c of the front, positive when it invades the state 0.
fit_residual : float
    Root mean square deviation of the positions from the fitted line.
samples : int
    Track samples in the window.
span : Tuple[float, float]
    The time window of the fit.
"""


def _fit(track: FrontTrack, start: float, end: float, minimum: int) -> SpeedFit:
    times, positions = track.arrays()
    mask = (times >= start) & (times <= end)
    count = int(np.count_nonzero(mask))
    if count < minimum:
        raise InsufficientSamplesError(
            f"{count} track samples in [{start:.6g}, {end:.6g}], {minimum} are needed",
            diagnostics={"samples": count, "span": [start, end]},
        )
    t, x = times[mask], positions[mask]
    fit = linregress(t, x)
    rms = float(np.sqrt(np.mean((x - fit.intercept - fit.slope * t) ** 2)))
    return SpeedFit(float(track.policy.sign * fit.slope), rms, count, (float(start), float(end)))


def measure_speed(track: FrontTrack, window: Optional[Tuple[float, float]] = None) -> SpeedFit:
    """
    Least-squares speed over a time window, by default the trailing half of the track.

    Raises
    ------
    InsufficientSamplesError
        If fewer than 20 samples fall into the window.
    """
    if len(track) == 0:
        raise InsufficientSamplesError("the track is empty", diagnostics={"samples": 0})
    if window is None:
        end = track.times[-1]
        window = (0.5 * (track.times[0] + end), end)
    result = _fit(track, window[0], window[1], MIN_SPEED_SAMPLES)
    logger.info("speed %.6f on [%.4g, %.4g] from %d samples", result.speed, *window, result.samples)
    return result


Acceleration = namedtuple("Acceleration", ["accelerating", "speed_ratio", "early", "late"])
Acceleration.__doc__ = """
Named tuple holding the comparison of the speeds on [T/2, T] and [T, 2T].

Attributes
----------
accelerating : bool
    Ratio above 1.10 with both fits close to straight lines.
speed_ratio : float
    Late speed divided by early speed.
early, late : SpeedFit
    The fits on [T/2, T] and [T, 2T].
"""


def _straight(fit: SpeedFit) -> bool:
    length = fit.span[1] - fit.span[0]
    scale = abs(fit.speed) * length
    return scale > 0.0 and fit.fit_residual <= RELATIVE_FIT_RESIDUAL * scale


def accelerating_detector(track: FrontTrack, T: Optional[float] = None) -> Acceleration:
    """
    Compare the fitted speeds on the dyadic windows [T/2, T] and [T, 2T].

    The front counts as accelerating when the later speed exceeds the earlier one by more than
    10% and on both windows the fit residual is at most a quarter of the distance travelled, which
    rules out tracks that jump.

    Parameters
    ----------
    track : FrontTrack
        A track reaching time 2T.
    T : float, optional
        Middle of the windows, by default half the last sample time.

    Raises
    ------
    InsufficientSamplesError
        If [T/2, 2T] holds fewer than 40 samples or the track ends before 2T.
    """
    if len(track) == 0:
        raise InsufficientSamplesError("the track is empty", diagnostics={"samples": 0})
    end = track.times[-1]
    T = 0.5 * end if T is None else float(T)
    if not 0.0 < 2.0 * T <= end * (1.0 + 1e-12):
        raise InsufficientSamplesError(
            f"track ends at t = {end:.6g} before 2T = {2.0 * T:.6g}", diagnostics={"T": T, "end": end}
        )
    span = _fit(track, 0.5 * T, 2.0 * T, MIN_SPAN_SAMPLES)
    early = _fit(track, 0.5 * T, T, MIN_WINDOW_SAMPLES)
    late = _fit(track, T, 2.0 * T, MIN_WINDOW_SAMPLES)
    ratio = late.speed / early.speed if early.speed != 0.0 else float("inf")
    accelerating = bool(ratio > ACCELERATION_RATIO and _straight(early) and _straight(late))
    logger.info("dyadic speeds %.6f -> %.6f over %d samples, ratio %.4f", early.speed, late.speed, span.samples, ratio)
    return Acceleration(accelerating, float(ratio), early, late)
