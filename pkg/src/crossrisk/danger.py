"""Instantaneous danger scoring of an approaching obstacle.

The score combines a saturating speed contribution and a dead-banded,
saturating acceleration contribution, divided by a log-compressed
distance so that nearby obstacles dominate.  A fixed threshold turns the
score into a go/no-go decision; instants without data stay ``UNKNOWN``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .kinematics import KinematicTrack
from .timeseries import TimeSeries


class Decision(enum.Enum):
    """Per-instant classification of the crossing situation."""

    SAFE = "Safe"
    DANGEROUS = "Dangerous"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:  # CSV/report label
        return self.value


@dataclass(frozen=True)
class DangerParams:
    """All constants of the danger score in one validated record.

    Defaults match the reference tuning: acceleration weighted at a tenth
    of the speed contribution, speed ramping over [0.05, 0.65] m/s,
    acceleration dead band of 1 m/s² saturating at 10 m/s², and a log
    offset of 0.6 m keeping the denominator finite at zero distance.
    """

    accel_weight: float = 0.1
    distance_offset: float = 0.6
    threshold: float = 1.0
    speed_deadband: float = 0.05
    speed_saturation: float = 0.65
    accel_deadband: float = 1.0
    accel_saturation: float = 10.0
    denominator_floor: float = 1e-3

    def __post_init__(self) -> None:
        if self.accel_weight < 0:
            raise ValueError("accel_weight must be non-negative")
        if self.distance_offset <= 0:
            raise ValueError("distance_offset must be positive")
        if not 0 <= self.speed_deadband < self.speed_saturation:
            raise ValueError("require 0 <= speed_deadband < speed_saturation")
        if not 0 <= self.accel_deadband < self.accel_saturation:
            raise ValueError("require 0 <= accel_deadband < accel_saturation")
        if self.denominator_floor <= 0:
            raise ValueError("denominator_floor must be positive")


@dataclass(frozen=True)
class DangerSample:
    """Danger score and decision at one instant; ``g`` is None when inputs are missing."""

    timestamp: float
    g: float | None
    decision: Decision


def speed_transform(closing_speed, params: DangerParams = DangerParams()):
    """Normalized speed contribution: 0 below the dead band, 1 above saturation.

    Piecewise linear and continuous; accepts scalars or arrays.
    """
    scaled = (np.asarray(closing_speed, dtype=float) - params.speed_deadband) / (
        params.speed_saturation - params.speed_deadband
    )
    out = np.clip(scaled, 0.0, 1.0)
    return float(out) if np.isscalar(closing_speed) else out


def accel_transform(acceleration, params: DangerParams = DangerParams()):
    """Normalized acceleration contribution in [-1, 1] with a symmetric dead band.

    Braking (negative) accelerations reduce the score, speeding-up ones
    increase it; magnitudes inside the dead band contribute nothing and
    magnitudes beyond saturation are capped.
    """
    a = np.asarray(acceleration, dtype=float)
    span = params.accel_saturation - params.accel_deadband
    pos = np.clip((a - params.accel_deadband) / span, 0.0, 1.0)
    neg = np.clip((a + params.accel_deadband) / span, -1.0, 0.0)
    out = pos + neg
    return float(out) if np.isscalar(acceleration) else out


def _danger_values(
    distance: np.ndarray,
    closing_speed: np.ndarray,
    acceleration: np.ndarray,
    params: DangerParams,
) -> np.ndarray:
    """Vectorized score; NaN inputs yield NaN, negative distances raise."""
    d = np.asarray(distance, dtype=float)
    if np.any(d[~np.isnan(d)] < 0):
        raise ValueError("distance must be non-negative")
    numerator = speed_transform(closing_speed, params) + params.accel_weight * (
        accel_transform(acceleration, params)
    )
    with np.errstate(invalid="ignore"):
        denominator = np.maximum(
            np.log(d + params.distance_offset), params.denominator_floor
        )
    return numerator / denominator


def danger_value(
    distance: float,
    closing_speed: float,
    acceleration: float,
    params: DangerParams = DangerParams(),
) -> float:
    """Danger score of one instantaneous kinematic state.

    The denominator ``log(distance + offset)`` is floored at a small
    positive constant, so the score blows up (rather than flipping sign)
    when the obstacle is almost touching.
    """
    if distance < 0:
        raise ValueError("distance must be non-negative")
    return float(
        _danger_values(
            np.asarray(distance), np.asarray(closing_speed), np.asarray(acceleration), params
        )
    )


def decide(g: float | None, params: DangerParams = DangerParams()) -> Decision:
    """Threshold a score: strictly above the threshold is DANGEROUS."""
    if g is None or np.isnan(g):
        return Decision.UNKNOWN
    return Decision.DANGEROUS if g > params.threshold else Decision.SAFE


def danger_series(track: KinematicTrack, params: DangerParams = DangerParams()) -> TimeSeries:
    """Danger score per grid point; missing wherever any kinematic input is missing."""
    values = _danger_values(
        track.distance.values, track.speed.values, track.acceleration.values, params
    )
    return track.distance.with_values(values)


def decisions_from_series(
    series: TimeSeries, params: DangerParams = DangerParams()
) -> tuple[Decision, ...]:
    """Threshold a score series into a per-instant decision stream."""
    g = series.values
    out = np.where(g > params.threshold, Decision.DANGEROUS, Decision.SAFE)
    out = np.where(np.isnan(g), Decision.UNKNOWN, out)
    return tuple(out.tolist())


def danger_track(
    track: KinematicTrack, params: DangerParams = DangerParams()
) -> list[DangerSample]:
    """Score and classify every grid point of a kinematic track."""
    series = danger_series(track, params)
    decisions = decisions_from_series(series, params)
    out = []
    for t, g, decision in zip(track.grid.times(), series.values, decisions):
        out.append(
            DangerSample(
                timestamp=float(t),
                g=None if np.isnan(g) else float(g),
                decision=decision,
            )
        )
    return out
