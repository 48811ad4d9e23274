"""Fusing aligned per-sensor streams into one decision stream.

Three architectures over whatever sensors are available at each instant:

* distance fusion — average the raw distances first, then run the
  derivative + danger pipeline once on the fused distance;
* danger fusion — score each sensor separately, then average scores;
* voting fusion — threshold each sensor separately, then majority-vote
  the decisions (ties break toward DANGEROUS, absent sensors abstain).

The motion-tracker channel is ground truth and is never fused.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .danger import DangerParams, Decision, danger_series, decisions_from_series
from .kinematics import KinematicTrack, differentiate
from .timeseries import TimeSeries, UniformGrid, align, smooth_trailing

RSU = "rsu"
CAMERA_AW = "camera_aw"
CAMERA_DRONE = "camera_drone"
TRACKER = "tracker"
SENSOR_IDS = (RSU, CAMERA_AW, CAMERA_DRONE)


@dataclass(frozen=True)
class SensorSet:
    """Per-sensor kinematic tracks sharing one grid; may include the tracker."""

    grid: UniformGrid
    tracks: Mapping[str, KinematicTrack]

    def __post_init__(self) -> None:
        object.__setattr__(self, "tracks", dict(self.tracks))
        expected = self.grid.times()
        for sensor_id, track in self.tracks.items():
            if track.grid.count != self.grid.count or not np.allclose(
                track.grid.times(), expected, rtol=0.0, atol=1e-12
            ):
                raise ValueError(f"track {sensor_id!r} is not on the shared grid")

    def fusable(self) -> dict[str, KinematicTrack]:
        """The sensor tracks that participate in fusion (tracker excluded)."""
        return {k: v for k, v in self.tracks.items() if k != TRACKER}

    def tracker(self) -> KinematicTrack | None:
        return self.tracks.get(TRACKER)


@dataclass(frozen=True)
class FusionTrace:
    """Per-grid-point outputs of all three fusion architectures."""

    grid: UniformGrid
    available_count: np.ndarray
    distance_fused: TimeSeries
    g_distance_fusion: TimeSeries
    g_danger_fusion: TimeSeries
    decision_distance: tuple[Decision, ...]
    decision_danger: tuple[Decision, ...]
    decision_vote: tuple[Decision, ...]
    dangerous_votes: np.ndarray
    votes_cast: np.ndarray


def sensor_set_from_streams(
    streams: Mapping[str, TimeSeries],
    resample_hz: float = 100.0,
    smooth_window_rsu: int = 2,
    smooth_window_camera: int = 5,
    derivative_smooth_window: int = 5,
    max_gap: float = 0.5,
) -> SensorSet:
    """Turn raw per-sensor distance streams into an aligned sensor set.

    Each stream is smoothed with its sensor-specific trailing window (the
    tracker is left untouched), all streams are resampled onto one shared
    grid, and each is differentiated into a kinematic track.
    """
    if not streams:
        raise ValueError("streams must not be empty")
    windows = {
        RSU: smooth_window_rsu,
        CAMERA_AW: smooth_window_camera,
        CAMERA_DRONE: smooth_window_camera,
        TRACKER: 1,
    }
    order = [s for s in (*SENSOR_IDS, TRACKER) if s in streams]
    unknown = set(streams) - set(windows)
    if unknown:
        raise ValueError(f"unknown sensor ids: {sorted(unknown)}")
    smoothed = [
        smooth_trailing(streams[s], windows[s]) if windows[s] > 1 else streams[s]
        for s in order
    ]
    grid, aligned = align(smoothed, resample_hz, max_gap=max_gap)
    tracks = {
        s: differentiate(series, grid, smooth_window=derivative_smooth_window)
        for s, series in zip(order, aligned)
    }
    return SensorSet(grid, tracks)


def _available_mean(stacked: np.ndarray) -> np.ndarray:
    """Row-wise mean over non-missing entries; NaN where none are present."""
    present = ~np.isnan(stacked)
    counts = present.sum(axis=0)
    sums = np.where(present, stacked, 0.0).sum(axis=0)
    with np.errstate(invalid="ignore"):
        return np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)


def fuse_distances(sensors: SensorSet) -> TimeSeries:
    """Average the available sensors' distances at each instant."""
    tracks = sensors.fusable()
    if not tracks:
        raise ValueError("no fusable sensors")
    stacked = np.vstack([t.distance.values for t in tracks.values()])
    return TimeSeries(sensors.grid.times(), _available_mean(stacked))


def _stacked_danger(sensors: SensorSet, params: DangerParams) -> np.ndarray:
    tracks = sensors.fusable()
    if not tracks:
        raise ValueError("no fusable sensors")
    return np.vstack([danger_series(t, params).values for t in tracks.values()])


def fuse_danger_values(
    sensors: SensorSet, params: DangerParams = DangerParams()
) -> TimeSeries:
    """Score each sensor separately, then average the available scores."""
    stacked = _stacked_danger(sensors, params)
    return TimeSeries(sensors.grid.times(), _available_mean(stacked))


def _votes_from_stacked(
    stacked: np.ndarray, params: DangerParams
) -> tuple[np.ndarray, np.ndarray]:
    cast = (~np.isnan(stacked)).sum(axis=0)
    dangerous = (stacked > params.threshold).sum(axis=0)
    return dangerous, cast


def _majority(dangerous: np.ndarray, cast: np.ndarray) -> tuple[Decision, ...]:
    out = []
    for n_danger, n_cast in zip(dangerous, cast):
        if n_cast == 0:
            out.append(Decision.UNKNOWN)
        elif 2 * n_danger >= n_cast:
            out.append(Decision.DANGEROUS)
        else:
            out.append(Decision.SAFE)
    return tuple(out)


def fuse_votes(
    sensors: SensorSet, params: DangerParams = DangerParams()
) -> tuple[Decision, ...]:
    """Majority vote of per-sensor threshold decisions.

    Sensors without a score abstain; a tie between DANGEROUS and SAFE
    resolves to DANGEROUS; with no votes at all the instant is UNKNOWN.
    """
    dangerous, cast = _votes_from_stacked(_stacked_danger(sensors, params), params)
    return _majority(dangerous, cast)


def fuse_all(
    sensors: SensorSet,
    params: DangerParams = DangerParams(),
    derivative_smooth_window: int = 5,
) -> FusionTrace:
    """Run all three fusion architectures over one sensor set.

    The fused distance goes through the same differentiation used for the
    single sensors before being scored, so the distance-fusion decision
    stream is produced by one ordinary pipeline run on averaged input.
    """
    grid = sensors.grid
    distance_fused = fuse_distances(sensors)
    fused_track = differentiate(distance_fused, grid, smooth_window=derivative_smooth_window)
    g_distance = danger_series(fused_track, params)
    stacked_g = _stacked_danger(sensors, params)
    g_danger = TimeSeries(grid.times(), _available_mean(stacked_g))
    dangerous, cast = _votes_from_stacked(stacked_g, params)

    stacked_presence = np.vstack(
        [t.distance.values for t in sensors.fusable().values()]
    )
    available_count = (~np.isnan(stacked_presence)).sum(axis=0)

    return FusionTrace(
        grid=grid,
        available_count=available_count,
        distance_fused=distance_fused,
        g_distance_fusion=g_distance,
        g_danger_fusion=g_danger,
        decision_distance=decisions_from_series(g_distance, params),
        decision_danger=decisions_from_series(g_danger, params),
        decision_vote=_majority(dangerous, cast),
        dangerous_votes=dangerous,
        votes_cast=cast,
    )
