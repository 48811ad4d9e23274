"""Synthetic crossing scenarios for desk-scale verification.

An obstacle approaches along piecewise-constant-acceleration segments
(speed clamped at zero from below: it may stop but never reverses).
Ground truth is evaluated in closed form, then degraded into per-sensor
streams: a range unit with multiplicative noise that is always
available, and pinhole cameras that only detect the obstacle within a
hard range and measure distance through the apparent width of its
bounding box.  Everything is deterministic given the seed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .config import RunConfig
from .danger import Decision, danger_series, decisions_from_series
from .fusion import (
    CAMERA_AW,
    CAMERA_DRONE,
    RSU,
    TRACKER,
    SensorSet,
    sensor_set_from_streams,
)
from .kinematics import KinematicTrack
from .timeseries import TimeSeries, UniformGrid

# Pinhole focal length in pixels for a 1280 px wide image with a 120 degree
# horizontal field of view: (1280 / 2) / tan(60 deg).
DEFAULT_FOCAL_PX = 640.0 / math.tan(math.radians(60.0))

# Which scenario rate drives each simulated sensor.
SENSOR_RATE_KEYS = (
    (RSU, "rsu_rate_hz"),
    (CAMERA_AW, "camera_rate_hz"),
    (CAMERA_DRONE, "camera_rate_hz"),
)


@dataclass(frozen=True)
class RangeSensorModel:
    """Always-available distance sensor with multiplicative Gaussian noise.

    ``relative_noise`` is the datasheet-style relative accuracy, read as
    a two-sigma band (sigma = relative_noise / 2).
    """

    relative_noise: float = 0.05

    def __post_init__(self) -> None:
        if self.relative_noise < 0:
            raise ValueError("relative_noise must be non-negative")


@dataclass(frozen=True)
class CameraSensorModel:
    """Monocular camera measuring distance via bounding-box width.

    The detector only fires within ``detection_range`` meters; beyond it
    the channel is missing.  Pixel noise perturbs the measured box width
    before the distance is recovered through the pinhole relation.
    """

    detection_range: float = 2.5
    pixel_noise_sigma: float = 2.0
    focal_px: float = DEFAULT_FOCAL_PX
    object_width_m: float = 0.32

    def __post_init__(self) -> None:
        if self.detection_range <= 0:
            raise ValueError("detection_range must be positive")
        if self.pixel_noise_sigma < 0:
            raise ValueError("pixel_noise_sigma must be non-negative")
        if self.focal_px <= 0 or self.object_width_m <= 0:
            raise ValueError("focal_px and object_width_m must be positive")


SensorModel = RangeSensorModel | CameraSensorModel


@dataclass(frozen=True)
class ScenarioConfig:
    """One synthetic run: initial state, motion segments, rates, seed."""

    duration: float
    initial_distance: float
    initial_speed: float = 0.0
    segments: tuple[tuple[float, float], ...] = ()
    truth_rate_hz: float = 30.0
    rsu_rate_hz: float = 10.0
    camera_rate_hz: float = 30.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.duration <= 0:
            raise ValueError("duration must be positive")
        if self.initial_distance <= 0:
            raise ValueError("initial_distance must be positive")
        if self.initial_speed < 0:
            raise ValueError("initial_speed must be non-negative")
        for rate in (self.truth_rate_hz, self.rsu_rate_hz, self.camera_rate_hz):
            if rate <= 0:
                raise ValueError("sample rates must be positive")
        segments = tuple((float(d), float(a)) for d, a in self.segments)
        if not segments:
            segments = ((self.duration, 0.0),)
        if any(d <= 0 for d, _ in segments):
            raise ValueError("segment durations must be positive")
        if sum(d for d, _ in segments) + 1e-9 < self.duration:
            raise ValueError("segments must cover the whole duration")
        object.__setattr__(self, "segments", segments)


@dataclass(frozen=True)
class _Phase:
    """Maximal interval on which the obstacle state has one closed form."""

    t_start: float
    t_end: float
    distance0: float
    speed0: float
    accel: float


def _build_phases(config: ScenarioConfig) -> list[_Phase]:
    """Split the motion into phases, inserting stops where speed hits zero."""
    phases: list[_Phase] = []
    t = 0.0
    d = config.initial_distance
    v = config.initial_speed
    for seg_duration, accel in config.segments:
        t_end = t + seg_duration
        while t < t_end - 1e-12:
            if v <= 0.0 and accel <= 0.0:
                # stopped and not restarting within this segment
                phases.append(_Phase(t, t_end, d, 0.0, 0.0))
                v = 0.0
                t = t_end
            elif accel < 0.0 and v + accel * (t_end - t) < 0.0:
                stop = v / -accel
                phases.append(_Phase(t, t + stop, d, v, accel))
                d -= v * stop + 0.5 * accel * stop * stop
                v = 0.0
                t += stop
            else:
                span = t_end - t
                phases.append(_Phase(t, t_end, d, max(v, 0.0), accel))
                d -= max(v, 0.0) * span + 0.5 * accel * span * span
                v = max(v, 0.0) + accel * span
                t = t_end
        if t_end >= config.duration:
            break
    return phases


def _truth_state(
    config: ScenarioConfig, times: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Closed-form distance, closing speed and acceleration at ``times``."""
    phases = _build_phases(config)
    starts = np.array([p.t_start for p in phases])
    idx = np.clip(np.searchsorted(starts, times, side="right") - 1, 0, len(phases) - 1)
    d0 = np.array([p.distance0 for p in phases])[idx]
    v0 = np.array([p.speed0 for p in phases])[idx]
    a = np.array([p.accel for p in phases])[idx]
    tau = times - starts[idx]
    distance = d0 - (v0 * tau + 0.5 * a * tau * tau)
    speed = v0 + a * tau
    return distance, speed, a


def _rate_times(start: float, end: float, rate_hz: float) -> np.ndarray:
    count = int(np.floor((end - start) * rate_hz + 1e-9)) + 1
    return start + np.arange(count) / rate_hz


def generate_truth(config: ScenarioConfig) -> KinematicTrack:
    """Ground-truth kinematics at the truth rate, filled analytically.

    Raises if the configured motion drives the obstacle past the
    crossing point (negative distance) within the duration.
    """
    times = _rate_times(0.0, config.duration, config.truth_rate_hz)
    distance, speed, accel = _truth_state(config, times)
    if np.any(distance < -1e-9):
        raise ValueError("scenario drives the obstacle past the crossing point")
    grid = UniformGrid(start=0.0, rate_hz=config.truth_rate_hz, count=times.size)
    return KinematicTrack(
        grid,
        TimeSeries(times, np.maximum(distance, 0.0)),
        TimeSeries(times, speed),
        TimeSeries(times, accel),
    )


def bbox_width_px(
    distance: float, model: CameraSensorModel, rng: np.random.Generator | None = None
) -> float:
    """Apparent bounding-box width of the obstacle at a given distance.

    Pinhole relation ``width = focal * object_width / distance``, plus
    Gaussian pixel noise when an ``rng`` is supplied.
    """
    if distance <= 0:
        raise ValueError("distance must be positive")
    width = model.focal_px * model.object_width_m / distance
    if rng is not None and model.pixel_noise_sigma > 0:
        width += rng.normal(0.0, model.pixel_noise_sigma)
    return float(width)


def distance_from_bbox(width_px: float, model: CameraSensorModel) -> float:
    """Distance recovered from a bounding-box width; inverse of :func:`bbox_width_px`."""
    if width_px <= 0:
        raise ValueError("width_px must be positive")
    return float(model.focal_px * model.object_width_m / width_px)


def sample_sensor(
    truth: KinematicTrack,
    model: SensorModel,
    rate_hz: float,
    seed: int | np.random.SeedSequence = 0,
) -> TimeSeries:
    """Degrade the true distance into one sensor's measurement stream.

    The sensor samples the truth span at its own rate.  A range sensor
    always reports; a camera reports only while the obstacle is within
    its detection range, measuring through a noisy bounding-box width.
    """
    if rate_hz <= 0:
        raise ValueError("rate_hz must be positive")
    t0, t1 = truth.distance.span
    times = _rate_times(t0, t1, rate_hz)
    true_d = np.interp(times, truth.distance.times, truth.distance.values)
    rng = np.random.default_rng(seed)

    if isinstance(model, RangeSensorModel):
        values = true_d.copy()
        if model.relative_noise > 0:
            values *= 1.0 + rng.normal(0.0, model.relative_noise / 2.0, times.size)
        return TimeSeries(times, values)

    detected = (true_d > 0.0) & (true_d <= model.detection_range)
    widths = np.full(times.size, np.nan)
    widths[detected] = model.focal_px * model.object_width_m / true_d[detected]
    if model.pixel_noise_sigma > 0:
        widths += rng.normal(0.0, model.pixel_noise_sigma, times.size)
    values = np.full(times.size, np.nan)
    with np.errstate(invalid="ignore"):
        measurable = detected & (widths > 0.0)
    values[measurable] = model.focal_px * model.object_width_m / widths[measurable]
    return TimeSeries(times, values)


def default_sensor_models() -> dict[str, SensorModel]:
    return {
        RSU: RangeSensorModel(),
        CAMERA_AW: CameraSensorModel(),
        CAMERA_DRONE: CameraSensorModel(),
    }


@dataclass(frozen=True)
class SimulatedRun:
    """Everything a synthetic run produces.

    ``raw_streams`` are the per-sensor measurement series before any
    processing (what a recording would contain); ``sensors`` is the
    processed sensor set on the shared grid; ``truth_track`` carries the
    closed-form kinematics evaluated on that same grid, and
    ``truth_decisions`` the decision stream derived from it.
    """

    config: ScenarioConfig
    raw_streams: dict[str, TimeSeries]
    sensors: SensorSet
    truth_track: KinematicTrack
    truth_decisions: tuple[Decision, ...]


def generate_run(
    config: ScenarioConfig,
    models: dict[str, SensorModel] | None = None,
    run_config: RunConfig | None = None,
) -> SimulatedRun:
    """Simulate one run and push it through the full processing pipeline.

    Per-sensor seeds are spawned deterministically from the scenario
    seed, so identical inputs give bit-identical outputs.
    """
    models = {**default_sensor_models(), **(models or {})}
    cfg = RunConfig() if run_config is None else run_config
    truth = generate_truth(config)

    children = np.random.SeedSequence(config.seed).spawn(len(SENSOR_RATE_KEYS))
    raw: dict[str, TimeSeries] = {}
    for (sensor_id, rate_attr), child in zip(SENSOR_RATE_KEYS, children):
        raw[sensor_id] = sample_sensor(
            truth, models[sensor_id], getattr(config, rate_attr), child
        )
    raw[TRACKER] = truth.distance

    sensors = sensor_set_from_streams(
        raw,
        resample_hz=cfg.resample_hz,
        smooth_window_rsu=cfg.smooth_window_rsu,
        smooth_window_camera=cfg.smooth_window_camera,
        derivative_smooth_window=cfg.smooth_window_derivative,
        max_gap=cfg.max_gap_s,
    )
    grid = sensors.grid

    grid_times = grid.times()
    td, tv, ta = _truth_state(config, grid_times)
    truth_track = KinematicTrack(
        grid,
        TimeSeries(grid_times, np.maximum(td, 0.0)),
        TimeSeries(grid_times, tv),
        TimeSeries(grid_times, ta),
    )
    truth_g = danger_series(truth_track, cfg.danger)
    return SimulatedRun(
        config=config,
        raw_streams=raw,
        sensors=sensors,
        truth_track=truth_track,
        truth_decisions=decisions_from_series(truth_g, cfg.danger),
    )


_SCENARIO_KEYS = {
    "duration",
    "initial_distance",
    "initial_speed",
    "segments",
    "truth_rate_hz",
    "rsu_rate_hz",
    "camera_rate_hz",
    "seed",
    "sensors",
}


def _camera_from_dict(data: dict, sensor_id: str) -> CameraSensorModel:
    kwargs = dict(data)
    if kwargs.get("detection_range") is None and "detection_range" in kwargs:
        kwargs["detection_range"] = math.inf  # null means unlimited range
    try:
        return CameraSensorModel(**kwargs)
    except TypeError as exc:
        raise ValueError(f"scenario field sensors.{sensor_id}: {exc}") from exc


def scenario_from_dict(data: dict) -> tuple[ScenarioConfig, dict[str, SensorModel]]:
    """Parse a scenario JSON object into a config plus sensor models.

    Errors identify the offending field.  The optional ``sensors`` block
    overrides per-sensor model parameters; a camera ``detection_range``
    of ``null`` means unlimited range.
    """
    if not isinstance(data, dict):
        raise ValueError("scenario must be a JSON object")
    unknown = set(data) - _SCENARIO_KEYS
    if unknown:
        raise ValueError(f"unknown scenario fields: {sorted(unknown)}")
    data = dict(data)
    sensors_block = data.pop("sensors", {})
    if not isinstance(sensors_block, dict):
        raise ValueError("scenario field sensors: must be an object")
    segments = data.get("segments", [])
    if not isinstance(segments, list) or any(
        not isinstance(seg, (list, tuple)) or len(seg) != 2 for seg in segments
    ):
        raise ValueError("scenario field segments: must be a list of [duration, accel] pairs")
    data["segments"] = tuple((float(d), float(a)) for d, a in segments)
    try:
        config = ScenarioConfig(**data)
    except TypeError as exc:
        raise ValueError(f"scenario: {exc}") from exc
    except ValueError as exc:
        raise ValueError(f"scenario: {exc}") from exc

    models = default_sensor_models()
    for sensor_id, params in sensors_block.items():
        if sensor_id not in models:
            raise ValueError(f"scenario field sensors.{sensor_id}: unknown sensor id")
        if not isinstance(params, dict):
            raise ValueError(f"scenario field sensors.{sensor_id}: must be an object")
        if sensor_id == RSU:
            try:
                models[sensor_id] = RangeSensorModel(**params)
            except TypeError as exc:
                raise ValueError(f"scenario field sensors.{sensor_id}: {exc}") from exc
        else:
            models[sensor_id] = _camera_from_dict(params, sensor_id)
    return config, models


def load_scenario(path) -> tuple[ScenarioConfig, dict[str, SensorModel]]:
    """Read a scenario description from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    try:
        return scenario_from_dict(data)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from exc
