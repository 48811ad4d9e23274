"""Timestamped scalar streams with first-class missing values.

A :class:`TimeSeries` carries one sensor channel: strictly increasing
timestamps plus one value per timestamp, where NaN marks an instant at
which the sensor produced nothing.  All downstream stages (smoothing,
resampling, differentiation, fusion) consume and return this type, so
availability information survives the whole pipeline.

Operations are pure: they never mutate their inputs and are safe to call
concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class EmptyOverlapError(ValueError):
    """Raised when a resampling grid does not intersect the series span."""


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class TimeSeries:
    """One channel of timestamped readings.

    Parameters
    ----------
    times : ndarray of float
        Sample instants in seconds, strictly increasing, all finite.
    values : ndarray of float
        One reading per instant; NaN marks a missing reading.  Infinite
        values are rejected.
    """

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        times = _readonly(np.atleast_1d(self.times))
        values = _readonly(np.atleast_1d(self.values))
        if times.ndim != 1 or values.ndim != 1:
            raise ValueError("times and values must be one-dimensional")
        if times.size != values.size:
            raise ValueError("times and values must have equal length")
        if times.size and not np.all(np.isfinite(times)):
            raise ValueError("timestamps must be finite")
        if times.size > 1 and not np.all(np.diff(times) > 0):
            raise ValueError("timestamps must be strictly increasing")
        if np.any(np.isinf(values)):
            raise ValueError("values must not be infinite")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float | None]]) -> "TimeSeries":
        """Build a series from ``(timestamp, value-or-None)`` pairs.

        ``None`` marks a missing reading.  An explicit NaN value is
        rejected: missing readings must be expressed as ``None``.
        """
        pairs = list(pairs)
        if not pairs:
            raise ValueError("at least one sample is required")
        times = np.array([t for t, _ in pairs], dtype=float)
        values = np.empty(len(pairs), dtype=float)
        for i, (_, v) in enumerate(pairs):
            if v is None:
                values[i] = np.nan
            elif isinstance(v, float) and np.isnan(v):
                raise ValueError("use None for missing values, not NaN")
            else:
                values[i] = float(v)
        return cls(times, values)

    def __len__(self) -> int:
        return int(self.times.size)

    @property
    def present(self) -> np.ndarray:
        """Boolean mask of instants with an actual reading."""
        return ~np.isnan(self.values)

    @property
    def span(self) -> tuple[float, float]:
        """First and last timestamp of the series."""
        return float(self.times[0]), float(self.times[-1])

    def present_count(self) -> int:
        return int(np.count_nonzero(self.present))

    def with_values(self, values: np.ndarray) -> "TimeSeries":
        """Same timestamps, new values."""
        return TimeSeries(self.times, values)


@dataclass(frozen=True)
class UniformGrid:
    """Uniform sampling grid: ``count`` instants from ``start`` at ``rate_hz``."""

    start: float
    rate_hz: float = 100.0
    count: int = 1

    def __post_init__(self) -> None:
        if not np.isfinite(self.start):
            raise ValueError("grid start must be finite")
        if self.rate_hz <= 0:
            raise ValueError("rate_hz must be positive")
        if self.count < 1:
            raise ValueError("count must be at least 1")

    @property
    def step(self) -> float:
        return 1.0 / self.rate_hz

    @property
    def end(self) -> float:
        return self.start + (self.count - 1) / self.rate_hz

    def times(self) -> np.ndarray:
        return self.start + np.arange(self.count) / self.rate_hz


def smooth_trailing(series: TimeSeries, window: int) -> TimeSeries:
    """Causal moving average over the most recent present readings.

    The output at instant ``i`` is the arithmetic mean of the last
    ``window`` present readings up to and including ``i`` (fewer while the
    window is still filling).  Missing instants stay missing and do not
    consume window slots, so the filter keeps working across dropouts.

    Parameters
    ----------
    series : TimeSeries
        Input channel.
    window : int
        Number of readings averaged; ``window=1`` is the identity.
    """
    if window < 1:
        raise ValueError("window must be at least 1")
    present = series.present
    out = np.full(len(series), np.nan)
    pv = series.values[present]
    if pv.size:
        sums = pv.copy()
        for k in range(1, min(window, pv.size)):
            sums[k:] += pv[: pv.size - k]
        counts = np.minimum(np.arange(1, pv.size + 1), window)
        out[present] = sums / counts
    return series.with_values(out)


def resample(series: TimeSeries, grid: UniformGrid, max_gap: float = 0.5) -> TimeSeries:
    """Linearly interpolate a series onto a uniform grid.

    Grid instants before the first present reading, after the last one,
    or falling inside a gap between present readings longer than
    ``max_gap`` seconds are left missing; long gaps are sensor outages
    and must not be bridged with fabricated values.

    Raises
    ------
    EmptyOverlapError
        If the grid does not intersect the series' time span at all.
    """
    if max_gap <= 0:
        raise ValueError("max_gap must be positive")
    t0, t1 = series.span
    if grid.end < t0 or grid.start > t1:
        raise EmptyOverlapError(
            f"grid [{grid.start}, {grid.end}] does not overlap series span [{t0}, {t1}]"
        )
    target = grid.times()
    out = np.full(grid.count, np.nan)
    present = series.present
    tp = series.times[present]
    vp = series.values[present]
    if tp.size == 0:
        return TimeSeries(target, out)

    idx = np.searchsorted(tp, target, side="left")
    exact = (idx < tp.size) & (tp[np.minimum(idx, tp.size - 1)] == target)
    out[exact] = vp[idx[exact]]

    interior = (idx > 0) & (idx < tp.size) & ~exact
    if np.any(interior):
        left = idx[interior] - 1
        right = idx[interior]
        gap = tp[right] - tp[left]
        ok = gap <= max_gap
        sel = np.flatnonzero(interior)[ok]
        lo, hi = left[ok], right[ok]
        w = (target[sel] - tp[lo]) / (tp[hi] - tp[lo])
        out[sel] = vp[lo] * (1.0 - w) + vp[hi] * w
    return TimeSeries(target, out)


def align(
    series_list: Sequence[TimeSeries], rate_hz: float, max_gap: float = 0.5
) -> tuple[UniformGrid, list[TimeSeries]]:
    """Resample several channels onto one shared grid.

    The grid spans the union of the input time ranges at ``rate_hz``;
    every output series carries identical timestamps, with each channel
    missing outside its own coverage.
    """
    if not series_list:
        raise ValueError("series_list must not be empty")
    if rate_hz <= 0:
        raise ValueError("rate_hz must be positive")
    start = min(s.span[0] for s in series_list)
    end = max(s.span[1] for s in series_list)
    count = int(np.floor((end - start) * rate_hz + 1e-9)) + 1
    grid = UniformGrid(start=start, rate_hz=rate_hz, count=count)
    return grid, [resample(s, grid, max_gap=max_gap) for s in series_list]
