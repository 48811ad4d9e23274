"""Shared test helpers."""

from __future__ import annotations

import numpy as np
import pytest

from crossrisk import KinematicTrack, TimeSeries, UniformGrid, differentiate


def series_on_grid(values, rate_hz: float = 100.0, start: float = 0.0) -> TimeSeries:
    """Series with the given values on a uniform grid (NaN = missing)."""
    values = np.asarray(values, dtype=float)
    times = start + np.arange(values.size) / rate_hz
    return TimeSeries(times, values)


def track_from_distances(
    values, rate_hz: float = 100.0, smooth_window: int = 1
) -> KinematicTrack:
    """Kinematic track differentiated from raw distance values."""
    values = np.asarray(values, dtype=float)
    grid = UniformGrid(start=0.0, rate_hz=rate_hz, count=values.size)
    return differentiate(series_on_grid(values, rate_hz), grid, smooth_window=smooth_window)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(181181)
