"""On-disk formats: sensor recordings, fused traces, reports, plot data.

All numeric fields are serialized with six fractional digits and plain
``\\n`` line endings so identical inputs always produce byte-identical
files.  Empty CSV fields mean "missing".
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .fusion import CAMERA_AW, CAMERA_DRONE, RSU, TRACKER, FusionTrace
from .metrics import (
    DANGER_FUSION,
    DISTANCE_FUSION,
    EVALUATION_SOURCES,
    VOTING_FUSION,
    EvaluationReport,
)
from .timeseries import TimeSeries


class SensorCsvError(ValueError):
    """Malformed sensor recording: bad header, numerics or timestamps."""


SENSOR_COLUMNS = (
    ("distance_range", RSU),
    ("distance_wheelchair", CAMERA_AW),
    ("distance_drone", CAMERA_DRONE),
    ("distance_tracker", TRACKER),
)
_REQUIRED_HEADER = ["timestamp", "distance_range", "distance_wheelchair", "distance_drone"]

FUSED_HEADER = [
    "timestamp",
    "g_rsu",
    "g_cam_aw",
    "g_cam_drone",
    "g_tracker",
    "distance_fused",
    "g_distance_fusion",
    "g_danger_fusion",
    "vote",
    "decision_distance",
    "decision_danger",
    "decision_vote",
]

TABLE_LABELS = {
    RSU: "Range sensors",
    CAMERA_AW: "AW camera",
    CAMERA_DRONE: "Drone camera",
    DISTANCE_FUSION: "Distance fusion",
    DANGER_FUSION: "Danger fusion",
    VOTING_FUSION: "Voting fusion",
}


def _fmt(value: float) -> str:
    return "" if value is None or math.isnan(value) else f"{value:.6f}"


def _parse_float(text: str, row: int, column: str) -> float:
    if text == "":
        return math.nan
    try:
        value = float(text)
    except ValueError as exc:
        raise SensorCsvError(f"row {row}: column {column!r}: not a number: {text!r}") from exc
    if not math.isfinite(value):
        raise SensorCsvError(f"row {row}: column {column!r}: non-finite value {text!r}")
    return value


def read_sensor_csv(path: str | Path) -> dict[str, TimeSeries]:
    """Read a sensor recording into per-sensor distance streams.

    The header must start with ``timestamp,distance_range,
    distance_wheelchair,distance_drone``; the ``distance_tracker`` column
    is optional (recordings without ground truth can still be fused) and
    any further columns are ignored.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SensorCsvError("empty file") from None
        if [h.strip() for h in header[: len(_REQUIRED_HEADER)]] != _REQUIRED_HEADER:
            raise SensorCsvError(
                f"header must start with {','.join(_REQUIRED_HEADER)!r}, got {','.join(header)!r}"
            )
        has_tracker = len(header) > 4 and header[4].strip() == "distance_tracker"
        n_cols = 5 if has_tracker else 4

        times: list[float] = []
        columns: list[list[float]] = [[] for _ in range(n_cols - 1)]
        for row_no, row in enumerate(reader, start=2):
            if not row or all(cell == "" for cell in row):
                continue
            if len(row) < n_cols:
                raise SensorCsvError(f"row {row_no}: expected at least {n_cols} fields")
            t = _parse_float(row[0], row_no, "timestamp")
            if math.isnan(t):
                raise SensorCsvError(f"row {row_no}: timestamp must not be empty")
            if times and t <= times[-1]:
                raise SensorCsvError(
                    f"row {row_no}: timestamps must be strictly increasing"
                )
            times.append(t)
            for i in range(1, n_cols):
                columns[i - 1].append(_parse_float(row[i], row_no, header[i].strip()))
    if not times:
        raise SensorCsvError("file contains no data rows")

    t_arr = np.array(times)
    streams: dict[str, TimeSeries] = {}
    for (column, sensor_id), values in zip(SENSOR_COLUMNS, columns):
        streams[sensor_id] = TimeSeries(t_arr, np.array(values))
    return streams


def write_sensor_csv(path: str | Path, streams: Mapping[str, TimeSeries]) -> None:
    """Write per-sensor distance streams as one merged recording.

    Streams may be sampled at different rates; rows are the sorted union
    of all sample instants, with empty fields where a sensor has no
    sample (or a missing one) at that instant.
    """
    merged = np.unique(np.concatenate([s.times for s in streams.values()]))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["timestamp"] + [c for c, _ in SENSOR_COLUMNS])
        cells = {}
        for column, sensor_id in SENSOR_COLUMNS:
            col = np.full(merged.size, np.nan)
            stream = streams.get(sensor_id)
            if stream is not None:
                pos = np.searchsorted(merged, stream.times)
                col[pos] = stream.values
            cells[column] = col
        for i, t in enumerate(merged):
            writer.writerow(
                [_fmt(t)] + [_fmt(cells[c][i]) for c, _ in SENSOR_COLUMNS]
            )


def write_fused_csv(
    path: str | Path,
    trace: FusionTrace,
    sensor_g: Mapping[str, TimeSeries | None],
) -> None:
    """Write the per-instant fusion trace.

    ``sensor_g`` maps sensor ids to their danger-score series (``None``
    for a sensor absent from the recording, e.g. no tracker).  The
    ``vote`` column carries the number of DANGEROUS votes among the
    sensors that voted, empty when none did.
    """
    times = trace.grid.times()
    g_cols = []
    for sensor_id in (RSU, CAMERA_AW, CAMERA_DRONE, TRACKER):
        series = sensor_g.get(sensor_id)
        g_cols.append(np.full(times.size, np.nan) if series is None else series.values)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(FUSED_HEADER)
        for i, t in enumerate(times):
            vote = "" if trace.votes_cast[i] == 0 else str(int(trace.dangerous_votes[i]))
            writer.writerow(
                [
                    _fmt(t),
                    _fmt(g_cols[0][i]),
                    _fmt(g_cols[1][i]),
                    _fmt(g_cols[2][i]),
                    _fmt(g_cols[3][i]),
                    _fmt(trace.distance_fused.values[i]),
                    _fmt(trace.g_distance_fusion.values[i]),
                    _fmt(trace.g_danger_fusion.values[i]),
                    vote,
                    str(trace.decision_distance[i]),
                    str(trace.decision_danger[i]),
                    str(trace.decision_vote[i]),
                ]
            )


def read_csv_columns(path: str | Path) -> tuple[list[str], list[list[str]]]:
    """Read any CSV as a header plus string columns (for melting)."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SensorCsvError("empty file") from None
        columns: list[list[str]] = [[] for _ in header]
        for row in reader:
            for i, cell in enumerate(row[: len(header)]):
                columns[i].append(cell)
    return header, columns


def write_plot_csv(
    path: str | Path,
    header: Sequence[str],
    columns: Sequence[Sequence[str]],
    threshold: float | None = None,
) -> None:
    """Melt a wide trace into long ``timestamp,series,value`` rows.

    Only numeric columns are emitted (decision labels are not plottable
    values); when ``threshold`` is given and the input carries danger
    scores, a constant ``g_star`` series is appended as the reference
    line.
    """
    if not header or header[0] != "timestamp":
        raise SensorCsvError("plot input must have a leading timestamp column")
    timestamps = columns[0] if columns else []
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["timestamp", "series", "value"])
        numeric_series = []
        for name, column in zip(header[1:], columns[1:]):
            if all(_is_numeric_or_empty(cell) for cell in column):
                numeric_series.append(name)
                for t, cell in zip(timestamps, column):
                    if cell != "":
                        writer.writerow([t, name, cell])
        has_scores = any(name.startswith("g_") or name.startswith("danger") for name in numeric_series)
        if threshold is not None and has_scores:
            for t in timestamps:
                writer.writerow([t, "g_star", f"{threshold:.6f}"])


def _is_numeric_or_empty(cell: str) -> bool:
    if cell == "":
        return True
    try:
        float(cell)
    except ValueError:
        return False
    return True


def report_to_dict(source: str, report: EvaluationReport | None) -> dict:
    """JSON-ready representation of one evaluation row."""
    if report is None:
        return {"source": source, "error": "insufficient data"}
    return {
        "source": source,
        "rmse": None if report.rmse is None else round(report.rmse, 6),
        "accuracy": round(report.accuracy, 6),
        "precision": round(report.precision, 6),
        "recall": round(report.recall, 6),
        "tp": report.tp,
        "fp": report.fp,
        "tn": report.tn,
        "fn": report.fn,
        "evaluated_points": report.evaluated_points,
        "excluded_points": report.excluded_points,
    }


def reports_to_json(reports: Mapping[str, EvaluationReport | None]) -> str:
    """Serialize evaluation rows in canonical source order."""
    rows = [
        report_to_dict(source, reports[source])
        for source in EVALUATION_SOURCES
        if source in reports
    ]
    return json.dumps(rows, indent=2) + "\n"


def reports_to_table(reports: Mapping[str, EvaluationReport | None]) -> str:
    """Aligned text table with one row per sensor/fusion source."""
    rows = [("Source/Fusion", "RMSE", "Accuracy", "Recall", "Precision")]
    for source in EVALUATION_SOURCES:
        if source not in reports:
            continue
        report = reports[source]
        label = TABLE_LABELS[source]
        if report is None:
            rows.append((label, "-", "insufficient", "-", "-"))
            continue
        rows.append(
            (
                label,
                "-" if report.rmse is None else f"{report.rmse:.3f}",
                f"{report.accuracy:.2f}",
                f"{report.recall:.2f}",
                f"{report.precision:.2f}",
            )
        )
    widths = [max(len(row[i]) for row in rows) for i in range(5)]
    lines = []
    for row in rows:
        cells = [row[0].ljust(widths[0])] + [
            row[i].rjust(widths[i]) for i in range(1, 5)
        ]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"
