"""Evaluation of prediction streams against the tracker ground truth.

Continuous danger scores are compared by RMSE over the instants where
both streams carry a value; decision streams are compared by confusion
counts with DANGEROUS as the positive class, excluding instants where
either side is UNKNOWN.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import numpy as np

from .danger import DangerParams, Decision, danger_series, decisions_from_series
from .fusion import CAMERA_AW, CAMERA_DRONE, RSU, FusionTrace, SensorSet
from .timeseries import TimeSeries

DISTANCE_FUSION = "distance_fusion"
DANGER_FUSION = "danger_fusion"
VOTING_FUSION = "voting_fusion"
EVALUATION_SOURCES = (
    RSU,
    CAMERA_AW,
    CAMERA_DRONE,
    DISTANCE_FUSION,
    DANGER_FUSION,
    VOTING_FUSION,
)


class InsufficientDataError(ValueError):
    """Raised when a comparison has no jointly defined points."""


@dataclass(frozen=True)
class EvaluationReport:
    """Error and classification metrics of one prediction stream.

    ``rmse`` is None for binary-only sources (voting), which produce no
    continuous score.  ``precision_defaulted`` / ``recall_defaulted``
    flag the degenerate denominators reported as 1.0 (no dangerous
    predictions made, resp. no dangerous truth present).
    """

    rmse: float | None
    accuracy: float
    precision: float
    recall: float
    tp: int
    fp: int
    tn: int
    fn: int
    evaluated_points: int
    excluded_points: int
    precision_defaulted: bool = False
    recall_defaulted: bool = False


def rmse(predicted: TimeSeries, truth: TimeSeries) -> float:
    """Root mean square difference over jointly present instants."""
    if len(predicted) != len(truth) or not np.array_equal(predicted.times, truth.times):
        raise ValueError("series must share the same grid")
    both = predicted.present & truth.present
    if not np.any(both):
        raise InsufficientDataError("no jointly present points")
    diff = predicted.values[both] - truth.values[both]
    return float(np.sqrt(np.mean(diff * diff)))


def classification_report(
    predicted: Sequence[Decision],
    truth: Sequence[Decision],
    unknown_as_safe: bool = False,
) -> EvaluationReport:
    """Confusion-derived metrics with DANGEROUS as the positive class.

    Instants where either stream is UNKNOWN are excluded from the counts
    (and tallied in ``excluded_points``); with ``unknown_as_safe`` an
    UNKNOWN prediction is instead counted as a SAFE call, while UNKNOWN
    truth is always excluded.
    """
    if len(predicted) != len(truth):
        raise ValueError("decision streams must have equal length")
    tp = fp = tn = fn = excluded = 0
    for p, t in zip(predicted, truth):
        if t is Decision.UNKNOWN:
            excluded += 1
            continue
        if p is Decision.UNKNOWN:
            if not unknown_as_safe:
                excluded += 1
                continue
            p = Decision.SAFE
        if t is Decision.DANGEROUS:
            if p is Decision.DANGEROUS:
                tp += 1
            else:
                fn += 1
        else:
            if p is Decision.DANGEROUS:
                fp += 1
            else:
                tn += 1
    evaluated = tp + fp + tn + fn
    if evaluated == 0:
        raise InsufficientDataError("no jointly classified points")
    precision_defaulted = (tp + fp) == 0
    recall_defaulted = (tp + fn) == 0
    return EvaluationReport(
        rmse=None,
        accuracy=(tp + tn) / evaluated,
        precision=1.0 if precision_defaulted else tp / (tp + fp),
        recall=1.0 if recall_defaulted else tp / (tp + fn),
        tp=tp,
        fp=fp,
        tn=tn,
        fn=fn,
        evaluated_points=evaluated,
        excluded_points=excluded,
        precision_defaulted=precision_defaulted,
        recall_defaulted=recall_defaulted,
    )


def evaluate_source(
    predicted_g: TimeSeries | None,
    predicted_decisions: Sequence[Decision],
    truth_g: TimeSeries,
    truth_decisions: Sequence[Decision],
    unknown_as_safe: bool = False,
) -> EvaluationReport:
    """Full report for one prediction source; ``predicted_g=None`` skips RMSE."""
    report = classification_report(predicted_decisions, truth_decisions, unknown_as_safe)
    if predicted_g is None:
        return report
    return replace(report, rmse=rmse(predicted_g, truth_g))


def evaluate_run(
    sensors: SensorSet,
    trace: FusionTrace,
    params: DangerParams = DangerParams(),
    unknown_as_safe: bool = False,
) -> Mapping[str, EvaluationReport]:
    """Evaluate every sensor and fusion architecture against the tracker.

    Raises
    ------
    ValueError
        If the sensor set carries no tracker track.
    InsufficientDataError
        Propagated when any source never overlaps the truth; callers
        needing per-source isolation should evaluate sources one by one
        via :func:`evaluate_source`.
    """
    tracker = sensors.tracker()
    if tracker is None:
        raise ValueError("sensor set has no tracker track to evaluate against")
    truth_g = danger_series(tracker, params)
    truth_decisions = decisions_from_series(truth_g, params)

    reports: dict[str, EvaluationReport] = {}
    for sensor_id, track in sensors.fusable().items():
        g = danger_series(track, params)
        reports[sensor_id] = evaluate_source(
            g, decisions_from_series(g, params), truth_g, truth_decisions, unknown_as_safe
        )
    reports[DISTANCE_FUSION] = evaluate_source(
        trace.g_distance_fusion,
        trace.decision_distance,
        truth_g,
        truth_decisions,
        unknown_as_safe,
    )
    reports[DANGER_FUSION] = evaluate_source(
        trace.g_danger_fusion,
        trace.decision_danger,
        truth_g,
        truth_decisions,
        unknown_as_safe,
    )
    reports[VOTING_FUSION] = evaluate_source(
        None, trace.decision_vote, truth_g, truth_decisions, unknown_as_safe
    )
    return reports
