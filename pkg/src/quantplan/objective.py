"""Feasibility, normalization, scalarization, and assignment evaluation.

All functions here are pure.  Accuracy and latency sums are accumulated
left to right in pipeline model order, so every code path that evaluates
the same assignment produces bit-identical floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .domain import Assignment, ModelProfile, PipelineProfile, ObjectiveVector, Thresholds

__all__ = [
    "NormalizedPoint",
    "min_max_normalize",
    "feasible_levels",
    "model_score",
    "objective_of",
    "pipeline_accuracy",
    "pipeline_accuracy_all",
    "speedup",
]


@dataclass(frozen=True)
class NormalizedPoint:
    """A measurement rescaled to [0, 1] within its own model's columns."""

    norm_accuracy: float
    norm_latency: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.norm_accuracy <= 1.0 and 0.0 <= self.norm_latency <= 1.0):
            raise ValueError("normalized components must be in [0, 1]")


def min_max_normalize(values: "list[float]") -> "list[float]":
    """Rescale a series to [0, 1]: (v - min) / (max - min).

    A constant series (max == min) maps to all zeros, so a degenerate
    column contributes no preference.
    """
    if len(values) == 0:
        raise ValueError("empty series")
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"non-finite value {v!r}")
    lo = min(values)
    hi = max(values)
    span = hi - lo
    if span == 0.0:
        return [0.0 for _ in values]
    return [(v - lo) / span for v in values]


def normalized_points(profile: ModelProfile) -> "dict[str, NormalizedPoint]":
    """Per-level normalized accuracy/latency for one model, normalized
    across that model's measured levels only."""
    names = list(profile.points)
    norm_acc = min_max_normalize([profile.points[n].accuracy for n in names])
    norm_lat = min_max_normalize([profile.points[n].latency_ms for n in names])
    return {
        n: NormalizedPoint(norm_accuracy=a, norm_latency=l)
        for n, a, l in zip(names, norm_acc, norm_lat)
    }


def feasible_levels(profile: ModelProfile, t: Thresholds | None) -> "set[str]":
    """Levels a model may legally use.

    Without thresholds every measured level qualifies.  With thresholds a
    level qualifies when it satisfies the accuracy floor OR the latency
    ceiling; the constraint is a disjunction, not a conjunction.  An empty
    result is legal here; solvers treat it as infeasibility.
    """
    if t is None:
        return set(profile.points)
    return {
        name
        for name, p in profile.points.items()
        if p.accuracy >= t.min_accuracy or p.latency_ms <= t.max_latency_ms
    }


def model_score(profile: ModelProfile, level: str, lam: float) -> float:
    """Weighted-sum score of one level for one model; lower is better.

    ``lam`` = 0 rewards accuracy only, ``lam`` = 1 penalizes latency only.
    Both columns are min-max normalized per model so the weight is
    scale-free.
    """
    if not (0.0 <= lam <= 1.0):
        raise ValueError(f"lambda must be in [0, 1], got {lam}")
    if level not in profile.points:
        raise ValueError(f"unmeasured level {level!r} for model {profile.model_id!r}")
    norms = normalized_points(profile)[level]
    return lam * norms.norm_latency - (1.0 - lam) * norms.norm_accuracy


def objective_of(assignment: Assignment, pipeline: PipelineProfile) -> ObjectiveVector:
    """Accuracy sum and latency sum of an assignment over the pipeline."""
    assignment.validate_for(pipeline)
    accuracy_sum = 0.0
    latency_sum = 0.0
    for m in pipeline.models:
        point = m.point(assignment.choices[m.model_id])
        accuracy_sum += point.accuracy
        latency_sum += point.latency_ms
    return ObjectiveVector(accuracy_sum=accuracy_sum, latency_sum_ms=latency_sum)


def _composed_accuracy(values: "list[float]", mode: str) -> float:
    if mode == "product":
        out = 1.0
        for v in values:
            out *= v
        return out
    if mode == "min":
        return min(values)
    if mode == "mean":
        return sum(values) / len(values)
    raise ValueError(f"unknown accuracy composition {mode!r}")


def pipeline_accuracy(
    assignment: Assignment, pipeline: PipelineProfile, mode: str | None = None
) -> float:
    """End-to-end accuracy under the pipeline's composition rule (or an
    explicit ``mode`` override)."""
    assignment.validate_for(pipeline)
    values = [m.point(assignment.choices[m.model_id]).accuracy for m in pipeline.models]
    return _composed_accuracy(values, mode or pipeline.accuracy_composition)


def pipeline_accuracy_all(
    assignment: Assignment, pipeline: PipelineProfile
) -> "dict[str, float]":
    """End-to-end accuracy under every composition rule, for reports."""
    assignment.validate_for(pipeline)
    values = [m.point(assignment.choices[m.model_id]).accuracy for m in pipeline.models]
    return {mode: _composed_accuracy(values, mode) for mode in ("product", "min", "mean")}


def speedup(baseline_latency_ms: float, quantized_latency_ms: float) -> float:
    """How many times faster the quantized pipeline runs than the baseline."""
    if not (baseline_latency_ms > 0.0):
        raise ValueError(f"baseline latency must be positive, got {baseline_latency_ms}")
    if not (quantized_latency_ms > 0.0):
        raise ValueError(f"quantized latency must be positive, got {quantized_latency_ms}")
    return baseline_latency_ms / quantized_latency_ms
