"""Profile document parsing and deterministic emission.

The on-disk profile is a single JSON document:

    {
      "pipeline":  {"name": str, "models": [id, ...],
                    "accuracy_composition"?: "product"|"min"|"mean",
                    "baseline_latency_ms"?: number, "description"?: str},
      "levels":    [{"name": str, "bits": int}, ...],
      "profiles":  [{"model": id, "measurements":
                      [{"level": str, "accuracy": number,
                        "latency_ms": number, "size_kb"?: number}, ...]}, ...],
      "thresholds"?: [{"model": id, "min_accuracy": number,
                       "max_latency_ms": number}, ...]
    }

Unknown fields are rejected so a misspelled constraint cannot silently
vanish.  All emitters are pure byte transformations: identical inputs
produce identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Mapping

from ._text import format_real
from .domain import (
    Assignment,
    LevelSet,
    MeasuredPoint,
    ModelProfile,
    ParetoFront,
    PipelineProfile,
    QuantLevel,
    Thresholds,
    COMPOSITIONS,
)
from .objective import feasible_levels, min_max_normalize, pipeline_accuracy, pipeline_accuracy_all, speedup
from .solver import SolveResult

__all__ = [
    "ProfileError",
    "PlanReport",
    "ReportRow",
    "parse_profile",
    "emit_profile",
    "emit_pareto_csv",
    "emit_scatter_svg",
    "emit_report",
    "build_report",
    "assignment_to_string",
]

# Characters that would make the flat serializations ambiguous.
_FORBIDDEN_IN_IDENTIFIERS = set(",;=") | {chr(c) for c in range(0x20)} | {"\x7f"}


class ProfileError(ValueError):
    """A profile document failed to parse or validate."""


def _check_identifier(value: str, where: str) -> str:
    if not value:
        raise ProfileError(f"empty identifier in {where}")
    bad = sorted(set(value) & _FORBIDDEN_IN_IDENTIFIERS)
    if bad:
        raise ProfileError(f"invalid identifier {value!r} in {where}: may not contain {bad}")
    return value


def _as_object(value: Any, where: str) -> "dict[str, Any]":
    if not isinstance(value, dict):
        raise ProfileError(f"{where} must be an object")
    return value


def _as_list(value: Any, where: str) -> "list[Any]":
    if not isinstance(value, list):
        raise ProfileError(f"{where} must be an array")
    return value


def _as_string(value: Any, where: str) -> str:
    if not isinstance(value, str):
        raise ProfileError(f"{where} must be a string")
    return value


def _as_number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ProfileError(f"{where} must be a number")
    out = float(value)
    if out != out or out in (float("inf"), float("-inf")):
        raise ProfileError(f"{where} must be finite")
    return out


def _as_int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ProfileError(f"{where} must be an integer")
    return value


def _reject_unknown(obj: "dict[str, Any]", allowed: "set[str]", where: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ProfileError(f"unknown field {unknown[0]!r} in {where}")


def parse_profile(text: bytes) -> PipelineProfile:
    """Parse and validate a profile document into a PipelineProfile."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProfileError(f"parse error at {exc.lineno}:{exc.colno}") from exc
    except UnicodeDecodeError as exc:
        raise ProfileError(f"parse error at byte {exc.start}: not valid UTF-8") from exc

    doc = _as_object(doc, "document root")
    _reject_unknown(doc, {"pipeline", "levels", "profiles", "thresholds"}, "document root")
    for key in ("pipeline", "levels", "profiles"):
        if key not in doc:
            raise ProfileError(f"missing required field {key!r} in document root")

    pipe = _as_object(doc["pipeline"], "pipeline")
    _reject_unknown(
        pipe,
        {"name", "models", "accuracy_composition", "baseline_latency_ms", "description"},
        "pipeline",
    )
    for key in ("name", "models"):
        if key not in pipe:
            raise ProfileError(f"missing required field {key!r} in pipeline")
    name = _as_string(pipe["name"], "pipeline.name")
    model_ids = [
        _check_identifier(_as_string(v, "pipeline.models[]"), "pipeline.models")
        for v in _as_list(pipe["models"], "pipeline.models")
    ]
    if not model_ids:
        raise ProfileError("pipeline.models must be nonempty")
    seen: set[str] = set()
    for mid in model_ids:
        if mid in seen:
            raise ProfileError(f"duplicate {mid}")
        seen.add(mid)
    composition = pipe.get("accuracy_composition", "product")
    if composition not in COMPOSITIONS:
        raise ProfileError(
            f"accuracy_composition must be one of {list(COMPOSITIONS)}, got {composition!r}"
        )
    baseline = None
    if "baseline_latency_ms" in pipe:
        baseline = _as_number(pipe["baseline_latency_ms"], "pipeline.baseline_latency_ms")
        if not baseline > 0:
            raise ProfileError("pipeline.baseline_latency_ms must be positive")
    description = None
    if "description" in pipe:
        description = _as_string(pipe["description"], "pipeline.description")

    level_entries = _as_list(doc["levels"], "levels")
    if not level_entries:
        raise ProfileError("levels must be nonempty")
    levels: list[QuantLevel] = []
    seen_levels: set[str] = set()
    seen_bits: set[int] = set()
    for i, raw in enumerate(level_entries):
        obj = _as_object(raw, f"levels[{i}]")
        _reject_unknown(obj, {"name", "bits"}, f"levels[{i}]")
        for key in ("name", "bits"):
            if key not in obj:
                raise ProfileError(f"missing required field {key!r} in levels[{i}]")
        lname = _check_identifier(_as_string(obj["name"], f"levels[{i}].name"), "levels")
        bits = _as_int(obj["bits"], f"levels[{i}].bits")
        if bits < 1:
            raise ProfileError(f"bits must be >= 1 for level {lname}")
        if lname in seen_levels:
            raise ProfileError(f"duplicate {lname}")
        if bits in seen_bits:
            raise ProfileError(f"duplicate bit-width {bits} (level {lname})")
        seen_levels.add(lname)
        seen_bits.add(bits)
        levels.append(QuantLevel(lname, bits))
    level_set = LevelSet(tuple(levels))

    profile_entries = _as_list(doc["profiles"], "profiles")
    profiles_by_model: dict[str, ModelProfile] = {}
    for i, raw in enumerate(profile_entries):
        obj = _as_object(raw, f"profiles[{i}]")
        _reject_unknown(obj, {"model", "measurements"}, f"profiles[{i}]")
        for key in ("model", "measurements"):
            if key not in obj:
                raise ProfileError(f"missing required field {key!r} in profiles[{i}]")
        mid = _as_string(obj["model"], f"profiles[{i}].model")
        if mid not in seen:
            raise ProfileError(f"profile for unknown model {mid}")
        if mid in profiles_by_model:
            raise ProfileError(f"duplicate {mid}")
        measurements = _as_list(obj["measurements"], f"profiles[{i}].measurements")
        if not measurements:
            raise ProfileError(f"model {mid} has no measurements")
        points: dict[str, MeasuredPoint] = {}
        for j, m_raw in enumerate(measurements):
            where = f"profiles[{i}].measurements[{j}]"
            m_obj = _as_object(m_raw, where)
            _reject_unknown(m_obj, {"level", "accuracy", "latency_ms", "size_kb"}, where)
            for key in ("level", "accuracy", "latency_ms"):
                if key not in m_obj:
                    raise ProfileError(f"missing required field {key!r} in {where}")
            lname = _as_string(m_obj["level"], f"{where}.level")
            if lname not in level_set:
                raise ProfileError(f"unknown level {lname} for model {mid}")
            if lname in points:
                raise ProfileError(f"duplicate {lname}")
            accuracy = _as_number(m_obj["accuracy"], f"{where}.accuracy")
            if not (0.0 <= accuracy <= 1.0):
                raise ProfileError(f"accuracy out of range for {mid}/{lname}")
            latency = _as_number(m_obj["latency_ms"], f"{where}.latency_ms")
            if not latency > 0:
                raise ProfileError(f"latency must be positive for {mid}/{lname}")
            size_kb = None
            if "size_kb" in m_obj:
                size_kb = _as_number(m_obj["size_kb"], f"{where}.size_kb")
                if not size_kb > 0:
                    raise ProfileError(f"size must be positive for {mid}/{lname}")
            points[lname] = MeasuredPoint(accuracy=accuracy, latency_ms=latency, size_kb=size_kb)
        profiles_by_model[mid] = ModelProfile(model_id=mid, points=points)
    missing = [mid for mid in model_ids if mid not in profiles_by_model]
    if missing:
        raise ProfileError(f"missing profile for model {missing[0]}")

    thresholds: dict[str, Thresholds] = {}
    if "thresholds" in doc:
        for i, raw in enumerate(_as_list(doc["thresholds"], "thresholds")):
            where = f"thresholds[{i}]"
            obj = _as_object(raw, where)
            _reject_unknown(obj, {"model", "min_accuracy", "max_latency_ms"}, where)
            for key in ("model", "min_accuracy", "max_latency_ms"):
                if key not in obj:
                    raise ProfileError(f"missing required field {key!r} in {where}")
            mid = _as_string(obj["model"], f"{where}.model")
            if mid not in seen:
                raise ProfileError(f"unknown model in thresholds: {mid}")
            if mid in thresholds:
                raise ProfileError(f"duplicate {mid}")
            min_accuracy = _as_number(obj["min_accuracy"], f"{where}.min_accuracy")
            if not (0.0 <= min_accuracy <= 1.0):
                raise ProfileError(f"min_accuracy out of range for {mid}")
            max_latency = _as_number(obj["max_latency_ms"], f"{where}.max_latency_ms")
            if not max_latency > 0:
                raise ProfileError(f"max_latency_ms must be positive for {mid}")
            thresholds[mid] = Thresholds(
                model_id=mid, min_accuracy=min_accuracy, max_latency_ms=max_latency
            )

    return PipelineProfile(
        name=name,
        level_set=level_set,
        models=tuple(profiles_by_model[mid] for mid in model_ids),
        thresholds=thresholds,
        accuracy_composition=composition,
        baseline_latency_ms=baseline,
        description=description,
    )


def _canonical_json(doc: Any) -> bytes:
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def emit_profile(pipeline: PipelineProfile) -> bytes:
    """Serialize a pipeline back to the profile schema (normalized order)."""
    pipe: dict[str, Any] = {
        "name": pipeline.name,
        "models": list(pipeline.model_ids()),
        "accuracy_composition": pipeline.accuracy_composition,
    }
    if pipeline.baseline_latency_ms is not None:
        pipe["baseline_latency_ms"] = pipeline.baseline_latency_ms
    if pipeline.description is not None:
        pipe["description"] = pipeline.description
    doc: dict[str, Any] = {
        "pipeline": pipe,
        "levels": [{"name": l.name, "bits": l.bits} for l in pipeline.level_set],
        "profiles": [],
    }
    level_order = pipeline.level_set.names()
    for m in pipeline.models:
        measurements = []
        for lname in level_order:
            if lname not in m.points:
                continue
            p = m.points[lname]
            entry: dict[str, Any] = {
                "level": lname,
                "accuracy": p.accuracy,
                "latency_ms": p.latency_ms,
            }
            if p.size_kb is not None:
                entry["size_kb"] = p.size_kb
            measurements.append(entry)
        doc["profiles"].append({"model": m.model_id, "measurements": measurements})
    if pipeline.thresholds:
        doc["thresholds"] = [
            {
                "model": mid,
                "min_accuracy": t.min_accuracy,
                "max_latency_ms": t.max_latency_ms,
            }
            for mid, t in sorted(pipeline.thresholds.items())
        ]
    return _canonical_json(doc)


def assignment_to_string(assignment: Assignment, pipeline: PipelineProfile) -> str:
    """``model=level`` pairs joined by ``;`` in pipeline model order."""
    return ";".join(f"{mid}={assignment.choices[mid]}" for mid in pipeline.model_ids())


CSV_HEADER = "assignment,accuracy_sum,latency_sum_ms,pipeline_accuracy,pipeline_latency_ms"


def emit_pareto_csv(front: ParetoFront, pipeline: PipelineProfile) -> bytes:
    """Front entries as CSV, one row per entry, latency ascending."""
    if len(front) == 0:
        raise ValueError("empty front")
    lines = [CSV_HEADER]
    for objective, assignment in front:
        lines.append(
            ",".join(
                (
                    assignment_to_string(assignment, pipeline),
                    format_real(objective.accuracy_sum),
                    format_real(objective.latency_sum_ms),
                    format_real(pipeline_accuracy(assignment, pipeline)),
                    format_real(objective.latency_sum_ms),
                )
            )
        )
    return ("\n".join(lines) + "\n").encode("utf-8")


# --- scatter figure -------------------------------------------------------

_SVG_WIDTH = 640
_SVG_HEIGHT = 480
_PLOT = (70.0, 40.0, 450.0, 400.0)  # x, y, width, height
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
_MARKERS = ("circle", "square", "diamond", "triangle", "cross")


def _marker_svg(shape: str, cx: float, cy: float, color: str, css_class: str) -> str:
    x = format_real
    if shape == "circle":
        return f'<circle class="{css_class}" cx="{x(cx)}" cy="{x(cy)}" r="4" fill="{color}"/>'
    if shape == "square":
        return (
            f'<rect class="{css_class}" x="{x(cx - 3.6)}" y="{x(cy - 3.6)}" '
            f'width="7.2" height="7.2" fill="{color}"/>'
        )
    if shape == "diamond":
        d = (
            f"M {x(cx)} {x(cy - 5)} L {x(cx + 5)} {x(cy)} "
            f"L {x(cx)} {x(cy + 5)} L {x(cx - 5)} {x(cy)} Z"
        )
        return f'<path class="{css_class}" d="{d}" fill="{color}"/>'
    if shape == "triangle":
        d = f"M {x(cx)} {x(cy - 4.8)} L {x(cx + 4.4)} {x(cy + 3.8)} L {x(cx - 4.4)} {x(cy + 3.8)} Z"
        return f'<path class="{css_class}" d="{d}" fill="{color}"/>'
    d = (
        f"M {x(cx - 4)} {x(cy)} L {x(cx + 4)} {x(cy)} "
        f"M {x(cx)} {x(cy - 4)} L {x(cx)} {x(cy + 4)}"
    )
    return f'<path class="{css_class}" d="{d}" stroke="{color}" stroke-width="2" fill="none"/>'


def emit_scatter_svg(pipeline: PipelineProfile) -> bytes:
    """Accuracy versus normalized inference speed, one series per model.

    Speed is 1 / latency, min-max normalized within each model, so a
    model's fastest level sits at x = 1 and its slowest at x = 0.
    """
    px, py, pw, ph = _PLOT

    def to_x(v: float) -> float:
        return px + v * pw

    def to_y(v: float) -> float:
        return py + (1.0 - v) * ph

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_WIDTH}" '
        f'height="{_SVG_HEIGHT}" viewBox="0 0 {_SVG_WIDTH} {_SVG_HEIGHT}">',
        f'<rect x="0" y="0" width="{_SVG_WIDTH}" height="{_SVG_HEIGHT}" fill="#ffffff"/>',
        f'<text x="{format_real(px + pw / 2)}" y="22" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{_xml_escape(pipeline.name)}</text>',
    ]
    # Axes, ticks, grid.
    for i in range(6):
        v = i / 5.0
        gx = to_x(v)
        gy = to_y(v)
        parts.append(
            f'<line x1="{format_real(gx)}" y1="{format_real(py)}" x2="{format_real(gx)}" '
            f'y2="{format_real(py + ph)}" stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<line x1="{format_real(px)}" y1="{format_real(gy)}" x2="{format_real(px + pw)}" '
            f'y2="{format_real(gy)}" stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{format_real(gx)}" y="{format_real(py + ph + 18)}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{v:.1f}</text>'
        )
        parts.append(
            f'<text x="{format_real(px - 8)}" y="{format_real(gy + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{v:.1f}</text>'
        )
    parts.append(
        f'<rect x="{format_real(px)}" y="{format_real(py)}" width="{format_real(pw)}" '
        f'height="{format_real(ph)}" fill="none" stroke="#333333" stroke-width="1"/>'
    )
    parts.append(
        f'<text x="{format_real(px + pw / 2)}" y="{format_real(py + ph + 42)}" '
        'text-anchor="middle" font-family="sans-serif" font-size="13">'
        "Inference speed (min-max normalized)</text>"
    )
    parts.append(
        f'<text x="20" y="{format_real(py + ph / 2)}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 20 {format_real(py + ph / 2)})">Accuracy</text>'
    )

    legend_x = px + pw + 16
    legend_y = py + 10
    for idx, m in enumerate(pipeline.models):
        color = _PALETTE[idx % len(_PALETTE)]
        shape = _MARKERS[idx % len(_MARKERS)]
        level_names = [n for n in pipeline.level_set.names() if n in m.points]
        speeds = [1.0 / m.points[n].latency_ms for n in level_names]
        xs = min_max_normalize(speeds)
        parts.append(f'<g class="series" data-model="{_xml_escape(m.model_id)}">')
        for lname, nx in zip(level_names, xs):
            cx = to_x(nx)
            cy = to_y(m.points[lname].accuracy)
            parts.append(_marker_svg(shape, cx, cy, color, "pt"))
            parts.append(
                f'<text class="pt-label" x="{format_real(cx + 6)}" y="{format_real(cy - 6)}" '
                f'font-family="sans-serif" font-size="9" fill="#555555">{_xml_escape(lname)}</text>'
            )
        parts.append("</g>")
        ly = legend_y + 18 * idx
        parts.append(_marker_svg(shape, legend_x + 6, ly, color, "legend-mark"))
        parts.append(
            f'<text x="{format_real(legend_x + 16)}" y="{format_real(ly + 4)}" '
            f'font-family="sans-serif" font-size="12">{_xml_escape(m.model_id)}</text>'
        )
    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode("utf-8")


def _xml_escape(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


# --- plan reports ---------------------------------------------------------


@dataclass(frozen=True)
class ReportRow:
    model_id: str
    level: str
    accuracy: float
    latency_ms: float
    size_kb: float | None
    feasible_count: int


@dataclass(frozen=True)
class PlanReport:
    """Everything a plan run reports: input digest, the chosen assignment,
    the per-model table, and the end-to-end summary."""

    pipeline_name: str
    n_models: int
    level_names: tuple[str, ...]
    assignment: Assignment
    rows: tuple[ReportRow, ...]
    accuracy_by_mode: Mapping[str, float]
    composition: str
    pipeline_accuracy: float
    pipeline_latency_ms: float
    baseline_latency_ms: float | None
    speedup: float | None


def build_report(result: SolveResult, pipeline: PipelineProfile) -> PlanReport:
    result.assignment.validate_for(pipeline)
    rows = []
    for m in pipeline.models:
        level = result.assignment.choices[m.model_id]
        point = m.points[level]
        rows.append(
            ReportRow(
                model_id=m.model_id,
                level=level,
                accuracy=point.accuracy,
                latency_ms=point.latency_ms,
                size_kb=point.size_kb,
                feasible_count=len(feasible_levels(m, pipeline.thresholds_for(m.model_id))),
            )
        )
    boost = None
    if pipeline.baseline_latency_ms is not None:
        boost = speedup(pipeline.baseline_latency_ms, result.pipeline_latency_ms)
    return PlanReport(
        pipeline_name=pipeline.name,
        n_models=pipeline.n_models,
        level_names=pipeline.level_set.names(),
        assignment=result.assignment,
        rows=tuple(rows),
        accuracy_by_mode=pipeline_accuracy_all(result.assignment, pipeline),
        composition=pipeline.accuracy_composition,
        pipeline_accuracy=result.pipeline_accuracy,
        pipeline_latency_ms=result.pipeline_latency_ms,
        baseline_latency_ms=pipeline.baseline_latency_ms,
        speedup=boost,
    )


def _report_json(report: PlanReport, pipeline: PipelineProfile) -> bytes:
    doc: dict[str, Any] = {
        "pipeline": {
            "name": report.pipeline_name,
            "models": report.n_models,
            "levels": list(report.level_names),
        },
        "assignment": {
            mid: report.assignment.choices[mid] for mid in pipeline.model_ids()
        },
        "per_model": [
            {
                "model": r.model_id,
                "level": r.level,
                "accuracy": r.accuracy,
                "latency_ms": r.latency_ms,
                "size_kb": r.size_kb,
                "feasible_levels": r.feasible_count,
            }
            for r in report.rows
        ],
        "accuracy": {
            "composition": report.composition,
            "product": report.accuracy_by_mode["product"],
            "min": report.accuracy_by_mode["min"],
            "mean": report.accuracy_by_mode["mean"],
            "pipeline_accuracy": report.pipeline_accuracy,
        },
        "pipeline_latency_ms": report.pipeline_latency_ms,
    }
    if report.baseline_latency_ms is not None:
        doc["baseline_latency_ms"] = report.baseline_latency_ms
        doc["speedup"] = report.speedup
    return _canonical_json(doc)


_TABLE_COLUMNS = (
    "Model",
    "Parameter Precision",
    "Accuracy",
    "size (KB)",
    "latency (ms)",
    "Feasible levels",
)


def _report_text(report: PlanReport) -> bytes:
    lines = [
        f"Plan for {report.pipeline_name}",
        f"Models: {report.n_models} | Levels: {', '.join(report.level_names)}",
        "",
        "  ".join(_TABLE_COLUMNS),
    ]
    for r in report.rows:
        size = format_real(r.size_kb) if r.size_kb is not None else "-"
        lines.append(
            "  ".join(
                (
                    r.model_id,
                    r.level,
                    format_real(r.accuracy),
                    size,
                    format_real(r.latency_ms),
                    str(r.feasible_count),
                )
            )
        )
    lines.append("")
    for mode in ("product", "min", "mean"):
        marker = ", selected" if mode == report.composition else ""
        lines.append(f"Accuracy ({mode}{marker}): {format_real(report.accuracy_by_mode[mode])}")
    lines.append(f"Pipeline latency (ms): {format_real(report.pipeline_latency_ms)}")
    if report.baseline_latency_ms is not None:
        lines.append(f"Baseline latency (ms): {format_real(report.baseline_latency_ms)}")
        lines.append(f"Speedup vs baseline: {format_real(report.speedup)}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def emit_report(result: SolveResult, pipeline: PipelineProfile, format: str = "text") -> bytes:
    """Render a SolveResult as a deterministic report ("json" or "text")."""
    report = build_report(result, pipeline)
    if format == "json":
        return _report_json(report, pipeline)
    if format == "text":
        return _report_text(report)
    raise ValueError(f"format must be 'json' or 'text', got {format!r}")
