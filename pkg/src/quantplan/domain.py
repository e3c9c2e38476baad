"""Core value types for quantization planning.

A plan assigns exactly one quantization level to every model of an
inference pipeline.  Plans are compared on two objectives at once:
the sum of per-model accuracies (higher is better) and the sum of
per-model latencies (lower is better).  Everything in this module is
an immutable value; solvers and emitters build on these types.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping

__all__ = [
    "QuantLevel",
    "LevelSet",
    "MeasuredPoint",
    "ModelProfile",
    "Thresholds",
    "PipelineProfile",
    "Assignment",
    "ObjectiveVector",
    "ParetoFront",
    "CANONICAL_BITS",
    "FP32",
    "DEFAULT_SEARCH_LEVELS",
    "dominates",
    "assignment_lex_key",
    "preference_key",
]

COMPOSITIONS = ("product", "min", "mean")

#: Bit-widths of the conventional level names.  Arbitrary user-defined
#: levels are allowed everywhere; this map only backs name-based lookups
#: in the CLI and the synthetic generator.
CANONICAL_BITS = {
    "fp-32": 32,
    "fp-16": 16,
    "int-8": 8,
    "int-4": 4,
    "int-2": 2,
    "bin-1": 1,
}


@dataclass(frozen=True)
class QuantLevel:
    """A named precision level, e.g. ``fp-16`` at 16 bits."""

    name: str
    bits: int

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("level name must be nonempty")
        if self.bits < 1:
            raise ValueError(f"level {self.name!r}: bits must be >= 1, got {self.bits}")


@dataclass(frozen=True)
class LevelSet:
    """The set of levels a pipeline may use, kept sorted by bits descending."""

    levels: tuple[QuantLevel, ...]

    def __post_init__(self) -> None:
        if not self.levels:
            raise ValueError("level set must be nonempty")
        ordered = tuple(sorted(self.levels, key=lambda l: (-l.bits, l.name)))
        object.__setattr__(self, "levels", ordered)
        names = [l.name for l in ordered]
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise ValueError(f"duplicate level name {dup!r}")
        bits = [l.bits for l in ordered]
        if len(set(bits)) != len(bits):
            dup_b = next(b for b in bits if bits.count(b) > 1)
            raise ValueError(f"duplicate bit-width {dup_b}")

    def names(self) -> tuple[str, ...]:
        return tuple(l.name for l in self.levels)

    def get(self, name: str) -> QuantLevel:
        for l in self.levels:
            if l.name == name:
                return l
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(l.name == name for l in self.levels)

    def __iter__(self) -> Iterator[QuantLevel]:
        return iter(self.levels)

    def __len__(self) -> int:
        return len(self.levels)


FP32 = QuantLevel("fp-32", 32)

#: The conventional search set: half precision down to binarized.
DEFAULT_SEARCH_LEVELS = LevelSet(
    (
        QuantLevel("fp-16", 16),
        QuantLevel("int-8", 8),
        QuantLevel("int-4", 4),
        QuantLevel("int-2", 2),
        QuantLevel("bin-1", 1),
    )
)


@dataclass(frozen=True)
class MeasuredPoint:
    """One measurement of a model at one level.

    ``size_kb`` is reporting metadata only; it never enters the objective.
    """

    accuracy: float
    latency_ms: float
    size_kb: float | None = None

    def __post_init__(self) -> None:
        if not (0.0 <= self.accuracy <= 1.0):
            raise ValueError(f"accuracy must be in [0, 1], got {self.accuracy}")
        if not (self.latency_ms > 0.0):
            raise ValueError(f"latency_ms must be positive, got {self.latency_ms}")
        if self.size_kb is not None and not (self.size_kb > 0.0):
            raise ValueError(f"size_kb must be positive, got {self.size_kb}")


@dataclass(frozen=True)
class ModelProfile:
    """Measured accuracy/latency of one model across its available levels.

    A level absent from ``points`` is simply unavailable for this model;
    models in one pipeline need not share the same measured levels.
    """

    model_id: str
    points: Mapping[str, MeasuredPoint]

    def __post_init__(self) -> None:
        if not self.model_id:
            raise ValueError("model_id must be nonempty")
        if not self.points:
            raise ValueError(f"model {self.model_id!r} has no measured levels")
        object.__setattr__(self, "points", dict(self.points))

    def point(self, level_name: str) -> MeasuredPoint:
        try:
            return self.points[level_name]
        except KeyError:
            raise KeyError(
                f"unmeasured level {level_name!r} for model {self.model_id!r}"
            ) from None

    def level_names(self) -> tuple[str, ...]:
        return tuple(self.points)


@dataclass(frozen=True)
class Thresholds:
    """Per-model accuracy floor and latency ceiling."""

    model_id: str
    min_accuracy: float
    max_latency_ms: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.min_accuracy <= 1.0):
            raise ValueError(f"min_accuracy must be in [0, 1], got {self.min_accuracy}")
        if not (self.max_latency_ms > 0.0):
            raise ValueError(
                f"max_latency_ms must be positive, got {self.max_latency_ms}"
            )


@dataclass(frozen=True)
class PipelineProfile:
    """A pipeline of models with measurements, optional thresholds, and policy.

    ``models`` is the execution order and fixes the order of all emitted
    tables.  ``accuracy_composition`` selects how per-model accuracies
    combine into an end-to-end figure (product, min, or mean).
    """

    name: str
    level_set: LevelSet
    models: tuple[ModelProfile, ...]
    thresholds: Mapping[str, Thresholds] = field(default_factory=dict)
    accuracy_composition: str = "product"
    baseline_latency_ms: float | None = None
    description: str | None = None

    def __post_init__(self) -> None:
        if not self.models:
            raise ValueError("pipeline must contain at least one model")
        object.__setattr__(self, "models", tuple(self.models))
        object.__setattr__(self, "thresholds", dict(self.thresholds))
        ids = [m.model_id for m in self.models]
        if len(set(ids)) != len(ids):
            dup = next(i for i in ids if ids.count(i) > 1)
            raise ValueError(f"duplicate model id {dup!r}")
        for m in self.models:
            for level_name in m.points:
                if level_name not in self.level_set:
                    raise ValueError(
                        f"model {m.model_id!r} measures unknown level {level_name!r}"
                    )
        for key, t in self.thresholds.items():
            if key not in ids:
                raise ValueError(f"thresholds reference unknown model {key!r}")
            if t.model_id != key:
                raise ValueError(
                    f"thresholds entry {key!r} carries mismatched model_id {t.model_id!r}"
                )
        if self.accuracy_composition not in COMPOSITIONS:
            raise ValueError(
                f"accuracy_composition must be one of {COMPOSITIONS}, "
                f"got {self.accuracy_composition!r}"
            )
        if self.baseline_latency_ms is not None and not (self.baseline_latency_ms > 0):
            raise ValueError(
                f"baseline_latency_ms must be positive, got {self.baseline_latency_ms}"
            )

    @property
    def n_models(self) -> int:
        return len(self.models)

    def model_ids(self) -> tuple[str, ...]:
        return tuple(m.model_id for m in self.models)

    def model(self, model_id: str) -> ModelProfile:
        for m in self.models:
            if m.model_id == model_id:
                return m
        raise KeyError(f"unknown model {model_id!r}")

    def thresholds_for(self, model_id: str) -> Thresholds | None:
        return self.thresholds.get(model_id)


@dataclass(frozen=True)
class Assignment:
    """One chosen level per model: the one-hot decision in map form."""

    choices: Mapping[str, str]

    def __post_init__(self) -> None:
        if not self.choices:
            raise ValueError("assignment must choose a level for at least one model")
        object.__setattr__(self, "choices", dict(self.choices))

    def level_for(self, model_id: str) -> str:
        try:
            return self.choices[model_id]
        except KeyError:
            raise KeyError(f"assignment has no choice for model {model_id!r}") from None

    def validate_for(self, pipeline: PipelineProfile) -> None:
        """Check the one-hot property against a pipeline: exactly the
        pipeline's models, each choosing a level that model has measured."""
        ids = set(pipeline.model_ids())
        chosen = set(self.choices)
        if chosen != ids:
            missing = sorted(ids - chosen)
            extra = sorted(chosen - ids)
            parts = []
            if missing:
                parts.append(f"missing models {missing}")
            if extra:
                parts.append(f"unknown models {extra}")
            raise ValueError("invalid assignment: " + ", ".join(parts))
        for m in pipeline.models:
            level = self.choices[m.model_id]
            if level not in m.points:
                raise ValueError(
                    f"invalid assignment: model {m.model_id!r} has no measurement "
                    f"for level {level!r}"
                )


@dataclass(frozen=True)
class ObjectiveVector:
    """The two aggregate objectives of an assignment."""

    accuracy_sum: float
    latency_sum_ms: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.accuracy_sum) and math.isfinite(self.latency_sum_ms)):
            raise ValueError("objective components must be finite")


def dominates(a: ObjectiveVector, b: ObjectiveVector) -> bool:
    """True iff ``a`` is at least as good as ``b`` in both objectives and
    strictly better in at least one."""
    return (
        a.accuracy_sum >= b.accuracy_sum
        and a.latency_sum_ms <= b.latency_sum_ms
        and (a.accuracy_sum > b.accuracy_sum or a.latency_sum_ms < b.latency_sum_ms)
    )


def assignment_lex_key(assignment: Assignment) -> tuple[str, ...]:
    """Level names in sorted-model-id order; the lexicographic tie-break key."""
    return tuple(assignment.choices[m] for m in sorted(assignment.choices))


def preference_key(objective: ObjectiveVector, assignment: Assignment):
    """Total order used for every tie-break: higher accuracy sum first,
    then lower latency sum, then lexicographically smallest assignment."""
    return (-objective.accuracy_sum, objective.latency_sum_ms, assignment_lex_key(assignment))


@dataclass(frozen=True)
class ParetoFront:
    """Nondominated (objective, assignment) pairs, latency ascending.

    The constructor validates; it does not repair.  Use :meth:`from_entries`
    to prune an arbitrary entry list.  In a valid front both latency and
    accuracy are strictly increasing, which already rules out dominance
    between any two entries.
    """

    entries: tuple[tuple[ObjectiveVector, Assignment], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        for prev, cur in zip(self.entries, self.entries[1:]):
            if not (cur[0].latency_sum_ms > prev[0].latency_sum_ms):
                raise ValueError("front entries must be strictly increasing in latency")
            if not (cur[0].accuracy_sum > prev[0].accuracy_sum):
                raise ValueError("front accuracy must be strictly increasing with latency")

    @classmethod
    def from_entries(
        cls, entries: "list[tuple[ObjectiveVector, Assignment]]"
    ) -> "ParetoFront":
        """Prune dominated and tied entries, keeping the tie-break winner
        for every surviving objective vector."""
        ordered = sorted(
            entries,
            key=lambda e: (e[0].latency_sum_ms, -e[0].accuracy_sum, assignment_lex_key(e[1])),
        )
        kept: list[tuple[ObjectiveVector, Assignment]] = []
        best_acc = -math.inf
        for objective, assignment in ordered:
            if objective.accuracy_sum > best_acc:
                kept.append((objective, assignment))
                best_acc = objective.accuracy_sum
        return cls(tuple(kept))

    def objectives(self) -> tuple[ObjectiveVector, ...]:
        return tuple(obj for obj, _ in self.entries)

    def __iter__(self) -> Iterator[tuple[ObjectiveVector, Assignment]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)
