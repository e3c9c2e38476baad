"""Exact solvers for the per-model quantization assignment problem.

Three routes to the same answers:

* :func:`brute_force_front` enumerates every feasible assignment in plain
  Python.  It is the test oracle and shares no code with the fast path.
* :func:`pareto_front_dp` folds models into the front one at a time,
  pruning dominated partial assignments after each merge.  Pruning a
  partial assignment is safe because float addition is monotone, so a
  partial that is no better in both sums can never finish strictly better.
  Equal objective vectors keep only the lexicographic tie-break winner.
* :func:`solve_weighted` picks each model's level independently by the
  scalarized score; :func:`solve_budget` reads the best entry under a
  latency ceiling off the DP front.

All tie-breaking follows the single total order defined in ``domain``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import backend
from ._text import format_real
from .domain import (
    Assignment,
    ObjectiveVector,
    ParetoFront,
    PipelineProfile,
)
from .objective import (
    feasible_levels,
    normalized_points,
    objective_of,
    pipeline_accuracy,
)

__all__ = [
    "SolveRequest",
    "SolveResult",
    "InfeasibleModelError",
    "BudgetInfeasibleError",
    "OracleCapExceededError",
    "DEFAULT_ORACLE_CAP",
    "brute_force_front",
    "pareto_front_dp",
    "solve_weighted",
    "solve_budget",
    "solve",
]

DEFAULT_ORACLE_CAP = 1_000_000

MODES = ("weighted", "budget", "pareto")


class InfeasibleModelError(RuntimeError):
    """A model has no level satisfying its thresholds."""

    def __init__(self, model_id: str):
        self.model_id = model_id
        super().__init__(f"infeasible model {model_id}")


class BudgetInfeasibleError(RuntimeError):
    """No assignment fits under the requested latency budget."""

    def __init__(self, min_latency_ms: float):
        self.min_latency_ms = min_latency_ms
        super().__init__(
            "budget infeasible: minimum achievable latency is "
            f"{format_real(min_latency_ms)} ms"
        )


class OracleCapExceededError(RuntimeError):
    """The enumeration oracle was asked for more combinations than its cap."""

    def __init__(self, total: int, cap: int):
        self.total = total
        self.cap = cap
        super().__init__(f"instance too large for oracle: {total} assignments > cap {cap}")


@dataclass(frozen=True)
class SolveRequest:
    """One solver invocation: which pipeline, which mode, which parameter."""

    pipeline: PipelineProfile
    mode: str
    lam: float | None = None
    budget_ms: float | None = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "weighted":
            if self.lam is None or not (0.0 <= self.lam <= 1.0):
                raise ValueError("weighted mode requires lambda in [0, 1]")
        if self.mode == "budget":
            if self.budget_ms is None or not (self.budget_ms > 0.0):
                raise ValueError("budget mode requires a positive budget_ms")


@dataclass(frozen=True)
class SolveResult:
    """A chosen assignment with its evaluation."""

    assignment: Assignment
    objective: ObjectiveVector
    pipeline_accuracy: float
    pipeline_latency_ms: float
    feasible_level_counts: Mapping[str, int]


def _feasible_names(pipeline: PipelineProfile) -> "list[list[str]]":
    """Per model (pipeline order): feasible level names sorted ascending.
    Raises for any model left without a feasible level."""
    out = []
    for m in pipeline.models:
        names = sorted(feasible_levels(m, pipeline.thresholds_for(m.model_id)))
        if not names:
            raise InfeasibleModelError(m.model_id)
        out.append(names)
    return out


def _feasible_counts(pipeline: PipelineProfile) -> "dict[str, int]":
    names = _feasible_names(pipeline)
    return {m.model_id: len(n) for m, n in zip(pipeline.models, names)}


def _result_for(assignment: Assignment, pipeline: PipelineProfile) -> SolveResult:
    objective = objective_of(assignment, pipeline)
    return SolveResult(
        assignment=assignment,
        objective=objective,
        pipeline_accuracy=pipeline_accuracy(assignment, pipeline),
        pipeline_latency_ms=objective.latency_sum_ms,
        feasible_level_counts=_feasible_counts(pipeline),
    )


def brute_force_front(
    pipeline: PipelineProfile, cap: int = DEFAULT_ORACLE_CAP
) -> ParetoFront:
    """Enumerate every feasible assignment and prune to the exact front.

    Deliberately written without the array kernels so it can serve as an
    independent oracle for :func:`pareto_front_dp`.
    """
    names = _feasible_names(pipeline)
    total = math.prod(len(n) for n in names)
    if total > cap:
        raise OracleCapExceededError(total, cap)
    ids = pipeline.model_ids()
    entries = []
    for combo in itertools.product(*names):
        accuracy_sum = 0.0
        latency_sum = 0.0
        for m, level in zip(pipeline.models, combo):
            point = m.points[level]
            accuracy_sum += point.accuracy
            latency_sum += point.latency_ms
        entries.append(
            (
                ObjectiveVector(accuracy_sum=accuracy_sum, latency_sum_ms=latency_sum),
                Assignment(dict(zip(ids, combo))),
            )
        )
    return ParetoFront.from_entries(entries)


def pareto_front_dp(pipeline: PipelineProfile) -> ParetoFront:
    """Exact Pareto front by folding models into the front one at a time.

    State after k merges: the nondominated partial fronts over the first
    k models, as float arrays plus an integer matrix of chosen level
    ranks (rank = position in that model's sorted feasible names, so
    comparing rank rows is comparing assignments lexicographically).
    """
    names = _feasible_names(pipeline)
    levels = []
    for m, level_names in zip(pipeline.models, names):
        acc = np.array([m.points[n].accuracy for n in level_names], dtype=np.float64)
        lat = np.array([m.points[n].latency_ms for n in level_names], dtype=np.float64)
        levels.append((level_names, acc, lat))

    front_acc = np.zeros(1, dtype=np.float64)
    front_lat = np.zeros(1, dtype=np.float64)
    ranks = np.zeros((1, 0), dtype=np.int64)
    processed: list[str] = []

    for m, (level_names, acc, lat) in zip(pipeline.models, levels):
        n_front = front_acc.shape[0]
        n_levels = acc.shape[0]
        cand_acc, cand_lat = backend.pair_sums(front_acc, front_lat, acc, lat)
        parent = np.repeat(np.arange(n_front, dtype=np.int64), n_levels)
        point = np.tile(np.arange(n_levels, dtype=np.int64), n_front)
        cand_ranks = np.concatenate([ranks[parent], point[:, None]], axis=1)
        processed.append(m.model_id)

        # Scan order: latency ascending, accuracy descending, then the
        # assignment tie-break (rank columns in sorted-model-id order).
        column = {mid: j for j, mid in enumerate(processed)}
        keys = [cand_ranks[:, column[mid]] for mid in sorted(processed, reverse=True)]
        keys.append(-cand_acc)
        keys.append(cand_lat)
        order = np.lexsort(tuple(keys))
        keep = backend.keep_strict_increase(cand_acc[order])
        selected = order[keep]

        front_acc = cand_acc[selected]
        front_lat = cand_lat[selected]
        ranks = cand_ranks[selected]

    ids = pipeline.model_ids()
    entries = []
    for row in range(front_acc.shape[0]):
        choices = {
            mid: levels[j][0][ranks[row, j]] for j, mid in enumerate(ids)
        }
        entries.append(
            (
                ObjectiveVector(
                    accuracy_sum=float(front_acc[row]),
                    latency_sum_ms=float(front_lat[row]),
                ),
                Assignment(choices),
            )
        )
    return ParetoFront(tuple(entries))


def solve_weighted(pipeline: PipelineProfile, lam: float) -> SolveResult:
    """Minimize the scalarized score independently per model.

    Score ties prefer higher bits, then level name order.  lam = 0
    maximizes each model's accuracy, lam = 1 minimizes its latency.
    """
    if not (0.0 <= lam <= 1.0):
        raise ValueError(f"lambda must be in [0, 1], got {lam}")
    choices: dict[str, str] = {}
    for m in pipeline.models:
        feasible = feasible_levels(m, pipeline.thresholds_for(m.model_id))
        if not feasible:
            raise InfeasibleModelError(m.model_id)
        norms = normalized_points(m)

        def score(name: str) -> tuple[float, int, str]:
            value = lam * norms[name].norm_latency - (1.0 - lam) * norms[name].norm_accuracy
            return (value, -pipeline.level_set.get(name).bits, name)

        choices[m.model_id] = min(feasible, key=score)
    return _result_for(Assignment(choices), pipeline)


def solve_budget(pipeline: PipelineProfile, budget_ms: float) -> SolveResult:
    """Best accuracy sum among front entries within a latency budget."""
    if not (budget_ms > 0.0):
        raise ValueError(f"budget_ms must be positive, got {budget_ms}")
    front = pareto_front_dp(pipeline)
    within = [e for e in front if e[0].latency_sum_ms <= budget_ms]
    if not within:
        raise BudgetInfeasibleError(front.entries[0][0].latency_sum_ms)
    # Front accuracy increases with latency, so the last entry within
    # budget carries the maximal accuracy sum.
    _, assignment = within[-1]
    return _result_for(assignment, pipeline)


def solve(request: SolveRequest) -> "SolveResult | ParetoFront":
    """Dispatch a request: weighted and budget modes yield a SolveResult,
    pareto mode the full front."""
    if request.mode == "weighted":
        return solve_weighted(request.pipeline, request.lam)
    if request.mode == "budget":
        return solve_budget(request.pipeline, request.budget_ms)
    return pareto_front_dp(request.pipeline)
