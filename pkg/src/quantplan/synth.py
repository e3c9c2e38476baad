"""Seeded generator of synthetic pipeline profiles.

Accuracy degrades linearly per halving of bit-width from the fp-32
figure; latency shrinks as a power of the bit fraction.  Optional
bounded noise perturbs both, after which isotonic clipping restores
monotone degradation so generated instances always behave like real
quantization sweeps.  Identical configs (including seed) produce
identical profiles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import LevelSet, MeasuredPoint, ModelProfile, PipelineProfile

__all__ = ["SynthConfig", "generate_profiles"]

_REFERENCE_BITS = 32.0


@dataclass(frozen=True)
class SynthConfig:
    n_models: int
    level_set: LevelSet
    seed: int
    acc_fp32: float = 0.95
    degr_per_halving: float = 0.02
    lat_fp32_ms: float = 400.0
    speed_exponent: float = 1.0
    noise_amplitude: float = 0.0

    def __post_init__(self) -> None:
        if self.n_models < 1:
            raise ValueError(f"n_models must be >= 1, got {self.n_models}")
        if self.seed < 0:
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed}")
        if not (0.0 <= self.acc_fp32 <= 1.0):
            raise ValueError(f"acc_fp32 must be in [0, 1], got {self.acc_fp32}")
        if self.degr_per_halving < 0.0:
            raise ValueError(f"degr_per_halving must be >= 0, got {self.degr_per_halving}")
        if not (self.lat_fp32_ms > 0.0):
            raise ValueError(f"lat_fp32_ms must be positive, got {self.lat_fp32_ms}")
        if not (self.speed_exponent > 0.0):
            raise ValueError(f"speed_exponent must be positive, got {self.speed_exponent}")
        if not (0.0 <= self.noise_amplitude < 1.0):
            raise ValueError(
                f"noise_amplitude must be in [0, 1), got {self.noise_amplitude}"
            )
        min_bits = min(l.bits for l in self.level_set)
        floor = self.acc_fp32 - self.degr_per_halving * math.log2(_REFERENCE_BITS / min_bits)
        if floor < 0.0:
            raise ValueError(
                f"accuracy curve goes negative at {min_bits}-bit "
                f"({floor:.4f}); lower degr_per_halving or raise acc_fp32"
            )


def _clamp01(v: float) -> float:
    return min(1.0, max(0.0, v))


def generate_profiles(cfg: SynthConfig) -> PipelineProfile:
    """Build a deterministic synthetic pipeline from the config."""
    rng = np.random.default_rng(cfg.seed)
    width = len(str(cfg.n_models))
    levels = list(cfg.level_set)  # bits descending
    models = []
    for i in range(1, cfg.n_models + 1):
        amp = cfg.noise_amplitude
        acc_noise = rng.uniform(-amp, amp, size=len(levels))
        lat_noise = rng.uniform(-amp, amp, size=len(levels))
        points: dict[str, MeasuredPoint] = {}
        prev_acc = math.inf
        prev_lat = math.inf
        for j, level in enumerate(levels):
            halvings = math.log2(_REFERENCE_BITS / level.bits)
            accuracy = _clamp01(
                cfg.acc_fp32 - cfg.degr_per_halving * halvings + float(acc_noise[j])
            )
            latency = (
                cfg.lat_fp32_ms
                * (level.bits / _REFERENCE_BITS) ** cfg.speed_exponent
                * (1.0 + float(lat_noise[j]))
            )
            # Isotonic clip: noise must not break monotone degradation.
            accuracy = min(accuracy, prev_acc)
            latency = min(latency, prev_lat)
            prev_acc = accuracy
            prev_lat = latency
            points[level.name] = MeasuredPoint(accuracy=accuracy, latency_ms=latency)
        models.append(ModelProfile(model_id=f"m{str(i).zfill(width)}", points=points))
    return PipelineProfile(
        name=f"synthetic-n{cfg.n_models}-seed{cfg.seed}",
        level_set=cfg.level_set,
        models=tuple(models),
        accuracy_composition="product",
        baseline_latency_ms=cfg.lat_fp32_ms * cfg.n_models,
    )
