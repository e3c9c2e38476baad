#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the full Pareto-merge solve under each backend on synthetic
pipelines of growing size, plus the raw kernels on large arrays.
Run from the repo root:

    python3 benchmarks/bench_backends.py
    QUANTPLAN_BACKEND=numpy python3 benchmarks/bench_backends.py   # force fallback only

Results are validated for equality between backends before timing is
reported, so a speed number always refers to identical output.
"""

from __future__ import annotations

import time

import numpy as np

from quantplan import DEFAULT_SEARCH_LEVELS, SynthConfig, generate_profiles, pareto_front_dp
from quantplan import backend
from quantplan.domain import LevelSet, QuantLevel


def _timeit(fn, repeats: int = 3) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _wide_level_set(k: int) -> LevelSet:
    return LevelSet(tuple(QuantLevel(f"q{b:02d}", b) for b in range(32, 32 - k, -1)))


def bench_solve() -> None:
    print("== end-to-end pareto_front_dp ==")
    print(f"{'instance':<28} {'numba (s)':>10} {'numpy (s)':>10} {'speedup':>8} {'front':>7}")
    cases = [
        ("n=6  |Q|=5 noise=.02", SynthConfig(6, DEFAULT_SEARCH_LEVELS, seed=7, noise_amplitude=0.02)),
        ("n=9  |Q|=5 noise=.02", SynthConfig(9, DEFAULT_SEARCH_LEVELS, seed=7, noise_amplitude=0.02)),
        ("n=11 |Q|=5 noise=.02", SynthConfig(11, DEFAULT_SEARCH_LEVELS, seed=7, noise_amplitude=0.02)),
        ("n=8  |Q|=12 noise=.05", SynthConfig(8, _wide_level_set(12), seed=7, noise_amplitude=0.05)),
    ]
    for label, cfg in cases:
        pipeline = generate_profiles(cfg)
        results = {}
        times = {}
        for name in ("numba", "numpy"):
            backend.set_backend(name)
            pareto_front_dp(pipeline)  # warm-up (JIT compile / cache load)
            times[name] = _timeit(lambda: pareto_front_dp(pipeline))
            results[name] = pareto_front_dp(pipeline)
        assert results["numba"].entries == results["numpy"].entries, "backend mismatch"
        ratio = times["numpy"] / times["numba"]
        print(
            f"{label:<28} {times['numba']:>10.4f} {times['numpy']:>10.4f} "
            f"{ratio:>7.2f}x {len(results['numba']):>7}"
        )


def bench_kernels() -> None:
    from quantplan import _kernels_numba, _kernels_numpy

    print("== raw kernels ==")
    rng = np.random.default_rng(0)
    base = rng.uniform(0.0, 5.0, size=40_000)
    base_lat = rng.uniform(10.0, 500.0, size=40_000)
    item = rng.uniform(0.0, 1.0, size=24)
    item_lat = rng.uniform(1.0, 50.0, size=24)
    sorted_vals = rng.uniform(0.0, 10.0, size=2_000_000)

    _kernels_numba.pair_sums(base, base_lat, item, item_lat)  # compile
    _kernels_numba.keep_strict_increase(sorted_vals)

    for label, args, jit_fn, np_fn in (
        (
            "pair_sums 40k x 24",
            (base, base_lat, item, item_lat),
            _kernels_numba.pair_sums,
            _kernels_numpy.pair_sums,
        ),
        (
            "keep_strict_increase 2M",
            (sorted_vals,),
            _kernels_numba.keep_strict_increase,
            _kernels_numpy.keep_strict_increase,
        ),
    ):
        t_jit = _timeit(lambda: jit_fn(*args), repeats=5)
        t_np = _timeit(lambda: np_fn(*args), repeats=5)
        print(f"{label:<28} numba {t_jit * 1e3:8.2f} ms   numpy {t_np * 1e3:8.2f} ms   "
              f"ratio {t_np / t_jit:5.2f}x")


if __name__ == "__main__":
    print(f"active backend at import: {backend.active_name()}")
    bench_kernels()
    bench_solve()
