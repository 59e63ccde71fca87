"""Timing harness for the feature-map engine."""

from __future__ import annotations

import time

import numpy as np

from .ffm import FfmParams, compute_ffm

__all__ = ["random_image", "time_ffm", "run_benchmark"]


def random_image(size: int, gray_levels: int = 256, seed: int = 0) -> np.ndarray:
    """Seeded pseudo-random test image, reproducible across runs."""
    rng = np.random.default_rng(seed)
    return rng.integers(0, gray_levels, size=(size, size), dtype=np.uint8).copy()


def time_ffm(image, params: FfmParams, threads: int, reps: int) -> list[float]:
    """Wall-clock samples (ms) for computing the FFM of one image."""
    samples = []
    for _ in range(reps):
        start = time.perf_counter()
        compute_ffm(image, params, threads=threads)
        samples.append((time.perf_counter() - start) * 1000.0)
    return samples


def run_benchmark(
    size: int = 256,
    window: int = 5,
    step: int = 1,
    gray_levels: int = 256,
    robust: bool = False,
    threads: int = 0,
    reps: int = 5,
    seed: int = 0,
    measure_scaling: bool = True,
) -> dict:
    """Benchmark the engine on a seeded random image.

    Reports per-rep samples, their median, throughput over output pixels,
    and (when at least two step sizes fit inside the window) the observed
    exponent of the runtime-vs-step power law.
    """
    if size < 64:
        raise ValueError(f"benchmark size must be >= 64, got {size}")
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    image = random_image(size, gray_levels, seed)
    params = FfmParams(window=window, step=step, gray_levels=gray_levels,
                       robust=robust)
    samples = time_ffm(image, params, threads, reps)
    median_ms = float(np.median(samples))
    report = {
        "size": size,
        "window": window,
        "step": step,
        "gray_levels": gray_levels,
        "robust": robust,
        "threads": threads,
        "reps": reps,
        "seed": seed,
        "samples_ms": [round(s, 3) for s in samples],
        "median_ms": round(median_ms, 3),
        "throughput_mpix_per_s": round(size * size / (median_ms * 1e3), 3),
    }
    if measure_scaling:
        steps = [s for s in (step, step * 2, step * 4) if s <= window]
        if len(steps) >= 2:
            medians = []
            for s in steps:
                p = FfmParams(window=window, step=s, gray_levels=gray_levels,
                              robust=robust)
                medians.append(float(np.median(time_ffm(image, p, threads, reps))))
            slope = np.polyfit(np.log(steps), np.log(medians), 1)[0]
            report["step_scaling"] = {
                "steps": steps,
                "median_ms": [round(m, 3) for m in medians],
                "exponent": round(float(-slope), 3),
            }
    return report
