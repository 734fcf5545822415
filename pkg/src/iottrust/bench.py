"""Wall-clock comparison of the grid clustering against k-means and FCM."""

from __future__ import annotations

import time
from dataclasses import dataclass
from statistics import median
from typing import Callable, Sequence

import numpy as np

from .baseline_filters import fuzzy_cmeans, kmeans
from .community import PrecisionMatrix, form_clusters

KERNELS = ("grid", "kmeans", "fcm")


@dataclass(frozen=True)
class BenchRow:
    n: int
    kernel: str
    median_us: float


def make_reports(n: int, rng: np.random.Generator) -> tuple[np.ndarray, PrecisionMatrix]:
    """n random (direct trust, average precision) points.

    The precision matrix has a single provider row, so each device's
    average precision is exactly its y coordinate.
    """
    pts = rng.random((n, 2))
    return pts, PrecisionMatrix(pts[:, 1][None, :].copy())


def _time_us(fn: Callable[[], object], number: int = 5) -> float:
    """Mean microseconds per call over ``number`` calls, after one warm-up."""
    fn()
    t0 = time.perf_counter()
    for _ in range(number):
        fn()
    return (time.perf_counter() - t0) * 1e6 / number


def bench_clustering(sizes: Sequence[int], reps: int = 20, seed: int = 0) -> list[BenchRow]:
    """Median over repetitions of the per-call wall time, per kernel and size.

    Every repetition draws fresh points and all three kernels see the same
    ones; the baselines run with k = c = 3, m = 2, tol 1e-4, 100 iterations.
    """
    if any(n < 3 for n in sizes):
        raise ValueError("sizes must be >= 3")
    rows = []
    for n in sizes:
        rng = np.random.default_rng([seed, n])
        times = {k: [] for k in KERNELS}
        for rep in range(reps):
            pts, pt = make_reports(n, rng)
            row = pts[:, 0]
            times["grid"].append(_time_us(lambda: form_clusters(row, pt)))
            times["kmeans"].append(_time_us(lambda: kmeans(pts, 3, 100, 1e-4, seed=rep)))
            times["fcm"].append(_time_us(lambda: fuzzy_cmeans(pts, 3, 2.0, 100, 1e-4, seed=rep)))
        for k in KERNELS:
            rows.append(BenchRow(n, k, median(times[k])))
    return rows
