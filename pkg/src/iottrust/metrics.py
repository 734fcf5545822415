from __future__ import annotations

from typing import Sequence

# (time, value) pairs with strictly increasing times
MetricSeries = Sequence[tuple[float, float]]


class MisalignedSeriesError(ValueError):
    pass


def mae(series: MetricSeries, truth: MetricSeries) -> float:
    """Mean absolute difference of two series sampled at the same times."""
    if len(series) != len(truth):
        raise MisalignedSeriesError(f"lengths differ: {len(series)} vs {len(truth)}")
    if not series:
        raise MisalignedSeriesError("empty series")
    total = 0.0
    for (ta, a), (tb, b) in zip(series, truth):
        if ta != tb:
            raise MisalignedSeriesError(f"timestamps differ: {ta} vs {tb}")
        total += abs(a - b)
    return total / len(series)
