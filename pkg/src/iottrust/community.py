"""Community-server pipeline: grid clustering, report filtering, domain
trust smoothing and precision bookkeeping.

Trust matrices are ``(n_sp, n_dev)`` float arrays.  A NaN cell in the
direct-trust matrix means the device sent no report for that provider in
the current iteration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

LOW_EDGE = 0.3
HIGH_EDGE = 0.7
NEIGHBOR_MIN_PREC = 0.3
WRONG_MIN_PREC = 0.7

ACTUAL, NEIGHBOR, WRONG = "actual", "neighbor", "wrong"


class PrecisionMatrix:
    """Per (provider, device) precision trust, all cells start at 1."""

    def __init__(self, values: np.ndarray):
        values = np.asarray(values, dtype=float)
        if values.ndim != 2:
            raise ValueError("precision matrix must be 2-D (n_sp, n_dev)")
        if np.any((values < 0) | (values > 1)):
            raise ValueError("precision entries must lie in [0, 1]")
        self.values = values

    @classmethod
    def initial(cls, n_sp: int, n_dev: int) -> "PrecisionMatrix":
        return cls(np.ones((n_sp, n_dev)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def copy(self) -> "PrecisionMatrix":
        return PrecisionMatrix(self.values.copy())

    def device_averages(self) -> np.ndarray:
        return self.values.mean(axis=0)


class TrustMatrix:
    """Direct trust reports of one iteration; NaN marks a missing report."""

    def __init__(self, values: np.ndarray):
        values = np.asarray(values, dtype=float)
        present = ~np.isnan(values)
        if np.any((values[present] < 0) | (values[present] > 1)):
            raise ValueError("direct trust entries must lie in [0, 1]")
        self.values = values

    @classmethod
    def empty(cls, n_sp: int, n_dev: int) -> "TrustMatrix":
        return cls(np.full((n_sp, n_dev), np.nan))

    def row(self, sp: int) -> np.ndarray:
        return self.values[sp]


class Grid(NamedTuple):
    dev_ids: np.ndarray
    trust: np.ndarray
    precision: np.ndarray

    @property
    def count(self) -> int:
        return len(self.dev_ids)


@dataclass(eq=False)
class ClusterResult:
    grids: tuple[Grid, Grid, Grid]
    is_dense: tuple[bool, bool, bool]
    avg_prec: tuple[float | None, float | None, float | None]
    actual_cluster: int
    min_points: int

    def role(self, j: int) -> str:
        d = abs(j - self.actual_cluster)
        return (ACTUAL, NEIGHBOR, WRONG)[d]


@dataclass(frozen=True)
class DomainTrustRecord:
    sp_id: int
    value: float = 0.5
    iteration: int = 0


def avg_precision(pt: PrecisionMatrix, dev_id: int) -> float:
    n_dev = pt.shape[1]
    if not 0 <= dev_id < n_dev:
        raise KeyError(f"unknown device {dev_id}")
    return float(pt.values[:, dev_id].mean())


def grid_index(x: np.ndarray) -> np.ndarray:
    return (x >= LOW_EDGE).astype(np.intp) + (x >= HIGH_EDGE)


def cluster_reports(dev_ids: np.ndarray, trust: np.ndarray, precision: np.ndarray) -> ClusterResult:
    """Three-grid clustering of (direct trust, average precision) points."""
    n = len(dev_ids)
    if n == 0:
        raise ValueError("no reports to cluster")
    min_points = max(1, n // 3)
    idx = grid_index(trust)
    # counting sort into the three grids; bincount sums sequentially
    counts = np.bincount(idx, minlength=3).tolist()
    psums = np.bincount(idx, weights=precision, minlength=3).tolist()
    order = np.argsort(idx, kind="stable")
    ids_s, trust_s, prec_s = dev_ids[order], trust[order], precision[order]
    grids = []
    dense = []
    avg = []
    best = -np.inf
    actual = -1
    lo = 0
    for j in range(3):
        hi = lo + counts[j]
        grids.append(Grid(ids_s[lo:hi], trust_s[lo:hi], prec_s[lo:hi]))
        lo = hi
        if counts[j] >= min_points:
            dense.append(True)
            a = psums[j] / counts[j]
            avg.append(a)
            # >= so later (higher) grids win ties
            if a >= best:
                best = a
                actual = j
        else:
            dense.append(False)
            avg.append(None)
    return ClusterResult(tuple(grids), tuple(dense), tuple(avg), actual, min_points)


def form_clusters(tm_row: np.ndarray, pt: PrecisionMatrix, avg_prec: np.ndarray | None = None) -> ClusterResult:
    """Cluster the devices that reported on one provider.

    ``avg_prec`` may carry precomputed per-device averages of ``pt`` so a
    whole iteration reads one snapshot.
    """
    tm_row = np.asarray(tm_row, dtype=float)
    present = np.flatnonzero(~np.isnan(tm_row))
    if avg_prec is None:
        avg_prec = pt.device_averages()
    return cluster_reports(present, tm_row[present], avg_prec[present])


def select_ratings(clusters: ClusterResult) -> list[tuple[int, float]]:
    """Reports kept for domain trust, sorted by device id."""
    keep_ids = []
    keep_trust = []
    for j, g in enumerate(clusters.grids):
        role = clusters.role(j)
        if role == ACTUAL:
            mask = np.ones(g.count, dtype=bool)
        elif role == NEIGHBOR:
            mask = g.precision > NEIGHBOR_MIN_PREC
        else:
            mask = g.precision > WRONG_MIN_PREC
        keep_ids.append(g.dev_ids[mask])
        keep_trust.append(g.trust[mask])
    ids = np.concatenate(keep_ids)
    trust = np.concatenate(keep_trust)
    order = np.argsort(ids, kind="stable")
    return [(int(i), float(t)) for i, t in zip(ids[order], trust[order])]


def accept_all(clusters: ClusterResult) -> list[tuple[int, float]]:
    """Selection with filtering disabled; used as the unfiltered baseline."""
    ids = np.concatenate([g.dev_ids for g in clusters.grids])
    trust = np.concatenate([g.trust for g in clusters.grids])
    order = np.argsort(ids, kind="stable")
    return [(int(i), float(t)) for i, t in zip(ids[order], trust[order])]


def domain_trust_update(prev: DomainTrustRecord, selected: Sequence[tuple[int, float]]) -> DomainTrustRecord:
    if not selected:
        raise ValueError("no selected reports")
    new = sum(t for _, t in selected) / len(selected)
    return DomainTrustRecord(prev.sp_id, 0.5 * (prev.value + new), prev.iteration + 1)


def update_precision(pt: PrecisionMatrix, clusters: ClusterResult, sp: int) -> PrecisionMatrix:
    """Move each reporter's precision toward 1, 0.5 or 0 by cluster role.

    Updates ``pt`` in place and returns it.
    """
    row = pt.values[sp]
    for j, g in enumerate(clusters.grids):
        if g.count == 0:
            continue
        target = {ACTUAL: 1.0, NEIGHBOR: 0.5, WRONG: 0.0}[clusters.role(j)]
        row[g.dev_ids] = 0.5 * (row[g.dev_ids] + target)
    return pt


@dataclass(frozen=True)
class IterationOutcome:
    records: list[DomainTrustRecord]
    clusters: list[ClusterResult | None]
    selected_counts: list[int]
    filtered_counts: list[int]


def run_iteration(
    tm: TrustMatrix,
    pt: PrecisionMatrix,
    prev: Sequence[DomainTrustRecord],
    filtering: bool = True,
) -> IterationOutcome:
    """One domain-trust round over every provider.

    Average precision is read from the snapshot taken before any update in
    this round.  A provider nobody reported on keeps its previous value but
    still advances its iteration counter.
    """
    snapshot = pt.device_averages()
    select = select_ratings if filtering else accept_all
    records, all_clusters, sel_counts, filt_counts = [], [], [], []
    for sp, rec in enumerate(prev):
        row = tm.row(sp)
        if np.all(np.isnan(row)):
            records.append(DomainTrustRecord(rec.sp_id, rec.value, rec.iteration + 1))
            all_clusters.append(None)
            sel_counts.append(0)
            filt_counts.append(0)
            continue
        clusters = form_clusters(row, pt, snapshot)
        selected = select(clusters)
        records.append(domain_trust_update(rec, selected))
        update_precision(pt, clusters, sp)
        all_clusters.append(clusters)
        n_reports = sum(g.count for g in clusters.grids)
        sel_counts.append(len(selected))
        filt_counts.append(n_reports - len(selected))
    return IterationOutcome(records, all_clusters, sel_counts, filt_counts)
