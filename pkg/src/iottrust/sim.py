"""Deterministic discrete-event simulation of devices, providers and the
community server.

Three event kinds share one heap.  At equal timestamps a slot closes before
the server collects trust, rater role changes apply next, and service
requests come last, so a collection at a slot boundary always sees freshly
adjusted windows.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .attacks import (
    RaterBehavior,
    RaterKind,
    SpBehavior,
    rate_service,
    report_direct_trust,
    sp_service_quality,
)
from .community import (
    DomainTrustRecord,
    PrecisionMatrix,
    TrustMatrix,
    run_iteration,
)
from .direct_trust import TrustParams, direct_trust
from .metrics import mae
from .window import TrustRating, TrustWindow, WindowConfig, close_slot_and_adjust, record_rating

log = logging.getLogger(__name__)

SLOT_CLOSE, COLLECT, ROLE_CHANGE, REQUEST = 0, 1, 2, 3


@dataclass(frozen=True)
class ScenarioConfig:
    n_devices: int
    sp_behaviors: tuple[SpBehavior, ...]
    rater_behaviors: tuple[RaterBehavior, ...]
    service_request_interval: float = 4.0
    domain_trust_interval: float = 100.0
    sim_duration: float = 5000.0
    window_config: WindowConfig = field(default_factory=WindowConfig)
    trust_params: TrustParams = field(default_factory=TrustParams)
    seed: int = 0
    filtering: bool = True
    # (time, behaviours) pairs replacing rater_behaviors from that time on
    rater_changes: tuple[tuple[float, tuple[RaterBehavior, ...]], ...] = ()
    name: str = "scenario"

    @property
    def slot_duration(self) -> float:
        return self.window_config.slot_duration

    def validate(self) -> None:
        if self.n_devices < 1:
            raise ValueError("n_devices must be >= 1")
        if not self.sp_behaviors:
            raise ValueError("at least one service provider is required")
        if len(self.rater_behaviors) != self.n_devices:
            raise ValueError(
                f"rater_behaviors has {len(self.rater_behaviors)} entries, "
                f"expected {self.n_devices}"
            )
        if self.service_request_interval <= 0:
            raise ValueError("service_request_interval must be positive")
        if self.domain_trust_interval <= 0:
            raise ValueError("domain_trust_interval must be positive")
        if self.sim_duration < 0:
            raise ValueError("sim_duration must be non-negative")
        for t, behaviors in self.rater_changes:
            if t < 0 or len(behaviors) != self.n_devices:
                raise ValueError(f"bad rater change at t={t}")
        ratio = self.domain_trust_interval / self.slot_duration
        if abs(ratio - round(ratio)) > 1e-9:
            log.warning("domain trust interval is not a multiple of the slot duration")


@dataclass(frozen=True)
class IterationRecord:
    time: float
    sp_id: int
    iteration: int
    domain_trust: float
    truth: float
    selected_count: int
    filtered_count: int


@dataclass
class SimulationTrace:
    config: ScenarioConfig
    records: list[IterationRecord] = field(default_factory=list)
    # one (time, PT copy) per collection, iteration-0 snapshot included
    precision: list[tuple[float, np.ndarray]] = field(default_factory=list)
    events: list[tuple[float, str]] = field(default_factory=list)
    mae_rows: list[tuple[float, float, float]] = field(default_factory=list)

    def series(self, sp_id: int, truth: bool = False) -> list[tuple[float, float]]:
        return [
            (r.time, r.truth if truth else r.domain_trust)
            for r in self.records if r.sp_id == sp_id
        ]

    def values_after(self, sp_id: int, t: float) -> list[float]:
        return [r.domain_trust for r in self.records if r.sp_id == sp_id and r.time > t]


def _streams(seed: int, n_sp: int, n_dev: int):
    root = np.random.SeedSequence(seed)
    sp_seq, dev_seq, sched_seq = root.spawn(3)
    sp_rngs = [np.random.default_rng(s) for s in sp_seq.spawn(n_sp)]
    dev_rngs = [np.random.default_rng(s) for s in dev_seq.spawn(n_dev)]
    return sp_rngs, dev_rngs, np.random.default_rng(sched_seq)


def run_scenario(config: ScenarioConfig) -> SimulationTrace:
    config.validate()
    n_sp = len(config.sp_behaviors)
    n_dev = config.n_devices
    dt_slot = config.slot_duration
    dT = config.domain_trust_interval
    horizon = config.sim_duration
    params = config.trust_params

    sp_rngs, dev_rngs, sched_rng = _streams(config.seed, n_sp, n_dev)
    windows = [[TrustWindow(config.window_config) for _ in range(n_sp)] for _ in range(n_dev)]
    raters = list(config.rater_behaviors)

    pt = PrecisionMatrix.initial(n_sp, n_dev)
    pt_truth = PrecisionMatrix.initial(n_sp, n_dev)
    records = [DomainTrustRecord(sp) for sp in range(n_sp)]
    truth = [DomainTrustRecord(sp) for sp in range(n_sp)]

    trace = SimulationTrace(config)
    for sp in range(n_sp):
        trace.records.append(IterationRecord(0.0, sp, 0, 0.5, 0.5, 0, 0))
    trace.precision.append((0.0, pt.values.copy()))

    heap: list = []
    seq = 0

    def push(t, prio, payload=None):
        nonlocal seq
        heapq.heappush(heap, (t, prio, seq, payload))
        seq += 1

    # periodic event times are k * period, never accumulated sums
    interval = config.service_request_interval
    offsets = sched_rng.uniform(0.0, interval, size=n_dev)
    if horizon > 0:
        push(dt_slot, SLOT_CLOSE, 1)
        push(dT, COLLECT, 1)
        for t, behaviors in config.rater_changes:
            push(float(t), ROLE_CHANGE, tuple(behaviors))
        for d in range(n_dev):
            push(float(offsets[d]), REQUEST, (d, 0))

    while heap:
        t, prio, _, payload = heapq.heappop(heap)
        if t > horizon or (prio == REQUEST and t >= horizon):
            continue
        if prio == SLOT_CLOSE:
            for row in windows:
                for w in row:
                    close_slot_and_adjust(w, t)
            trace.events.append((t, "slot_close"))
            push((payload + 1) * dt_slot, SLOT_CLOSE, payload + 1)
        elif prio == COLLECT:
            tm = TrustMatrix.empty(n_sp, n_dev)
            for d in range(n_dev):
                for sp in range(n_sp):
                    true_dt = direct_trust(windows[d][sp], params).direct_trust
                    tm.values[sp, d] = report_direct_trust(raters[d], true_dt, t, dev_rngs[d])
            outcome = run_iteration(tm, pt, records, filtering=config.filtering)
            honest = np.array([not r.is_malicious for r in raters])
            tm_truth = TrustMatrix(np.where(honest[None, :], tm.values, np.nan))
            truth = run_iteration(tm_truth, pt_truth, truth, filtering=True).records
            records = outcome.records
            for sp in range(n_sp):
                trace.records.append(IterationRecord(
                    t, sp, records[sp].iteration, records[sp].value, truth[sp].value,
                    outcome.selected_counts[sp], outcome.filtered_counts[sp],
                ))
            trace.precision.append((t, pt.values.copy()))
            trace.events.append((t, "collect"))
            push((payload + 1) * dT, COLLECT, payload + 1)
        elif prio == ROLE_CHANGE:
            raters = list(payload)
            trace.events.append((t, "role_change"))
        else:
            d, k = payload
            rng = dev_rngs[d]
            for sp, behavior in enumerate(config.sp_behaviors):
                quality = sp_service_quality(behavior, t, sp_rngs[sp])
                record_rating(windows[d][sp], TrustRating(rate_service(quality, rng), t))
            push(float(offsets[d] + (k + 1) * interval), REQUEST, (d, k + 1))
    return trace


def honest_raters(n: int) -> tuple[RaterBehavior, ...]:
    return tuple(RaterBehavior() for _ in range(n))


def attackers(n: int, fraction: float, kind: RaterKind) -> tuple[RaterBehavior, ...]:
    """First ``round(fraction * n)`` devices attack, so larger fractions nest."""
    k = int(round(fraction * n))
    return tuple(RaterBehavior(kind) if i < k else RaterBehavior() for i in range(n))


@dataclass(frozen=True)
class MaeRow:
    block_start: float
    malicious_fraction: float
    mae: float


def block_mae(trace: SimulationTrace, start: float, end: float) -> float:
    """Mean over providers of each provider's MAE on iterations in (start, end]."""
    per_sp = []
    for sp in range(len(trace.config.sp_behaviors)):
        got = [(r.time, r.domain_trust) for r in trace.records if r.sp_id == sp and start < r.time <= end]
        ref = [(r.time, r.truth) for r in trace.records if r.sp_id == sp and start < r.time <= end]
        if got:
            per_sp.append(mae(got, ref))
    return float(np.mean(per_sp)) if per_sp else float("nan")


def sweep_malicious_fraction(
    base: ScenarioConfig,
    fractions: Sequence[float],
    block_seconds: float = 800.0,
    attack: RaterKind = RaterKind.BAD_MOUTHING,
) -> tuple[list[MaeRow], SimulationTrace]:
    """One continuous run where the attacker share steps up every block.

    Precision state carries over between blocks.
    """
    if not fractions:
        return [], run_scenario(replace(base, sim_duration=0.0))
    for f in fractions:
        if not 0.0 <= f <= 1.0:
            raise ValueError(f"fraction {f} outside [0, 1]")
    n = base.n_devices
    changes = tuple(
        (i * block_seconds, attackers(n, f, attack)) for i, f in enumerate(fractions) if i > 0
    )
    config = replace(
        base,
        rater_behaviors=attackers(n, fractions[0], attack),
        rater_changes=changes,
        sim_duration=len(fractions) * block_seconds,
    )
    trace = run_scenario(config)
    rows = []
    for i, f in enumerate(fractions):
        start = i * block_seconds
        rows.append(MaeRow(start, float(f), block_mae(trace, start, start + block_seconds)))
    trace.mae_rows = [(r.block_start, r.malicious_fraction, r.mae) for r in rows]
    return rows, trace
