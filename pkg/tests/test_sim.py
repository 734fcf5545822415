from dataclasses import replace

import numpy as np
import pytest

from iottrust.attacks import RaterBehavior, RaterKind, SpBehavior, SpKind
from iottrust.sim import (
    COLLECT,
    REQUEST,
    SLOT_CLOSE,
    ScenarioConfig,
    attackers,
    block_mae,
    honest_raters,
    run_scenario,
    sweep_malicious_fraction,
)


def config(n=3, sps=(SpBehavior(),), duration=500.0, **kw):
    return ScenarioConfig(n, tuple(sps), honest_raters(n), sim_duration=duration, **kw)


def test_event_priorities():
    assert SLOT_CLOSE < COLLECT < REQUEST


def test_honest_instance_rises_above_half():
    trace = run_scenario(config(3, duration=1000.0, seed=5))
    vals = [v for t, v in trace.series(0) if t > 0]
    assert len(vals) == 10
    assert all(v > 0.5 for v in vals)
    # first update is the midpoint of 0.5 and the mean report
    assert 0.5 < vals[0] < 0.75


def test_honest_fifty_devices_one_provider():
    trace = run_scenario(config(50, duration=1000.0, seed=2))
    assert all(v > 0.5 for t, v in trace.series(0) if t > 0)


def test_all_honest_matches_truth():
    trace = run_scenario(config(6, sps=(SpBehavior(), SpBehavior(SpKind.MALICIOUS)), seed=1))
    for r in trace.records:
        assert r.domain_trust == r.truth


def test_zero_duration_has_only_initial_records():
    trace = run_scenario(config(duration=0.0))
    assert [(r.time, r.iteration, r.domain_trust) for r in trace.records] == [(0.0, 0, 0.5)]
    assert trace.events == []
    assert len(trace.precision) == 1


def test_runs_are_bit_identical():
    cfg = config(8, sps=(SpBehavior(), SpBehavior(SpKind.MALICIOUS)), duration=600.0, seed=11)
    a, b = run_scenario(cfg), run_scenario(cfg)
    assert a.records == b.records
    assert a.events == b.events
    assert all(np.array_equal(x[1], y[1]) and x[0] == y[0] for x, y in zip(a.precision, b.precision))


def test_seed_changes_trace():
    a = run_scenario(config(seed=1))
    b = run_scenario(config(seed=2))
    assert a.records != b.records


def test_one_record_per_provider_per_interval():
    trace = run_scenario(config(4, sps=(SpBehavior(),) * 3, duration=1000.0))
    for sp in range(3):
        times = [t for t, _ in trace.series(sp)]
        assert times == [100.0 * k for k in range(11)]
    its = [r.iteration for r in trace.records if r.sp_id == 1]
    assert its == list(range(11))


def test_collection_follows_slot_close():
    trace = run_scenario(config(duration=300.0))
    for i, (t, kind) in enumerate(trace.events):
        if kind == "collect":
            assert trace.events[i - 1] == (t, "slot_close")


def test_invalid_configs_rejected():
    with pytest.raises(ValueError):
        run_scenario(ScenarioConfig(3, (SpBehavior(),), honest_raters(2)))
    with pytest.raises(ValueError):
        run_scenario(ScenarioConfig(3, (), honest_raters(3)))
    with pytest.raises(ValueError):
        run_scenario(config(service_request_interval=0.0))
    with pytest.raises(ValueError):
        run_scenario(config(duration=-1.0))


def test_misaligned_interval_warns(caplog):
    run_scenario(config(duration=0.0, domain_trust_interval=90.0))
    assert "multiple" in caplog.text


def test_attackers_nest():
    a, b = attackers(10, 0.2, RaterKind.BAD_MOUTHING), attackers(10, 0.5, RaterKind.BAD_MOUTHING)
    assert sum(r.is_malicious for r in a) == 2 and sum(r.is_malicious for r in b) == 5
    assert all(b[i].is_malicious for i in range(10) if a[i].is_malicious)


def test_rater_change_takes_effect():
    n = 9
    bad = tuple(RaterBehavior(RaterKind.BAD_MOUTHING) if i < 3 else RaterBehavior() for i in range(n))
    cfg = replace(config(n, duration=400.0), rater_changes=((200.0, bad),))
    trace = run_scenario(cfg)
    assert "role_change" in {k for _, k in trace.events}
    early = [r for r in trace.records if 0 < r.time <= 200]
    late = [r for r in trace.records if r.time > 200]
    assert all(r.filtered_count == 0 for r in early)
    # once their precision has been halved the three attackers are dropped
    assert late[-1].filtered_count >= 3


def test_sweep_shape_and_determinism():
    base = config(10, duration=0.0, seed=3)
    fr = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6]
    rows, trace = sweep_malicious_fraction(base, fr, block_seconds=200.0)
    assert [r.malicious_fraction for r in rows] == fr
    assert [r.block_start for r in rows] == [200.0 * i for i in range(6)]
    assert len(trace.mae_rows) == 6
    rows2, _ = sweep_malicious_fraction(base, fr, block_seconds=200.0)
    assert rows == rows2


def test_sweep_without_attackers_tracks_truth():
    rows, _ = sweep_malicious_fraction(config(10, duration=0.0, seed=4), [0.0, 0.0], block_seconds=800.0)
    assert all(r.mae < 0.1 for r in rows)
    assert rows[1].mae == 0.0


def test_sweep_rejects_bad_fraction():
    with pytest.raises(ValueError):
        sweep_malicious_fraction(config(duration=0.0), [0.1, 1.5])


def test_block_mae_window():
    trace = run_scenario(replace(config(6, duration=300.0), rater_behaviors=attackers(6, 0.5, RaterKind.BALLOT_STUFFING)))
    assert block_mae(trace, 0.0, 300.0) >= 0.0
    assert np.isnan(block_mae(trace, 300.0, 400.0))
