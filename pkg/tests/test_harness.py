import csv

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from iottrust.attacks import RaterKind, SpBehavior, SpKind
from iottrust.bench import KERNELS, bench_clustering, make_reports
from iottrust.cli import main, parse_fractions, parse_sizes
from iottrust.metrics import MisalignedSeriesError, mae
from iottrust.outputs import (
    BENCH_HEADER,
    DOMAIN_TRUST_HEADER,
    MAE_HEADER,
    PRECISION_HEADER,
    emit_trace,
    read_csv,
    read_domain_trust,
)
from iottrust.scenario import PRESETS, ScenarioError, load_preset, load_scenario, scenario_from_dict
from iottrust.sim import ScenarioConfig, honest_raters, run_scenario


def small_trace(duration=5000.0, n_sp=3, n=3, seed=0):
    cfg = ScenarioConfig(n, (SpBehavior(),) * n_sp, honest_raters(n), sim_duration=duration, seed=seed)
    return run_scenario(cfg)


# mae

def test_mae_examples():
    s = [(1.0, 0.4), (2.0, 0.6)]
    assert mae(s, s) == 0.0
    assert mae([(0, 0.9), (1, 0.8)], [(0, 1.0), (1, 1.0)]) == pytest.approx(0.15, abs=1e-15)
    assert mae([(0, 0.3)], [(0, 0.7)]) == pytest.approx(0.4, abs=1e-15)


def test_mae_rejects_misaligned():
    with pytest.raises(MisalignedSeriesError):
        mae([(0, 0.1)], [(1, 0.1)])
    with pytest.raises(MisalignedSeriesError):
        mae([(0, 0.1)], [])
    with pytest.raises(MisalignedSeriesError):
        mae([], [])


series = st.lists(st.floats(0.0, 1.0), min_size=1, max_size=30)


@given(series, series)
def test_mae_symmetric_and_zero_iff_equal(a, b):
    n = min(len(a), len(b))
    sa = [(float(i), v) for i, v in enumerate(a[:n])]
    sb = [(float(i), v) for i, v in enumerate(b[:n])]
    assert mae(sa, sb) == mae(sb, sa)
    assert (mae(sa, sb) == 0.0) == (a[:n] == b[:n])


# CSV output

def test_empty_trace_gives_header_only_files(tmp_path):
    paths = emit_trace(small_trace(duration=0.0), tmp_path)
    headers = [DOMAIN_TRUST_HEADER, MAE_HEADER, PRECISION_HEADER, BENCH_HEADER]
    for p, h in zip(paths, headers):
        assert p.read_text() == ",".join(h) + "\n"
    paths = emit_trace(None, tmp_path / "none")
    assert [p.name for p in paths] == ["domain_trust.csv", "mae.csv", "precision.csv", "bench.csv"]


def test_fifty_iterations_three_providers(tmp_path):
    trace = small_trace()
    emit_trace(trace, tmp_path)
    rows = read_csv(tmp_path / "domain_trust.csv")
    assert len(rows) == 150
    prec = read_csv(tmp_path / "precision.csv")
    assert len(prec) == 50 * 3 * 3
    assert list(prec[0]) == list(PRECISION_HEADER)


def test_reemission_is_byte_identical(tmp_path):
    trace = small_trace(duration=1000.0)
    a = emit_trace(trace, tmp_path / "a")
    b = emit_trace(trace, tmp_path / "b")
    for pa, pb in zip(a, b):
        assert pa.read_bytes() == pb.read_bytes()


def test_csv_round_trip_is_exact(tmp_path):
    trace = small_trace(duration=2000.0, n_sp=2, seed=9)
    emit_trace(trace, tmp_path)
    back = read_domain_trust(tmp_path / "domain_trust.csv")
    mem = [(r.time, r.sp_id, r.domain_trust) for r in trace.records if r.iteration > 0]
    assert back == mem
    prec = read_csv(tmp_path / "precision.csv")
    last = trace.precision[-1][1]
    it = len(trace.precision) - 1
    for row in prec:
        if int(row["iteration"]) == it:
            assert float(row["pt"]) == last[int(row["sp_id"]), int(row["dev_id"])]


def test_emit_reports_path_on_failure(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match="file"):
        emit_trace(None, blocker / "sub")


def test_files_use_plain_newlines(tmp_path):
    emit_trace(small_trace(duration=300.0), tmp_path)
    data = (tmp_path / "domain_trust.csv").read_bytes()
    assert b"\r" not in data
    rows = list(csv.reader(data.decode().splitlines()))
    assert all(len(r) == 3 for r in rows)


# benchmark

def test_bench_shape():
    rows = bench_clustering([150, 300], reps=2)
    assert [(r.n, r.kernel) for r in rows] == [(n, k) for n in (150, 300) for k in KERNELS]
    assert all(r.median_us > 0 for r in rows)
    with pytest.raises(ValueError):
        bench_clustering([2])


def test_bench_inputs_average_precision_is_y():
    pts, pt = make_reports(20, np.random.default_rng(0))
    np.testing.assert_array_equal(pt.device_averages(), pts[:, 1])


# scenarios

def test_all_presets_load():
    for name in PRESETS:
        scn = load_preset(name)
        assert scn.config.n_devices == len(scn.config.rater_behaviors)


def test_preset_aliases_and_values():
    a = load_preset("A1p").config
    assert a == load_preset("A1'").config
    sp = a.sp_behaviors[0]
    assert sp.kind == SpKind.ONOFF_SCHEDULE and not sp.schedule.starts_on
    b1 = load_preset("B1").config
    assert b1.service_request_interval == 150.0
    h = load_preset("honest").config
    assert (h.n_devices, h.domain_trust_interval, h.sim_duration) == (150, 100.0, 5000.0)
    assert h.window_config.max_rating == 20 and h.window_config.min_rating == 5
    assert h.trust_params.beta == 7.0
    sweep = load_preset("ballot-sweep").sweep
    assert sweep.attack == RaterKind.BALLOT_STUFFING and len(sweep.fractions) == 6


def test_scenario_errors(tmp_path):
    with pytest.raises(ScenarioError):
        scenario_from_dict({})
    with pytest.raises(ScenarioError):
        scenario_from_dict({"n_devices": 3, "service_providers": [{"on_off": "nonsense"}]})
    with pytest.raises(ScenarioError):
        scenario_from_dict({"n_devices": 2, "raters": [{"behavior": "bad_mouthing", "count": 5}]})
    with pytest.raises(ScenarioError):
        load_preset("Z9")
    with pytest.raises(ScenarioError):
        load_scenario(tmp_path / "missing.toml")
    bad = tmp_path / "bad.toml"
    bad.write_text("n_devices = [")
    with pytest.raises(ScenarioError):
        load_scenario(bad)


def test_scenario_file_raters_in_order(tmp_path):
    f = tmp_path / "s.toml"
    f.write_text(
        'n_devices = 6\n'
        '[[service_providers]]\nbehavior = "malicious"\n'
        '[[raters]]\nbehavior = "ballot_stuffing"\ncount = 2\n'
        '[[raters]]\nbehavior = "bad_mouthing_onoff"\ncount = 1\nonoff_cycle_s = [25, 25]\n'
    )
    cfg = load_scenario(f).config
    kinds = [r.kind for r in cfg.rater_behaviors]
    assert kinds[:3] == [RaterKind.BALLOT_STUFFING, RaterKind.BALLOT_STUFFING, RaterKind.BAD_MOUTHING_ONOFF]
    assert set(kinds[3:]) == {RaterKind.HONEST}


# CLI

def test_parse_helpers():
    assert parse_fractions("0.1:0.6:0.1") == [0.1, 0.2, 0.3, 0.4, 0.5, 0.6]
    assert parse_fractions("0.2,0.4") == [0.2, 0.4]
    assert parse_sizes("150,300") == [150, 300]


def test_cli_run(tmp_path, capsys):
    f = tmp_path / "s.toml"
    f.write_text('n_devices = 4\nsim_duration_s = 300\n[[service_providers]]\nbehavior = "honest"\n')
    assert main(["run", str(f), "--seed", "3", "--out", str(tmp_path / "o")]) == 0
    assert len(read_csv(tmp_path / "o" / "domain_trust.csv")) == 3
    assert "final domain trust" in capsys.readouterr().out


def test_cli_errors_exit_nonzero(tmp_path, capsys):
    assert main(["run", str(tmp_path / "nope.toml"), "--out", str(tmp_path)]) == 1
    err = capsys.readouterr().err
    assert err.startswith("iottrust: error:") and err.count("\n") == 1
    assert main(["convergence", "--preset", "nope", "--out", str(tmp_path)]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--attack", "sybil"])
    assert exc.value.code != 0


def test_cli_bench_and_sweep(tmp_path):
    assert main(["bench-cluster", "--sizes", "30,60", "--reps", "1", "--out", str(tmp_path)]) == 0
    assert len(read_csv(tmp_path / "bench.csv")) == 6
    out = tmp_path / "sw"
    assert main(["sweep", "--attack", "ballot", "--fractions", "0.1,0.3", "--block", "200",
                 "--devices", "10", "--out", str(out)]) == 0
    rows = read_csv(out / "mae.csv")
    assert [float(r["malicious_fraction"]) for r in rows] == [0.1, 0.3]
