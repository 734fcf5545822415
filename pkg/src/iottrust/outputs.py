"""CSV emission of simulation traces and benchmark tables.

Floats are written with ``repr`` so that reading a file back yields the
exact in-memory values.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Sequence

from .sim import SimulationTrace

DOMAIN_TRUST_HEADER = ("time_s", "sp_id", "domain_trust")
MAE_HEADER = ("block_start_s", "malicious_fraction", "mae")
PRECISION_HEADER = ("iteration", "dev_id", "sp_id", "pt")
BENCH_HEADER = ("n", "kernel", "median_us")


def _write(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def _domain_rows(trace: SimulationTrace):
    for r in trace.records:
        if r.iteration > 0:
            yield (repr(r.time), r.sp_id, repr(r.domain_trust))


def _precision_rows(trace: SimulationTrace):
    for it, (_, values) in enumerate(trace.precision):
        if it == 0:
            continue
        n_sp, n_dev = values.shape
        for dev in range(n_dev):
            for sp in range(n_sp):
                yield (it, dev, sp, repr(float(values[sp, dev])))


def emit_trace(
    trace: SimulationTrace | None,
    out_dir: str | Path,
    bench: Sequence[tuple[int, str, float]] = (),
) -> list[Path]:
    """Write domain_trust.csv, mae.csv, precision.csv and bench.csv.

    Initial (iteration 0) state is not written.  ``trace=None`` or an empty
    run produces header-only files.
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create {out}: {exc.strerror or exc}") from exc
    domain = _domain_rows(trace) if trace else ()
    mae_rows = [(repr(float(a)), repr(float(f)), repr(float(m))) for a, f, m in trace.mae_rows] if trace else []
    prec = _precision_rows(trace) if trace else ()
    bench_rows = [(int(n), k, repr(float(us))) for n, k, us in bench]
    return [
        _write(out / "domain_trust.csv", DOMAIN_TRUST_HEADER, domain),
        _write(out / "mae.csv", MAE_HEADER, mae_rows),
        _write(out / "precision.csv", PRECISION_HEADER, prec),
        _write(out / "bench.csv", BENCH_HEADER, bench_rows),
    ]


def read_csv(path: str | Path) -> list[dict[str, str]]:
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh))


def read_domain_trust(path: str | Path) -> list[tuple[float, int, float]]:
    return [(float(r["time_s"]), int(r["sp_id"]), float(r["domain_trust"])) for r in read_csv(path)]
