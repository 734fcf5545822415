"""Command-line entry point: ``iottrust {run,sweep,bench-cluster,convergence}``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

import numpy as np

from .bench import bench_clustering
from .outputs import emit_trace
from .scenario import PRESETS, SWEEP_ATTACKS, Scenario, load_preset, load_scenario
from .sim import honest_raters, run_scenario, sweep_malicious_fraction


def parse_fractions(text: str) -> list[float]:
    """``"0.1:0.6:0.1"`` (start:stop:step, inclusive) or ``"0.1,0.3,0.5"``."""
    if ":" in text:
        try:
            start, stop, step = (float(p) for p in text.split(":"))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad range {text!r}, want start:stop:step")
        if step <= 0:
            raise argparse.ArgumentTypeError("step must be positive")
        n = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 10) for i in range(n)]
    try:
        return [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad fraction list {text!r}")


def parse_sizes(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}")


def _execute(scn: Scenario, seed: int | None, out: str, no_filter: bool = False) -> None:
    config = scn.config
    if seed is not None:
        config = replace(config, seed=seed)
    if no_filter:
        config = replace(config, filtering=False)
    if scn.sweep:
        rows, trace = sweep_malicious_fraction(config, scn.sweep.fractions, scn.sweep.block_seconds, scn.sweep.attack)
        for r in rows:
            print(f"block {r.block_start:7.0f}s  malicious {r.malicious_fraction:4.0%}  mae {r.mae:.4f}")
    else:
        trace = run_scenario(config)
        for sp in range(len(config.sp_behaviors)):
            series = trace.series(sp)
            print(f"sp {sp}: final domain trust {series[-1][1]:.4f} after {series[-1][0]:.0f}s")
    paths = emit_trace(trace, out)
    print(f"wrote {', '.join(str(p) for p in paths)}")


def cmd_run(args) -> None:
    _execute(load_scenario(args.scenario), args.seed, args.out, args.no_filter)


def cmd_convergence(args) -> None:
    _execute(load_preset(args.preset), args.seed, args.out, args.no_filter)


def cmd_sweep(args) -> None:
    scn = load_preset("badmouth-sweep" if SWEEP_ATTACKS[args.attack].value == "bad_mouthing" else "ballot-sweep")
    config = scn.config
    if args.devices:
        config = replace(config, n_devices=args.devices, rater_behaviors=honest_raters(args.devices))
    sweep = replace(scn.sweep, fractions=tuple(args.fractions), block_seconds=args.block)
    _execute(Scenario(config, sweep), args.seed, args.out, args.no_filter)


def cmd_bench(args) -> None:
    rows = bench_clustering(args.sizes, args.reps, args.seed)
    for r in rows:
        print(f"n={r.n:6d}  {r.kernel:7s} {r.median_us:12.1f} us")
    paths = emit_trace(None, args.out, [(r.n, r.kernel, r.median_us) for r in rows])
    print(f"wrote {paths[-1]}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="iottrust", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out_default):
        sp.add_argument("--seed", type=int, default=None, help="override the scenario seed")
        sp.add_argument("--out", default=out_default, help="output directory for CSV files")
        sp.add_argument("--no-filter", action="store_true", help="accept every report (baseline)")

    r = sub.add_parser("run", help="run a scenario file")
    r.add_argument("scenario")
    common(r, "out")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="malicious-fraction MAE sweep")
    s.add_argument("--attack", choices=["badmouth", "ballot"], required=True)
    s.add_argument("--fractions", type=parse_fractions, default=parse_fractions("0.1:0.6:0.1"))
    s.add_argument("--block", type=float, default=800.0, help="seconds per fraction")
    s.add_argument("--devices", type=int, default=None)
    common(s, "out")
    s.set_defaults(func=cmd_sweep)

    b = sub.add_parser("bench-cluster", help="clustering time comparison")
    b.add_argument("--sizes", type=parse_sizes, default=parse_sizes("150,300,600,1200"))
    b.add_argument("--reps", type=int, default=20)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", default="out")
    b.set_defaults(func=cmd_bench)

    c = sub.add_parser("convergence", help="run a bundled preset")
    c.add_argument("--preset", required=True, help=", ".join(PRESETS))
    common(c, "out")
    c.set_defaults(func=cmd_convergence)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"iottrust: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
