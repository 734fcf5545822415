"""Malicious-fraction sweep with and without report filtering.

Runs the bad-mouthing and ballot-stuffing sweep presets twice each (filtered
and accept-all) and prints the per-block MAE side by side.
"""

import argparse
from dataclasses import replace
from pathlib import Path

from iottrust.outputs import emit_trace
from iottrust.scenario import load_preset
from iottrust.sim import honest_raters, sweep_malicious_fraction


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--devices", type=int, default=None, help="override the preset device count")
    p.add_argument("--out", default="out/sweep")
    args = p.parse_args()

    for preset in ("badmouth-sweep", "ballot-sweep"):
        scn = load_preset(preset)
        cfg = scn.config
        if args.devices:
            cfg = replace(cfg, n_devices=args.devices, rater_behaviors=honest_raters(args.devices))
        results = {}
        for label, filtering in (("filtered", True), ("accept_all", False)):
            rows, trace = sweep_malicious_fraction(
                replace(cfg, filtering=filtering), scn.sweep.fractions, scn.sweep.block_seconds, scn.sweep.attack
            )
            emit_trace(trace, Path(args.out) / preset / label)
            results[label] = rows
        print(preset)
        for a, b in zip(results["filtered"], results["accept_all"]):
            mark = "" if a.mae < b.mae else "  <-- filtering not better"
            print(f"  {a.malicious_fraction:4.0%}  filtered {a.mae:.3f}  accept-all {b.mae:.3f}{mark}")


if __name__ == "__main__":
    main()
