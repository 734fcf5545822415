"""Domain-trust convergence for the honest, malicious and mixed presets.

Writes one CSV directory per preset under --out and prints the mean domain
trust of each provider after the warm-up period.
"""

import argparse
from pathlib import Path

import numpy as np

from iottrust.outputs import emit_trace
from iottrust.scenario import load_preset
from iottrust.sim import run_scenario


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--presets", default="honest,malicious,mixed,mixed-onoff")
    p.add_argument("--warmup", type=float, default=1000.0)
    p.add_argument("--out", default="out/convergence")
    args = p.parse_args()

    for name in args.presets.split(","):
        cfg = load_preset(name).config
        trace = run_scenario(cfg)
        emit_trace(trace, Path(args.out) / name)
        for sp in range(len(cfg.sp_behaviors)):
            vals = trace.values_after(sp, args.warmup)
            print(f"{name:12s} sp {sp}  mean {np.mean(vals):.3f}  min {min(vals):.3f}  max {max(vals):.3f}")


if __name__ == "__main__":
    main()
