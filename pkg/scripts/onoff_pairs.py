"""Compare each on-off schedule with its phase-swapped twin (A1..A5 vs A1'..A5')
and the sparse random attackers B1/B2."""

import argparse
from dataclasses import replace

import numpy as np

from iottrust.scenario import load_preset
from iottrust.sim import run_scenario


def mean_after(name, warmup, seed):
    cfg = load_preset(name).config
    if seed is not None:
        cfg = replace(cfg, seed=seed)
    return float(np.mean(run_scenario(cfg).values_after(0, warmup)))


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--warmup", type=float, default=1000.0)
    p.add_argument("--seed", type=int, default=None)
    args = p.parse_args()

    for k in range(1, 6):
        a = mean_after(f"A{k}", args.warmup, args.seed)
        b = mean_after(f"A{k}'", args.warmup, args.seed)
        print(f"A{k}  on-first {a:.3f}  off-first {b:.3f}  gap {abs(a - b):.3f}")
    for name in ("B1", "B2"):
        print(f"{name}  mean {mean_after(name, args.warmup, args.seed):.3f}")


if __name__ == "__main__":
    main()
