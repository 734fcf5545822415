"""Clustering time of the three-grid filter against k-means and FCM."""

import argparse

from iottrust.bench import bench_clustering
from iottrust.outputs import emit_trace


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--sizes", default="150,300,600,1200")
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="out/bench")
    args = p.parse_args()

    rows = bench_clustering([int(s) for s in args.sizes.split(",")], args.reps, args.seed)
    by = {(r.n, r.kernel): r.median_us for r in rows}
    print(f"{'n':>6} {'grid us':>10} {'kmeans us':>10} {'fcm us':>10} {'km/grid':>8} {'fcm/grid':>8}")
    for n in sorted({r.n for r in rows}):
        g, k, f = by[n, "grid"], by[n, "kmeans"], by[n, "fcm"]
        print(f"{n:6d} {g:10.1f} {k:10.1f} {f:10.1f} {k / g:8.1f} {f / g:8.1f}")
    emit_trace(None, args.out, [(r.n, r.kernel, r.median_us) for r in rows])


if __name__ == "__main__":
    main()
