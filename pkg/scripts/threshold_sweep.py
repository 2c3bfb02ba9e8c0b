#!/usr/bin/env python3
"""Sweep p across a measure/kernel pair and locate the membership threshold.

Example:
    python3 scripts/threshold_sweep.py --family gaussian --dim 3 \
        --measure lebesgue --p-min 1 --p-max 4 --steps 13
"""

import argparse
import csv
import math
import sys

import numpy as np

from katolab.classification import ClassifyConfig, classify_measure
from katolab.functionals import CenterStrategy
from katolab.kernels import make_kernel_model
from katolab.measures import SphereSurface, lebesgue


def build_measure(name: str, dim: int):
    if name == "lebesgue":
        return lebesgue(dim)
    if name == "sphere":
        if dim != 3:
            sys.exit("sphere surface measure is implemented for dim = 3")
        return SphereSurface(np.zeros(3), 1.0, 4.0 * math.pi)
    sys.exit(f"unknown measure {name!r} (lebesgue | sphere)")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", default="gaussian")
    ap.add_argument("--dim", type=int, default=3)
    ap.add_argument("--alpha", type=float, default=1.5,
                    help="stability index for the stable family")
    ap.add_argument("--measure", default="lebesgue")
    ap.add_argument("--p-min", type=float, default=1.0)
    ap.add_argument("--p-max", type=float, default=4.0)
    ap.add_argument("--steps", type=int, default=13)
    ap.add_argument("--out", default=None, help="optional CSV path")
    args = ap.parse_args()

    kw = {"dim": args.dim}
    if args.family == "stable":
        kw["alpha"] = args.alpha
    model = make_kernel_model(args.family, **kw)
    mu = build_measure(args.measure, args.dim)
    off_center = np.zeros(args.dim)
    if args.measure == "sphere":
        off_center[-1] = 1.0
    cfg = ClassifyConfig(centers=CenterStrategy(
        explicit=[off_center], n_support=4, n_random=0))

    rows = []
    for p in np.linspace(args.p_min, args.p_max, args.steps):
        rep = classify_measure(mu, model, float(p), cfg)
        rows.append((float(p), rep.verdict_K, rep.verdict_D,
                     rep.fitted_slope, rep.predicted_threshold))
        print(f"p = {p:6.3f}  Kato {rep.verdict_K:9s} Dynkin {rep.verdict_D:9s}"
              f"  slope {rep.fitted_slope:+.4f}  p* = {rep.predicted_threshold:.3f}")

    flips = [(a[0] + b[0]) / 2.0 for a, b in zip(rows, rows[1:])
             if a[1] == "in" and b[1] != "in"]
    if flips:
        print(f"\nmembership flips near p = {flips[0]:.3f} "
              f"(predicted p* = {rows[0][4]:.3f})")

    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["p", "verdict_K", "verdict_D", "slope", "p_star"])
            w.writerows(rows)
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
