#!/usr/bin/env python3
"""Fit the semigroup decay order delta and compare with the scaling formula
delta = (nu - p (nu - beta)) / (beta p) for Lebesgue measure.

Example:
    python3 scripts/decay_order_demo.py --dim 3 --p 1 1.5 2
"""

import argparse
import sys

import numpy as np

from katolab.classification import ClassifyConfig, fit_order_delta
from katolab.functionals import CenterStrategy
from katolab.kernels import make_kernel_model
from katolab.measures import lebesgue


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", default="gaussian")
    ap.add_argument("--dim", type=int, default=3)
    ap.add_argument("--alpha", type=float, default=1.5)
    ap.add_argument("--p", type=float, nargs="+", default=[1.0, 1.5, 2.0])
    args = ap.parse_args()

    kw = {"dim": args.dim}
    if args.family == "stable":
        kw["alpha"] = args.alpha
    model = make_kernel_model(args.family, **kw)
    nu, beta = model.space.nu, model.space.beta
    mu = lebesgue(args.dim)
    cfg = ClassifyConfig(centers=CenterStrategy(
        explicit=[np.zeros(args.dim)], n_support=0, n_random=0))

    print(f"{args.family} kernel, dim {args.dim} (nu={nu:g}, beta={beta:g})")
    for p in args.p:
        predicted = (nu - p * (nu - beta)) / (beta * p)
        if predicted <= 0:
            print(f"p = {p:5.2f}  outside the class (predicted delta <= 0)")
            continue
        delta, ci = fit_order_delta(mu, model, p, cfg)
        print(f"p = {p:5.2f}  fitted delta = {delta:.4f} +- {ci:.4f}  "
              f"formula = {predicted:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
