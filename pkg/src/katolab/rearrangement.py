"""Rearrangement-based sufficient conditions for potentials V(x) = f(|x|):
centered radial integrals, layer-cake tail integrals over the distribution
function, and the moment-weighted tail criterion."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, ValidationError
from .quadrature import INF, integrate_outward, integrate_to_zero
from .space import unit_ball_volume

LOG_CAP = 1.0 / math.e


def check_decreasing(f: Callable, lo: float = 1e-6, hi: float = 1e3,
                     n: int = 200, tol: float = 1e-9) -> None:
    s = np.geomspace(lo, hi, n)
    v = np.asarray(f(s), dtype=float)
    if np.any(np.diff(v) > tol * np.maximum(np.abs(v[:-1]), 1.0)):
        raise ValidationError("profile is not decreasing on the sampled grid")


def right_continuous_inverse(f: Callable, tol: float = 1e-12) -> Callable:
    """t -> sup{s >= 0 : f(s) > t} for decreasing nonnegative f.

    At continuity points of f the composition f(f^{-1}(t)) recovers t; on
    plateaus the inverse jumps, which is exactly the right-continuous choice.
    """
    check_decreasing(f)

    def scalar(t: float) -> float:
        t = float(t)
        if t < 0:
            raise DomainError("inverse is defined for t >= 0")
        if float(np.asarray(f(np.array([0.0])))[0]) <= t:
            return 0.0
        def fval(s: float) -> float:
            return float(np.asarray(f(np.array([s])))[0])

        hi = 1.0
        while fval(hi) > t:
            hi *= 2.0
            if hi > 1e15:
                return INF
        lo = hi / 2.0
        while fval(lo) <= t:
            lo /= 2.0
            if lo < 1e-300:
                return 0.0
        # bisect in log space: relative precision is uniform across scales,
        # so far tails of the inverse stay accurate
        while hi - lo > tol * hi:
            mid = math.sqrt(lo * hi)
            if fval(mid) > t:
                lo = mid
            else:
                hi = mid
        return lo

    def inv(t):
        arr = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.array([scalar(v) for v in arr])
        return out if np.ndim(t) else float(out[0])

    return inv


@dataclass
class DistributionFunction:
    """Tabulated decreasing t -> m(|V| >= t)."""

    fn: Callable

    def __call__(self, t):
        return self.fn(np.asarray(t, dtype=float))

    @classmethod
    def from_radial(cls, profile: Callable, d: int) -> "DistributionFunction":
        """Exact layer-cake form for a decreasing radial potential:
        m(|V| >= t) = omega_d * (f^{-1}(t))^d."""
        inv = right_continuous_inverse(profile)
        vol = unit_ball_volume(d)
        return cls(lambda t: vol * np.asarray(inv(t), dtype=float) ** d)

    @classmethod
    def from_density(cls, V: Callable, d: int, window: float = 4.0,
                     n_samples: int = 100_000, seed: int = 0,
                     t_grid=None) -> "DistributionFunction":
        """Monte Carlo threshold counting on a cube window, with isotonic
        post-processing to enforce decrease."""
        rng = np.random.default_rng(seed)
        pts = rng.uniform(-window, window, size=(n_samples, d))
        vals = np.abs(np.apply_along_axis(V, 1, pts))
        vol = (2.0 * window) ** d
        ts = (np.geomspace(max(vals.min(), 1e-8), vals.max() + 1e-8, 200)
              if t_grid is None else np.asarray(t_grid, dtype=float))
        m = np.array([vol * np.mean(vals >= t) for t in ts])
        m = np.minimum.accumulate(m)  # isotonic: decreasing in t

        def fn(t):
            t = np.asarray(t, dtype=float)
            idx = np.searchsorted(ts, t, side="left")
            out = np.where(idx >= len(ts), 0.0,
                           m[np.minimum(idx, len(m) - 1)])
            return np.where(t <= ts[0], m[0], out)

        return cls(fn)


def radial_criterion(profile: Callable, d: int, alpha_exponent: float,
                     p: float, R: float = 1.0) -> tuple[float, bool]:
    """Centered integral test for |V| m with V = f(|x|) decreasing:
    finiteness of int_0^R w(r) f(r) dr with the regime weight w."""
    a = alpha_exponent
    if d > a:
        expo = d - p * (d - a) - 1.0

        def w(r):
            with np.errstate(divide="ignore"):
                return np.asarray(r, dtype=float) ** expo

    elif d == a:
        R = min(R, LOG_CAP)

        def w(r):
            r = np.asarray(r, dtype=float)
            with np.errstate(divide="ignore"):
                return np.log(1.0 / r) ** p * r ** (d - 1.0)

    else:  # a > d: no singular weight, only local integrability of f
        def w(r):
            return np.asarray(r, dtype=float) ** (d - 1.0)

    res = integrate_to_zero(lambda r: w(r) * np.asarray(profile(r)), R)
    return (INF if res.diverged else res.value), not res.diverged


def layer_cake_criterion(dist: DistributionFunction, d: int,
                         alpha_exponent: float, p: float,
                         a: float = 1.0) -> tuple[float, bool]:
    """Tail test int_a^inf m(|V| >= t)^{(d - p(d-alpha))/d} dt."""
    if a <= 0:
        raise DomainError("a must be positive")
    if d > alpha_exponent:
        expo = (d - p * (d - alpha_exponent)) / d
        if not 0.0 < expo <= 1.0:
            raise DomainError("layer-cake exponent must lie in ]0, 1]")
    else:
        expo = 1.0  # plain variant

    res = integrate_outward(lambda t: np.asarray(dist(t)) ** expo, a)
    return (INF if res.diverged else res.value), not res.diverged


def g_criterion(G_prime: Callable, d: int, alpha_exponent: float, p: float,
                a: float = 1.0,
                moment: float | None = None) -> tuple[float, bool]:
    """Tail test int_a^inf (G'(s))^{1 - d/(p(d-alpha))} ds for an increasing
    convex weight G with finite moment int G(|V|) dm."""
    if d <= alpha_exponent:
        raise DomainError("criterion requires d > alpha")
    if moment is not None and not math.isfinite(moment):
        raise DomainError("the G-moment must be finite")
    q = 1.0 - d / (p * (d - alpha_exponent))
    if q >= 0.0:
        warnings.warn("exponent 1 - d/(p(d-alpha)) >= 0: the tail criterion "
                      "is vacuous for this (d, alpha, p)", stacklevel=2)
    res = integrate_outward(lambda s: np.asarray(G_prime(s)) ** q, a)
    return (INF if res.diverged else res.value), not res.diverged
