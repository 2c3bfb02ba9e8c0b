"""Heat-kernel families: pointwise evaluation, time integrals, resolvents,
and closed-form two-sided bounds on the time-integrated kernel.

Every family exposes the same radial interface: the kernel depends on
(t, distance) only.  Families are either in exact scaling form
p_t(r) = t^{-nu/beta} * profile(r / t^{1/beta}) or, for the relativistic
family with positive mass, a two-branch global estimate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate, special

from .errors import AccuracyError, DomainError, ValidationError
from .quadrature import (
    INF,
    IntegralResult,
    integrate_outward,
    integrate_to_zero,
)
from .space import SpaceModel, sphere_surface_area

# ---------------------------------------------------------------------------
# relativistic special functions


def stable_jump_constant(d: int, alpha: float) -> float:
    """Normalizing constant A(d, -alpha) of the alpha-stable jump density."""
    if not 0.0 < alpha < 2.0:
        raise DomainError("alpha must lie in ]0, 2[")
    return (
        alpha
        * 2.0 ** (d + alpha)
        * math.gamma((d + alpha) / 2.0)
        / (2.0 ** (d + 1) * math.pi ** (d / 2.0) * math.gamma(1.0 - alpha / 2.0))
    )


def _bessel_type_integral(k: float, r: float) -> float:
    """I(r) = int_0^inf s^{k-1} exp(-s/4 - r^2/s) ds, split at the saddle s=2r."""
    if r < 0:
        raise DomainError("r must be nonnegative")
    if r == 0.0:
        return 4.0**k * math.gamma(k)

    def f(s):
        return s ** (k - 1.0) * math.exp(-s / 4.0 - r * r / s)

    split = 2.0 * r
    head, e1 = integrate.quad(f, 0.0, split, epsabs=0.0, epsrel=1e-10, limit=200)
    tail, e2 = integrate.quad(f, split, np.inf, epsabs=0.0, epsrel=1e-10, limit=200)
    val = head + tail
    if val > 0 and (e1 + e2) > 1e-8 * val:
        raise AccuracyError("I(r) quadrature did not converge", best_estimate=val)
    return val


def relativistic_psi(d: int, alpha: float, r: float) -> float:
    """Decreasing correction factor Psi(r) = I(r)/I(0) of the relativistic
    jump density; Psi(0) = 1 and Psi(r) ~ e^{-r}(1 + r^{(d+alpha-1)/2})."""
    k = (d + alpha) / 2.0
    return _bessel_type_integral(k, r) / _bessel_type_integral(k, 0.0)


def eval_relativistic_jump_density(d: int, alpha: float, m: float, r: float) -> float:
    """Jump density J_m(r) = A(d,-alpha) Psi(m^{1/alpha} r) / r^{d+alpha}."""
    if r <= 0:
        raise DomainError("jump density is singular at r = 0")
    psi = relativistic_psi(d, alpha, m ** (1.0 / alpha) * r) if m > 0 else 1.0
    return stable_jump_constant(d, alpha) * psi / r ** (d + alpha)


# ---------------------------------------------------------------------------
# scaling profiles and their tail moments


class TailMomentTable:
    """Cached W(x) = int_x^inf u^a profile(u) du, vectorized in x.

    Below the tabulated range the profile is continued by its value at 0,
    which is exact to first order and keeps q_t accurate as r -> 0.
    """

    def __init__(self, profile: Callable, a: float, x_min: float = 1e-8):
        self.profile = profile
        self.a = a
        self.x_min = x_min
        self.phi0 = float(profile(np.array([0.0]))[0])
        tail = integrate_outward(lambda u: u**a * np.asarray(profile(u)), 1.0)
        if tail.diverged:
            raise ValidationError("profile tail moment diverges")
        # find the effective support of the integrand
        x_max = 1.0
        while x_max < 1e8:
            probe = float(np.asarray(profile(np.array([x_max])))[0]) * x_max**a
            if probe < 1e-300:
                break
            x_max *= 2.0
        xs = np.geomspace(x_min, x_max, 2400)
        mids = 0.5 * (xs[:-1] + xs[1:])
        widths = np.diff(xs)
        panel = np.asarray(self.profile(mids)) * mids**self.a * widths
        cum = np.concatenate([np.cumsum(panel[::-1])[::-1], [0.0]])
        self.xs = xs
        self.W = cum

    def _below(self, x):
        """Analytic continuation of W on [x, x_min] using profile(0)."""
        w0 = self.W[0]
        if self.a == -1.0:
            return w0 + self.phi0 * np.log(self.x_min / x)
        p = self.a + 1.0
        return w0 + self.phi0 * (self.x_min**p - np.asarray(x) ** p) / p

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.interp(x, self.xs, self.W, right=0.0)
        small = x < self.x_min
        if np.any(small):
            out = np.where(small, self._below(np.maximum(x, 1e-300)), out)
        return out


# ---------------------------------------------------------------------------
# kernel models


class HeatKernelModel:
    """Base class: a kernel family over a SpaceModel with profile sandwich
    Phi1 <= t^{nu/beta} p_t <= Phi2 valid for t < t0."""

    family = "custom"
    estimate_only = False

    def __init__(self, space: SpaceModel, t0: float = INF,
                 phi_lower: Callable | None = None,
                 phi_upper: Callable | None = None):
        self.space = space
        self.t0 = t0
        self.phi1 = phi_lower
        self.phi2 = phi_upper
        self._bound_constants: tuple[float, float] | None = None
        self._resolvent_cache: dict[float, Callable] = {}
        self._check_profile_order()
        self._check_h_phi2()

    # -- radial kernel interface ------------------------------------------

    def pt_radial(self, t: float, r):
        raise NotImplementedError

    def qt_radial(self, t: float) -> Callable:
        """Vectorized r -> int_0^t p_s(r) ds."""
        raise NotImplementedError

    def resolvent_scalar(self, alpha: float, r: float) -> float:
        raise NotImplementedError

    # -- shared machinery ---------------------------------------------------

    def _check_profile_order(self) -> None:
        if self.phi1 is None or self.phi2 is None:
            return
        us = np.geomspace(1e-4, 1e2, 64)
        lo, hi = np.asarray(self.phi1(us)), np.asarray(self.phi2(us))
        if np.any(lo > hi * (1.0 + 1e-9)):
            raise ValidationError("lower profile exceeds the upper profile")

    def _check_h_phi2(self) -> None:
        """Tail-ratio test of H(Phi2): int_1^inf (V(t) or t^nu) Phi2(t)/t dt."""
        if self.phi2 is None:
            return
        nu = self.space.nu
        V = self.space.volume_bound

        def h(t):
            t = np.asarray(t, dtype=float)
            vol = np.maximum(np.array([V(x) for x in np.atleast_1d(t)]), t**nu)
            return vol * np.asarray(self.phi2(t)) / t

        res = integrate_outward(h, 1.0)
        if res.diverged:
            raise ValidationError("Phi2 fails the integrability condition H(Phi2)")

    def resolvent_radial(self, alpha: float) -> Callable:
        """Cached vectorized r -> r_alpha(r) built from scalar quadratures."""
        key = float(alpha)
        if key not in self._resolvent_cache:
            self._resolvent_cache[key] = self._build_resolvent_interp(alpha)
        return self._resolvent_cache[key]

    def _build_resolvent_interp(self, alpha: float, n: int = 800) -> Callable:
        r_lo, r_hi = 1e-6, 1e-5
        while r_hi < 1e6 and self.resolvent_scalar(alpha, r_hi) > 1e-280:
            r_hi *= 2.0
        rs = np.geomspace(r_lo, r_hi, n)
        vals = np.array([self.resolvent_scalar(alpha, float(r)) for r in rs])
        pos = vals > 0.0
        rs, vals = rs[pos], vals[pos]
        log_r, log_v = np.log(rs), np.log(vals)
        from scipy.interpolate import PchipInterpolator

        spline = PchipInterpolator(log_r, log_v, extrapolate=False)
        at_zero = self.resolvent_scalar(alpha, 0.0)
        nu, beta = self.space.nu, self.space.beta

        def interp(r):
            r = np.asarray(r, dtype=float)
            lr = np.log(np.maximum(r, 1e-300))
            out = np.exp(np.nan_to_num(spline(lr), nan=-INF))
            out = np.where(lr > log_r[-1], 0.0, out)
            if math.isinf(at_zero):
                # continue the power/log divergence below the grid
                slope = (log_v[1] - log_v[0]) / (log_r[1] - log_r[0])
                small = r < rs[0]
                if np.any(small):
                    ext = np.exp(log_v[0] + slope * (np.log(np.maximum(r, 1e-300)) - log_r[0]))
                    out = np.where(small, ext, out)
                out = np.where(r == 0.0, INF, out)
            else:
                out = np.where(r < rs[0], at_zero, out)
            return out

        return interp

    # -- closed-form bound shapes ------------------------------------------

    def bound_constants(self) -> tuple[float, float]:
        if self._bound_constants is None:
            self._bound_constants = self._fit_bound_constants()
        return self._bound_constants

    def _fit_bound_constants(self) -> tuple[float, float]:
        nu, beta = self.space.nu, self.space.beta
        t_hi = min(self.t0, 0.4 if nu == beta else 1.0)
        ratios = []
        for t in np.geomspace(1e-3 * t_hi, 0.9 * t_hi, 8):
            for frac in np.geomspace(1e-4, 0.95, 10):
                d = (frac * t) ** (1.0 / beta)
                if nu == beta:
                    d = min(d, (0.9 * t) ** (2.0 / beta))
                    if d >= 1.0 / math.e:
                        continue
                q = float(self.qt_radial(t)(np.array([d]))[0])
                shape = _bound_shape(nu, beta, t, d)
                if math.isfinite(q) and shape > 0:
                    ratios.append(q / shape)
        if not ratios:
            raise ValidationError("no admissible (t, d) pairs to fit bound constants")
        return min(ratios), max(ratios)


def _bound_shape(nu: float, beta: float, t: float, d: float) -> float:
    if nu > beta:
        return d ** (beta - nu)
    if nu == beta:
        return math.log(1.0 / d)
    return t ** (1.0 - nu / beta)


@dataclass
class KernelBounds:
    lower: float
    upper: float
    shape: float
    constants_fitted: bool


class ScalingKernelModel(HeatKernelModel):
    """Kernel of exact scaling form p_t(r) = t^{-nu/beta} profile(r/t^{1/beta})."""

    family = "custom"

    def __init__(self, space: SpaceModel, profile: Callable, t0: float = INF,
                 phi_lower: Callable | None = None,
                 phi_upper: Callable | None = None,
                 estimate_only: bool = False):
        self.profile = profile
        self.estimate_only = estimate_only
        super().__init__(space, t0,
                         phi_lower if phi_lower is not None else profile,
                         phi_upper if phi_upper is not None else profile)
        self._tail_table: TailMomentTable | None = None

    def pt_radial(self, t: float, r):
        r = np.asarray(r, dtype=float)
        nu, beta = self.space.nu, self.space.beta
        return t ** (-nu / beta) * np.asarray(self.profile(r / t ** (1.0 / beta)))

    def _table(self) -> TailMomentTable:
        if self._tail_table is None:
            nu, beta = self.space.nu, self.space.beta
            self._tail_table = TailMomentTable(self.profile, nu - beta - 1.0)
        return self._tail_table

    def qt_radial(self, t: float) -> Callable:
        nu, beta = self.space.nu, self.space.beta
        table = self._table()
        phi0 = table.phi0

        def qt(r):
            r = np.asarray(r, dtype=float)
            with np.errstate(divide="ignore"):
                out = beta * r ** (beta - nu) * table(r / t ** (1.0 / beta))
            if nu >= beta:
                out = np.where(r == 0.0, INF, out)
            else:
                at0 = phi0 * t ** (1.0 - nu / beta) * beta / (beta - nu)
                out = np.where(r == 0.0, at0, out)
            return out

        return qt

    def resolvent_scalar(self, alpha: float, r: float) -> float:
        nu, beta = self.space.nu, self.space.beta
        if r == 0.0:
            if nu >= beta:
                return INF
            phi0 = float(np.asarray(self.profile(np.array([0.0])))[0])
            return phi0 * math.gamma(1.0 - nu / beta) * alpha ** (nu / beta - 1.0)

        # substitute u = r w: r_alpha(r) = beta int_0^inf e^{-alpha w^-beta}
        # w^{nu-beta-1} profile(r w) dw, which is O(1) across its support
        def f(w):
            return (
                math.exp(-alpha * w ** (-beta))
                * w ** (nu - beta - 1.0)
                * float(np.asarray(self.profile(np.array([r * w])))[0])
            )

        w_lo = (alpha / 40.0) ** (1.0 / beta)  # exp factor < e^-40 below
        w_hi = max(1.0, w_lo * 2.0)
        peak = max(f(max(w_hi, w_lo * 1.5)), f(w_hi * 4.0), 1e-300)
        while w_hi < 1e14 and f(w_hi) > 1e-18 * peak:
            w_hi *= 2.0
        # integrate in log space: the window can span many decades of w
        g = lambda v: f(math.exp(v)) * math.exp(v)
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(
                g, math.log(w_lo * 0.2), math.log(w_hi),
                epsabs=1e-300, epsrel=1e-11, limit=400,
                points=[math.log(w_lo),
                        math.log(min(max(1.0 / max(r, 1e-300), w_lo), w_hi))])
        return beta * val


class GaussianKernelModel(ScalingKernelModel):
    """Brownian heat kernel p_t(r) = (2 pi t)^{-d/2} exp(-r^2 / 2t)."""

    family = "gaussian"

    def __init__(self, dim: int):
        space = SpaceModel(ambient_dim=dim, nu=float(dim), beta=2.0)
        c = (2.0 * math.pi) ** (-dim / 2.0)
        profile = lambda u: c * np.exp(-np.asarray(u, dtype=float) ** 2 / 2.0)
        super().__init__(space, profile)
        self.dim = dim

    def qt_radial(self, t: float) -> Callable:
        d = self.dim

        def qt(r):
            r = np.asarray(r, dtype=float)
            if d == 1:
                return np.sqrt(2.0 * t / math.pi) * np.exp(-(r**2) / (2.0 * t)) - r * special.erfc(
                    r / math.sqrt(2.0 * t)
                )
            x = r**2 / (2.0 * t)
            if d == 2:
                with np.errstate(divide="ignore"):
                    out = special.exp1(x) / (2.0 * math.pi)
                return np.where(r == 0.0, INF, out)
            a = d / 2.0 - 1.0
            with np.errstate(divide="ignore"):
                out = (
                    (2.0 * math.pi) ** (-d / 2.0)
                    * (r**2 / 2.0) ** (1.0 - d / 2.0)
                    * math.gamma(a)
                    * special.gammaincc(a, x)
                )
            return np.where(r == 0.0, INF, out)

        return qt


class StableEstimateModel(ScalingKernelModel):
    """Midpoint of the two-sided alpha-stable estimate:
    p_t(r) = t^{-d/alpha} min(1, A (r/t^{1/alpha})^{-(d+alpha)}).

    For mass m > 0 the Psi correction is applied inside the jump density;
    the small-time branch is then valid only for t <= 1/m.
    """

    family = "stable_estimate"
    estimate_only = True

    def __init__(self, dim: int, alpha: float, m: float = 0.0):
        if not 0.0 < alpha < 2.0:
            raise DomainError("alpha must lie in ]0, 2[")
        self.dim = dim
        self.alpha = alpha
        self.m = m
        A = stable_jump_constant(dim, alpha)
        self.A = A
        space = SpaceModel(ambient_dim=dim, nu=float(dim), beta=alpha)
        t0 = INF if m == 0.0 else 1.0 / m
        if m == 0.0:
            phi1 = phi2 = lambda u: np.minimum(
                1.0, A * np.maximum(np.asarray(u, dtype=float), 1e-300) ** (-(dim + alpha))
            )
        else:
            psi_vec = np.vectorize(lambda u: relativistic_psi(dim, alpha, u))
            phi2 = lambda u: np.minimum(
                1.0, A * np.maximum(np.asarray(u, dtype=float), 1e-300) ** (-(dim + alpha))
            )
            phi1 = lambda u: np.minimum(
                1.0,
                A * psi_vec(np.asarray(u, dtype=float))
                * np.maximum(np.asarray(u, dtype=float), 1e-300) ** (-(dim + alpha)),
            )
        super().__init__(space, phi2, t0=t0, phi_lower=phi1, phi_upper=phi2,
                         estimate_only=True)

    def jump_density(self, r):
        r = np.asarray(r, dtype=float)
        if self.m == 0.0:
            return self.A * r ** (-(self.dim + self.alpha))
        psi = np.vectorize(
            lambda s: relativistic_psi(self.dim, self.alpha, self.m ** (1.0 / self.alpha) * s)
        )(r)
        return self.A * psi * r ** (-(self.dim + self.alpha))

    def pt_radial(self, t: float, r):
        r = np.asarray(r, dtype=float)
        d, a, m = self.dim, self.alpha, self.m
        if m > 0.0 and t > 1.0 / m:
            # large-time branch of the global relativistic estimate
            expo = np.minimum(m ** (1.0 / a) * r, m ** (2.0 / a - 1.0) * r**2 / t)
            return m ** (d / a - d / 2.0) * t ** (-d / 2.0) * np.exp(-expo)
        with np.errstate(divide="ignore"):
            jump = np.where(r > 0.0, t * self.jump_density(np.maximum(r, 1e-300)), INF)
        return np.minimum(t ** (-d / a), jump)

    def qt_radial(self, t: float) -> Callable:
        d, a, m = self.dim, self.alpha, self.m
        t_small = t if m == 0.0 else min(t, 1.0 / m)

        def qt(r):
            r = np.asarray(r, dtype=float)
            with np.errstate(divide="ignore"):
                J = np.where(r > 0.0, self.jump_density(np.maximum(r, 1e-300)), INF)
                s_star = np.where(r > 0.0, J ** (-a / (d + a)), 0.0)
            m1 = np.minimum(t_small, s_star)
            head = np.where(r > 0.0, 0.5 * J * m1**2, 0.0)
            if d == a:
                with np.errstate(divide="ignore", invalid="ignore"):
                    mid = np.log(np.maximum(t_small, 1e-300) / np.maximum(s_star, 1e-300))
            else:
                p = 1.0 - d / a
                with np.errstate(divide="ignore", invalid="ignore"):
                    mid = (t_small**p - s_star**p) / p
            out = head + np.where(t_small > s_star, mid, 0.0)
            if d >= a:
                out = np.where(r == 0.0, INF, out)
            else:
                out = np.where(r == 0.0, t_small ** (1.0 - d / a) / (1.0 - d / a), out)
            if m > 0.0 and t > 1.0 / m:
                out = out + _late_branch_integral(self, 1.0 / m, t, r)
            return out

        return qt

    def resolvent_scalar(self, alpha: float, r: float) -> float:
        d, a, m = self.dim, self.alpha, self.m
        if r == 0.0:
            if d >= a:
                return INF
            f0 = lambda s: math.exp(-alpha * s) * s ** (-d / a)
            val, _ = integrate.quad(f0, 0.0, np.inf, epsrel=1e-10, limit=400)
            return val
        if m == 0.0:
            return super().resolvent_scalar(alpha, r)
        J = float(self.jump_density(np.array([r]))[0])
        s_star = J ** (-a / (d + a))
        splits = sorted({s_star, 1.0 / m})
        f = lambda s: math.exp(-alpha * s) * float(self.pt_radial(s, np.array([r]))[0])
        T = max(1.0, splits[-1] * 2.0, 40.0 / alpha)
        total = 0.0
        lo = 0.0
        for s in [x for x in splits if x < T] + [T]:
            part, _ = integrate.quad(f, lo, s, epsrel=1e-10, limit=400)
            total += part
            lo = s
        tail, _ = integrate.quad(f, T, np.inf, epsrel=1e-8, limit=200)
        return total + tail


def _late_branch_integral(model: StableEstimateModel, t1: float, t2: float, r):
    """int_{t1}^{t2} p_s(r) ds over the large-time branch, vectorized in r."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    out = np.empty_like(r)
    for i, ri in enumerate(r):
        f = lambda s: float(model.pt_radial(s, np.array([ri]))[0])
        out[i], _ = integrate.quad(f, t1, t2, epsrel=1e-9, limit=200)
    return out


class StretchedExponentialModel(ScalingKernelModel):
    """Fractal-type kernel with a stretched-exponential profile.

    Evaluator uses the upper-estimate constants (c4, c2); the lower profile
    (c3, c1) enters only through the sandwich.  Exponent kappa is
    d_w / (d_J - 1); pass d_J = d_w for the usual carpet form.
    """

    family = "stretched_exponential"
    estimate_only = True

    def __init__(self, d_f: float, d_w: float, d_J: float,
                 c1: float, c2: float, c3: float, c4: float,
                 ambient_dim: int = 2):
        if c1 < c2 or c3 > c4:
            raise ValidationError("need c1 >= c2 and c3 <= c4 for Phi1 <= Phi2")
        kappa = d_w / (d_J - 1.0)
        self.kappa = kappa
        space = SpaceModel(ambient_dim=ambient_dim, nu=d_f, beta=d_w)
        profile = lambda u: c4 * np.exp(-c2 * np.asarray(u, dtype=float) ** kappa)
        phi1 = lambda u: c3 * np.exp(-c1 * np.asarray(u, dtype=float) ** kappa)
        super().__init__(space, profile, phi_lower=phi1, phi_upper=profile,
                         estimate_only=True)


# ---------------------------------------------------------------------------
# factory and evaluation helpers


def make_kernel_model(family: str, **kw) -> HeatKernelModel:
    if family == "gaussian":
        return GaussianKernelModel(dim=int(kw["dim"]))
    if family in ("stable_estimate", "relativistic"):
        m = float(kw.get("m", 0.0))
        if family == "relativistic" and m <= 0.0:
            raise DomainError("relativistic family requires m > 0")
        return StableEstimateModel(dim=int(kw["dim"]), alpha=float(kw["alpha"]), m=m)
    if family == "stretched_exponential":
        return StretchedExponentialModel(
            d_f=float(kw["d_f"]), d_w=float(kw["d_w"]),
            d_J=float(kw.get("d_J", kw["d_w"])),
            c1=float(kw.get("c1", 1.0)), c2=float(kw.get("c2", 1.0)),
            c3=float(kw.get("c3", 1.0)), c4=float(kw.get("c4", 1.0)),
            ambient_dim=int(kw.get("dim", 2)),
        )
    if family == "custom":
        space = SpaceModel(ambient_dim=int(kw.get("dim", 1)),
                           nu=float(kw["nu"]), beta=float(kw["beta"]))
        return ScalingKernelModel(space, kw["profile"],
                                  t0=float(kw.get("t0", INF)),
                                  phi_lower=kw.get("phi_lower"),
                                  phi_upper=kw.get("phi_upper"))
    raise DomainError(f"unknown kernel family {family!r}")


def synthetic_scaling_model(nu: float, beta: float, dim: int = 1) -> ScalingKernelModel:
    """Gaussian-profile kernel with arbitrary exponents, for regime tests."""
    space = SpaceModel(ambient_dim=dim, nu=nu, beta=beta)
    profile = lambda u: np.exp(-np.asarray(u, dtype=float) ** 2)
    return ScalingKernelModel(space, profile)


def _check_t(model: HeatKernelModel, t: float) -> None:
    if t <= 0:
        raise DomainError("t must be positive")
    if model.estimate_only and t >= model.t0:
        raise DomainError(f"t={t} is outside the estimate window ]0, {model.t0}[")


def eval_heat_kernel(model: HeatKernelModel, t: float, x, y) -> float:
    _check_t(model, t)
    r = model.space.distance(x, y)
    val = float(np.asarray(model.pt_radial(t, np.array([r])))[0])
    if not math.isfinite(val) or val < 0:
        raise AccuracyError(f"heat kernel evaluation overflowed at t={t}, r={r}",
                            best_estimate=val)
    return val


def eval_time_integrated_kernel(model: HeatKernelModel, t: float, x, y) -> float:
    """int_0^t p_s(x, y) ds; +inf sentinel when the integral diverges."""
    _check_t(model, t)
    r = model.space.distance(x, y)
    return float(np.asarray(model.qt_radial(t)(np.array([r])))[0])


def eval_resolvent_kernel(model: HeatKernelModel, alpha: float, x, y) -> float:
    """r_alpha(x, y) = int_0^inf e^{-alpha s} p_s(x, y) ds."""
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    r = model.space.distance(x, y)
    return model.resolvent_scalar(alpha, r)


def time_integrated_bounds(model: HeatKernelModel, t: float, x, y) -> KernelBounds:
    """Two-sided closed-form bounds on int_0^t p_s ds with fitted constants."""
    nu, beta = model.space.nu, model.space.beta
    d = model.space.distance(x, y)
    if t <= 0 or t > model.t0:
        raise DomainError("need 0 < t <= t0")
    if nu == beta:
        if max(d**beta, t) >= 0.5:
            raise DomainError("regime guard violated: d^beta v t < 1/2 (nu = beta)")
        if d >= 1.0 / math.e:
            raise DomainError("regime guard violated: d < 1/e (log kernel domain)")
    elif d**beta >= t:
        raise DomainError("regime guard violated: d(x,y)^beta < t")
    c_lo, c_hi = model.bound_constants()
    shape = _bound_shape(nu, beta, t, d)
    return KernelBounds(lower=c_lo * shape, upper=c_hi * shape, shape=shape,
                        constants_fitted=True)


# ---------------------------------------------------------------------------
# invariant suite used by the CLI kernel-check command


def kernel_invariant_suite(model: HeatKernelModel, n_samples: int = 1000,
                           seed: int = 0) -> list[tuple[str, int, int]]:
    """Run the structural kernel invariants; rows are (name, samples, failures)."""
    rng = np.random.default_rng(seed)
    rows = []

    # Phi1 <= Phi2 on sampled u
    us = rng.uniform(0.0, 10.0, size=256)
    fails = int(np.sum(np.asarray(model.phi1(us)) > np.asarray(model.phi2(us)) * (1 + 1e-9)))
    rows.append(("phi1 <= phi2", 256, fails))

    # sandwich on random (t, x, y) with t < t0
    t_hi = min(model.t0, 1.0)
    nu, beta = model.space.nu, model.space.beta
    fails = 0
    for _ in range(n_samples):
        t = float(rng.uniform(0.01, 0.99)) * t_hi
        r = float(rng.uniform(0.0, 3.0))
        p = float(np.asarray(model.pt_radial(t, np.array([r])))[0])
        u = r / t ** (1.0 / beta)
        lo = float(np.asarray(model.phi1(np.array([u])))[0]) * t ** (-nu / beta)
        hi = float(np.asarray(model.phi2(np.array([u])))[0]) * t ** (-nu / beta)
        if not (lo * (1 - 1e-9) - 1e-300 <= p <= hi * (1 + 1e-9) + 1e-300):
            fails += 1
    rows.append(("profile sandwich", n_samples, fails))

    # symmetry in (x, y)
    fails = 0
    dim = model.space.ambient_dim
    for _ in range(64):
        x, y = rng.normal(size=(2, dim))
        t = float(rng.uniform(0.05, 0.95)) * t_hi
        if eval_heat_kernel(model, t, x, y) != eval_heat_kernel(model, t, y, x):
            fails += 1
    rows.append(("symmetry", 64, fails))

    # time integral / resolvent bridge: int_0^t p_s ds <= e^{alpha t} r_alpha.
    # Estimate-only families realise q_t and r_alpha through separate
    # closed-form surrogates, so the bridge only holds up to the
    # comparability constant; allow that slack for them.
    slack = 8.0 if model.estimate_only else 1.0 + 1e-6
    fails = 0
    for _ in range(32):
        t = float(rng.uniform(0.05, 0.95)) * t_hi
        alpha = float(rng.uniform(0.5, 8.0))
        r = float(rng.uniform(0.05, 2.0))
        q = float(np.asarray(model.qt_radial(t)(np.array([r])))[0])
        ra = model.resolvent_scalar(alpha, r)
        if math.isfinite(q) and q > math.exp(alpha * t) * ra * slack:
            fails += 1
    rows.append(("q_t <= C e^{alpha t} r_alpha", 32, fails))

    return rows
