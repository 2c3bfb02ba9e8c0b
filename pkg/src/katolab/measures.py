"""Computable representations of positive measures, and integration of
possibly singular radial functions against them over balls and globally.

All integrands used by the classification pipeline are radial about the
integration center, so the core primitive per representation is the radial
mass density m_x(s) = d/ds mu(B_s(x)); ball and global integrals are then
one-dimensional quadratures with an inner dyadic cutoff sweep and a
geometric-decay divergence test.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .errors import DiagnosticsError, DomainError, ValidationError
from .profiles import RadialProfile
from .quadrature import INF, integrate_outward, integrate_to_zero
from .space import sphere_surface_area, unit_ball_volume


@dataclass
class FunctionalEstimate:
    """A numerical integral value with an error bar and divergence flag."""

    value: float
    error: float = 0.0
    stat_error: float = 0.0
    diverged: bool = False
    log_slope: float = 0.0
    method: str = "quadrature"
    n_centers: int = 0
    argmax_center: object = None

    def __float__(self) -> float:
        return INF if self.diverged else float(self.value)


def _check_hint(g_radial: Callable, r: float, hint: float | None) -> None:
    """Compare the observed blow-up of g over the cutoff grid with the
    caller's singularity hint; off by two orders of magnitude is an error."""
    if hint is None:
        return
    s_hi, s_lo = r * 2.0**-10, r * 2.0**-14
    g_hi = float(np.asarray(g_radial(np.array([s_hi])))[0])
    g_lo = float(np.asarray(g_radial(np.array([s_lo])))[0])
    if g_hi <= 0 or not math.isfinite(g_lo):
        return
    observed = g_lo / g_hi
    expected = (s_hi / s_lo) ** hint
    if observed > 100.0 * max(expected, 1.0):
        raise DiagnosticsError(
            f"observed singular growth {observed:.3g} exceeds hint "
            f"s^-{hint} (expected <= {expected:.3g}) by more than 2 orders"
        )


class MeasureRep:
    """Base class; subclasses are the five computable representations."""

    dim: int
    supports_kernel_criteria = True

    def radial_mass_density(self, x) -> Callable | None:
        """Vectorized s -> d/ds mu(B_s(x)), or None if unavailable."""
        return None

    def atom_at(self, x) -> float:
        """Mass of the atom located exactly at x (0 for diffuse measures)."""
        return 0.0

    def ball_mass(self, x, r: float) -> float:
        raise NotImplementedError

    def support_points(self, n: int, rng) -> list:
        """Representative centers on or near the support, for sup sweeps."""
        raise NotImplementedError


# ---------------------------------------------------------------------------
# representations


class Density(MeasureRep):
    """mu = f(y) dy on R^dim; f a pointwise density, optionally compactly
    supported in a ball of radius support_radius about the origin."""

    def __init__(self, f: Callable, dim: int, support_radius: float = INF,
                 constant: float | None = None, n_directions: int = 512,
                 seed: int = 2026):
        self.f = f
        self.dim = dim
        self.support_radius = support_radius
        self.constant = constant
        dirs = np.random.default_rng(seed).normal(size=(n_directions, dim))
        self._dirs = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)

    def radial_mass_density(self, x) -> Callable:
        d = self.dim
        area = sphere_surface_area(d)
        if self.constant is not None and math.isinf(self.support_radius):
            c = self.constant
            return lambda s: c * area * np.asarray(s, dtype=float) ** (d - 1)

        x = np.asarray(x, dtype=float)
        dirs = self._dirs

        def m(s):
            s = np.atleast_1d(np.asarray(s, dtype=float))
            # angular average of f over the sphere of radius s about x
            pts = x[None, None, :] + s[:, None, None] * dirs[None, :, :]
            vals = np.apply_along_axis(self.f, 2, pts)
            if math.isfinite(self.support_radius):
                vals = vals * (np.linalg.norm(pts, axis=2) <= self.support_radius)
            return vals.mean(axis=1) * area * s ** (d - 1)

        return m

    def ball_mass(self, x, r: float) -> float:
        if self.constant is not None and math.isinf(self.support_radius):
            return self.constant * unit_ball_volume(self.dim) * r**self.dim
        m = self.radial_mass_density(x)
        val, _ = integrate.quad(lambda s: float(m(np.array([s]))[0]), 0.0, r,
                                limit=200)
        return val

    def support_points(self, n: int, rng) -> list:
        origin = np.zeros(self.dim)
        if self.constant is not None and math.isinf(self.support_radius):
            return [origin]  # translation invariant
        scale = self.support_radius if math.isfinite(self.support_radius) else 1.0
        pts = [origin]
        pts += list(rng.normal(scale=scale, size=(n - 1, self.dim)))
        return pts


def lebesgue(dim: int) -> Density:
    return Density(lambda y: 1.0, dim=dim, constant=1.0)


class RadialDensity(MeasureRep):
    """mu = f(|y - o|) dy with a radial profile f about origin o."""

    def __init__(self, profile: RadialProfile, dim: int, origin=None,
                 support_radius: float = INF):
        self.profile = profile
        self.dim = dim
        self.origin = np.zeros(dim) if origin is None else np.asarray(origin, float)
        self.support_radius = support_radius

    def _angular_average(self, rho_x: float):
        """s -> average of f(|o + s*omega - ... |) over directions omega, i.e.
        mean of f(sqrt(rho_x^2 + s^2 + 2 rho_x s u)) with u distributed as
        cos(theta) on the sphere S^{dim-1}."""
        d = self.dim
        if d == 1:
            us, ws = np.array([-1.0, 1.0]), np.array([0.5, 0.5])
        else:
            nodes, gw = np.polynomial.legendre.leggauss(64)
            dens = (1.0 - nodes**2) ** ((d - 3) / 2.0)
            ws = gw * dens
            ws = ws / ws.sum()
            us = nodes

        f = self.profile

        def avg(s):
            s = np.atleast_1d(np.asarray(s, dtype=float))
            rad = np.sqrt(np.maximum(
                rho_x**2 + s[:, None] ** 2 + 2.0 * rho_x * s[:, None] * us[None, :],
                0.0))
            vals = f(rad)
            if math.isfinite(self.support_radius):
                vals = vals * (rad <= self.support_radius)
            return vals @ ws

        return avg

    def radial_mass_density(self, x) -> Callable:
        d = self.dim
        area = sphere_surface_area(d)
        rho_x = float(np.linalg.norm(np.asarray(x, float) - self.origin))
        if rho_x == 0.0:
            f = self.profile
            sup = self.support_radius

            def m0(s):
                s = np.asarray(s, dtype=float)
                vals = f(s)
                if math.isfinite(sup):
                    vals = vals * (s <= sup)
                return vals * area * s ** (d - 1)

            return m0
        avg = self._angular_average(rho_x)
        return lambda s: avg(s) * area * np.asarray(s, dtype=float) ** (d - 1)

    def ball_mass(self, x, r: float) -> float:
        m = self.radial_mass_density(x)
        val, _ = integrate.quad(lambda s: float(np.atleast_1d(m(s))[0]), 0.0, r,
                                limit=200, points=[r * 0.5])
        return val

    def support_points(self, n: int, rng) -> list:
        pts = [self.origin.copy()]
        for rad in np.geomspace(1e-2, 1.0, max(n - 1, 1)):
            u = rng.normal(size=self.dim)
            pts.append(self.origin + rad * u / np.linalg.norm(u))
        return pts[:n]


class PointMasses(MeasureRep):
    """Finite sum of weighted atoms."""

    def __init__(self, atoms: Sequence[tuple], dim: int | None = None):
        pts = [np.atleast_1d(np.asarray(p, dtype=float)) for p, _ in atoms]
        ws = [float(w) for _, w in atoms]
        if any(w < 0 for w in ws):
            raise ValidationError("atom weights must be nonnegative")
        self.points = (np.stack(pts) if pts
                       else np.zeros((0, dim if dim else 1)))
        self.weights = np.asarray(ws)
        self.dim = int(dim) if dim is not None else (self.points.shape[1] or 1)
        if pts and self.points.shape[1] != self.dim:
            raise ValidationError("atom coordinates do not match dim")

    def atom_at(self, x) -> float:
        if self.points.shape[0] == 0:
            return 0.0
        d = np.linalg.norm(self.points - np.atleast_1d(np.asarray(x, float)), axis=1)
        return float(self.weights[d == 0.0].sum())

    def distances_from(self, x):
        return np.linalg.norm(self.points - np.atleast_1d(np.asarray(x, float)),
                              axis=1)

    def ball_mass(self, x, r: float) -> float:
        return float(self.weights[self.distances_from(x) <= r].sum())

    def support_points(self, n: int, rng) -> list:
        return [p for p in self.points[:n]]


class SphereSurface(MeasureRep):
    """Uniform surface measure on a sphere of radius R in R^3, with given
    total mass.  All reductions below are exact: a sphere intersected with a
    ball centered at distance rho from its center has linear chord-length
    mass density (mass / 4 pi R^2) * 2 pi R s / rho on |rho - R| <= s <= rho + R.
    """

    def __init__(self, center, radius: float, total_mass: float, dim: int = 3):
        if dim != 3:
            raise DomainError("surface measure is implemented for dim=3 only")
        if radius <= 0 or total_mass < 0:
            raise ValidationError("need radius > 0 and total_mass >= 0")
        self.center = np.asarray(center, dtype=float)
        self.R = float(radius)
        self.mass = float(total_mass)
        self.dim = 3

    def radial_mass_density(self, x) -> Callable | None:
        rho = float(np.linalg.norm(np.asarray(x, float) - self.center))
        R, mass = self.R, self.mass
        if rho == 0.0:
            return None  # degenerate: all mass at distance exactly R
        lo, hi = abs(rho - R), rho + R
        c = mass / (2.0 * R * rho)

        def m(s):
            s = np.asarray(s, dtype=float)
            return np.where((s >= lo) & (s <= hi), c * s, 0.0)

        return m

    def ball_mass(self, x, r: float) -> float:
        rho = float(np.linalg.norm(np.asarray(x, float) - self.center))
        if rho == 0.0:
            return self.mass if r >= self.R else 0.0
        lo, hi = abs(rho - self.R), rho + self.R
        a, b = lo, min(r, hi)
        if b <= a:
            return 0.0
        return self.mass / (4.0 * self.R * rho) * (b**2 - a**2)

    def mc_ball_mass(self, x, r: float, n: int = 100_000, seed: int = 0):
        """Monte Carlo check of ball_mass: uniform surface sampling.
        Returns (estimate, two_sigma_error)."""
        rng = np.random.default_rng(seed)
        z = rng.uniform(-1.0, 1.0, size=n)
        phi = rng.uniform(0.0, 2.0 * math.pi, size=n)
        s = np.sqrt(1.0 - z**2)
        pts = self.center + self.R * np.stack(
            [s * np.cos(phi), s * np.sin(phi), z], axis=1)
        hit = np.linalg.norm(pts - np.asarray(x, float), axis=1) <= r
        p = hit.mean()
        se = math.sqrt(max(p * (1 - p), 1e-300) / n)
        return self.mass * p, 2.0 * self.mass * se

    def support_points(self, n: int, rng) -> list:
        pts = []
        for _ in range(n):
            u = rng.normal(size=3)
            pts.append(self.center + self.R * u / np.linalg.norm(u))
        return pts


class AhlforsAbstract(MeasureRep):
    """Oracle-only measure defined by its ball-mass envelope
    C1 r^eta <= mu(B_r(x)) <= C2 r^eta for r <= r0; the realized ball mass is
    the geometric midpoint sqrt(C1 C2) r^eta, constant beyond r0.

    Supports ball-mass and radial threshold tests only; there are no actual
    points, so kernel criteria that need sup over centers are unavailable.
    """

    supports_kernel_criteria = False

    def __init__(self, eta: float, c_lower: float, c_upper: float, r0: float,
                 dim: int = 1):
        if eta <= 0 or c_lower <= 0 or c_upper < c_lower or r0 <= 0:
            raise ValidationError("need eta > 0, 0 < C1 <= C2, r0 > 0")
        self.eta = eta
        self.c_lower = c_lower
        self.c_upper = c_upper
        self.r0 = r0
        self.c_mid = math.sqrt(c_lower * c_upper)
        self.dim = dim

    def ball_mass(self, x, r: float) -> float:
        return self.c_mid * min(r, self.r0) ** self.eta

    def radial_mass_density(self, x) -> Callable:
        eta, c, r0 = self.eta, self.c_mid, self.r0

        def m(s):
            s = np.asarray(s, dtype=float)
            return np.where(s <= r0, eta * c * s ** (eta - 1.0), 0.0)

        return m

    def support_points(self, n: int, rng) -> list:
        return [np.zeros(self.dim)]


# ---------------------------------------------------------------------------
# integration operations


def integrate_over_ball(mu: MeasureRep, x, r: float, g_radial: Callable,
                        hint: float | None = None,
                        n_levels: int = 16) -> FunctionalEstimate:
    """int_{B_r(x)} g(d(x,y)) mu(dy) with inner dyadic cutoff sweep.

    g_radial is vectorized in the distance s; hint, if given, is the expected
    blow-up exponent of g at 0 (g ~ s^-hint) and is cross-checked against the
    observed growth.
    """
    if r <= 0:
        raise DomainError("ball radius must be positive")
    if hint is None and isinstance(g_radial, RadialProfile):
        hint = g_radial.singularity
    _check_hint(g_radial, r, hint)

    if isinstance(mu, PointMasses):
        ds = mu.distances_from(x)
        inside = ds <= r
        ds, ws = ds[inside], mu.weights[inside]
        at_center = ds == 0.0
        total, diverged = 0.0, False
        if np.any(at_center):
            g0 = float(np.asarray(g_radial(np.array([0.0])))[0])
            if not math.isfinite(g0):
                diverged = True
            else:
                total += float(ws[at_center].sum()) * g0
        if np.any(~at_center):
            total += float(np.dot(ws[~at_center],
                                  np.asarray(g_radial(ds[~at_center]))))
        return FunctionalEstimate(INF if diverged else total, 0.0,
                                  diverged=diverged, method="atom-sum")

    m = mu.radial_mass_density(x)
    if m is None:  # sphere seen from its center
        assert isinstance(mu, SphereSurface)
        if r <= mu.R:
            return FunctionalEstimate(0.0, 0.0, method="exact")
        val = mu.mass * float(np.asarray(g_radial(np.array([mu.R])))[0])
        return FunctionalEstimate(val, 0.0, diverged=not math.isfinite(val),
                                  method="exact")

    h = lambda s: np.asarray(g_radial(s)) * np.asarray(m(s))
    res = integrate_to_zero(h, r, n_levels=n_levels)
    atom = mu.atom_at(x)
    value, diverged = res.value, res.diverged
    if atom > 0.0:
        g0 = float(np.asarray(g_radial(np.array([0.0])))[0])
        if math.isfinite(g0):
            value += atom * g0
        else:
            diverged = True
    return FunctionalEstimate(INF if diverged else value, res.quad_error,
                              diverged=diverged, log_slope=res.log_slope,
                              method="dyadic-quadrature")


def integrate_global(mu: MeasureRep, x, g_radial: Callable,
                     majorant: Callable | None = None,
                     r_split: float = 1.0, hint: float | None = None,
                     n_levels: int = 16) -> FunctionalEstimate:
    """Whole-space integral of g(d(x,y)) against mu.

    The ball B(x, r_split) is handled by integrate_over_ball; the exterior by
    outward quadrature of the radial reduction when one exists, otherwise by
    dyadic shells bounded with the supplied decreasing radial majorant.
    """
    head = integrate_over_ball(mu, x, r_split, g_radial, hint=hint,
                               n_levels=n_levels)
    if head.diverged:
        return head

    if isinstance(mu, PointMasses):
        ds = mu.distances_from(x)
        outside = ds > r_split
        tail = float(np.dot(mu.weights[outside],
                            np.asarray(g_radial(ds[outside]))))
        return FunctionalEstimate(head.value + tail, head.error,
                                  method="atom-sum")

    m = mu.radial_mass_density(x)
    if m is not None:
        res = integrate_outward(lambda s: np.asarray(g_radial(s)) * np.asarray(m(s)),
                                r_split)
        if res.diverged:
            return FunctionalEstimate(INF, 0.0, diverged=True,
                                      log_slope=res.log_slope,
                                      method="dyadic-quadrature")
        return FunctionalEstimate(head.value + res.value,
                                  head.error + res.quad_error,
                                  method="dyadic-quadrature")

    if majorant is None:
        raise DomainError("no radial reduction available; supply a majorant")
    total, rad = 0.0, r_split
    for _ in range(80):
        shell_mass = mu.ball_mass(x, 2.0 * rad) - mu.ball_mass(x, rad)
        inc = shell_mass * float(np.asarray(majorant(np.array([rad])))[0])
        total += inc
        rad *= 2.0
        if inc <= 1e-14 * max(total, 1e-300):
            return FunctionalEstimate(head.value + total, head.error,
                                      method="shell-majorant")
    return FunctionalEstimate(INF, 0.0, diverged=True, method="shell-majorant")


def make_measure(kind: str, **kw) -> MeasureRep:
    """Config-facing factory."""
    if kind == "lebesgue":
        return lebesgue(int(kw["dim"]))
    if kind == "density":
        return Density(kw["f"], dim=int(kw["dim"]),
                       support_radius=float(kw.get("support_radius", INF)))
    if kind == "radial_density":
        return RadialDensity(kw["profile"], dim=int(kw["dim"]),
                             origin=kw.get("origin"),
                             support_radius=float(kw.get("support_radius", INF)))
    if kind == "point_masses":
        return PointMasses(kw["atoms"], dim=kw.get("dim"))
    if kind == "sphere_surface":
        return SphereSurface(kw.get("center", np.zeros(3)),
                             radius=float(kw.get("radius", 1.0)),
                             total_mass=float(kw.get("total_mass", 1.0)))
    if kind == "ahlfors":
        return AhlforsAbstract(eta=float(kw["eta"]),
                               c_lower=float(kw.get("c_lower", 1.0)),
                               c_upper=float(kw.get("c_upper", 1.0)),
                               r0=float(kw.get("r0", 1.0)),
                               dim=int(kw.get("dim", 1)))
    raise DomainError(f"unknown measure kind {kind!r}")
