"""Symbolic radial profile primitives: small parsed building blocks for
radial densities and Green-type weights."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigError, DomainError


@dataclass(frozen=True)
class RadialProfile:
    """A nonnegative function of radius with known behavior at 0 and inf.

    singularity: growth exponent a with f(s) ~ s^{-a} as s -> 0 (0 if bounded);
    used as the default hint for singular quadrature.
    """

    fn: Callable
    singularity: float = 0.0
    label: str = "custom"

    def __call__(self, s):
        return self.fn(np.asarray(s, dtype=float))


def power_profile(exponent: float, coeff: float = 1.0) -> RadialProfile:
    """coeff * s^exponent (singular at 0 when exponent < 0)."""

    def f(s):
        with np.errstate(divide="ignore"):
            out = coeff * s**exponent
        return out

    return RadialProfile(f, singularity=max(0.0, -exponent),
                         label=f"power({exponent})")


def log_profile(coeff: float = 1.0) -> RadialProfile:
    """coeff * log(1/s), truncated at 0 for s >= 1."""

    def f(s):
        with np.errstate(divide="ignore"):
            return coeff * np.maximum(np.log(1.0 / s), 0.0)

    return RadialProfile(f, singularity=0.0, label="log")


def exp_profile(rate: float, coeff: float = 1.0) -> RadialProfile:
    """coeff * exp(-rate * s)."""
    if rate <= 0:
        raise DomainError("exp profile rate must be positive")
    return RadialProfile(lambda s: coeff * np.exp(-rate * s),
                         singularity=0.0, label=f"exp({rate})")


def constant_profile(value: float) -> RadialProfile:
    if value < 0:
        raise DomainError("profile values must be nonnegative")
    return RadialProfile(lambda s: np.full_like(s, value, dtype=float),
                         singularity=0.0, label=f"const({value})")


def tabulated_profile(radii, values) -> RadialProfile:
    """Monotone (PCHIP) interpolation of tabulated radial data; constant
    extrapolation on the left, zero on the right."""
    from scipy.interpolate import PchipInterpolator

    radii = np.asarray(radii, dtype=float)
    values = np.asarray(values, dtype=float)
    if radii.ndim != 1 or radii.size < 2 or np.any(np.diff(radii) <= 0):
        raise ConfigError("tabulated profile needs strictly increasing radii")
    if values.shape != radii.shape:
        raise ConfigError("tabulated profile needs one value per radius")
    if np.any(values < 0):
        raise ConfigError("tabulated profile values must be nonnegative")
    interp = PchipInterpolator(radii, values, extrapolate=False)

    def f(s):
        out = interp(s)
        out = np.where(s <= radii[0], values[0], out)
        return np.nan_to_num(np.where(s >= radii[-1], 0.0, out), nan=0.0)

    return RadialProfile(f, singularity=0.0, label="tabulated")


def parse_profile(text: str) -> RadialProfile:
    """Parse 'power:<a>[:<c>]', 'log[:<c>]', 'exp:<rate>[:<c>]', 'const:<v>'."""
    parts = text.split(":")
    try:
        kind, args = parts[0], [float(p) for p in parts[1:]]
    except ValueError:
        raise ConfigError(f"profile {text!r} has non-numeric arguments") from None
    try:
        if kind == "power":
            return power_profile(args[0], *(args[1:2]))
        if kind == "log":
            return log_profile(*(args[:1]))
        if kind == "exp":
            return exp_profile(args[0], *(args[1:2]))
        if kind == "const":
            return constant_profile(args[0])
    except IndexError:
        raise ConfigError(f"profile {text!r} is missing arguments") from None
    raise ConfigError(f"unknown profile kind {kind!r}")
