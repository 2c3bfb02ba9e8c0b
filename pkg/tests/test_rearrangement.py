import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from katolab.errors import DomainError, ValidationError
from katolab.rearrangement import (
    DistributionFunction,
    check_decreasing,
    g_criterion,
    layer_cake_criterion,
    radial_criterion,
    right_continuous_inverse,
)
from katolab.space import unit_ball_volume


# --------------------------------------------------------------------------
# right-continuous inverse


def test_inverse_of_power_profile():
    inv = right_continuous_inverse(lambda s: np.asarray(s, float) ** -2.0)
    # f(s) = s^-2 => f^{-1}(t) = t^{-1/2}
    for t in [0.25, 1.0, 9.0]:
        assert inv(t) == pytest.approx(t**-0.5, rel=1e-8)


def test_inverse_handles_plateaus_right_continuously():
    # step function: f = 2 on [0, 1), f = 1 on [1, 3), f = 0 beyond
    def f(s):
        s = np.asarray(s, dtype=float)
        return np.where(s < 1.0, 2.0, np.where(s < 3.0, 1.0, 0.0))

    inv = right_continuous_inverse(f)
    assert inv(1.5) == pytest.approx(1.0, abs=1e-8)   # sup{s : f(s) > 1.5}
    assert inv(0.5) == pytest.approx(3.0, abs=1e-8)
    assert inv(2.5) == pytest.approx(0.0, abs=1e-12)


def test_inverse_rejects_increasing_profile():
    with pytest.raises(ValidationError):
        right_continuous_inverse(lambda s: np.asarray(s, dtype=float))


def test_inverse_domain_guard():
    inv = right_continuous_inverse(lambda s: np.exp(-np.asarray(s, float)))
    with pytest.raises(DomainError):
        inv(-1.0)


@settings(max_examples=20, deadline=None)
@given(a=st.floats(min_value=0.3, max_value=3.0))
def test_inverse_composition_identity(a):
    f = lambda s: (1.0 + np.asarray(s, dtype=float)) ** -a
    inv = right_continuous_inverse(f)
    for t in [0.1, 0.4, 0.9]:
        s = inv(t)
        # at continuity points f(f^{-1}(t)) = t
        assert float(np.asarray(f(np.array([s])))[0]) == pytest.approx(
            t, rel=1e-6)


# --------------------------------------------------------------------------
# distribution functions


def test_distribution_from_radial_power():
    # V = |x|^-1 in R^3: m(V >= t) = (4 pi / 3) t^-3
    dist = DistributionFunction.from_radial(
        lambda s: np.asarray(s, dtype=float) ** -1.0, d=3)
    for t in [0.5, 1.0, 2.0]:
        assert float(np.asarray(dist(t))) == pytest.approx(
            unit_ball_volume(3) * t**-3.0, rel=1e-7)


def test_distribution_from_density_matches_radial():
    f = lambda s: np.exp(-np.asarray(s, dtype=float) ** 2)
    exact = DistributionFunction.from_radial(f, d=2)
    sampled = DistributionFunction.from_density(
        lambda x: np.exp(-np.sum(np.asarray(x) ** 2, axis=-1)), d=2,
        n_samples=200_000, seed=3, t_grid=np.linspace(0.05, 1.0, 800))
    for t in [0.2, 0.5, 0.8]:
        assert float(np.asarray(sampled(t))) == pytest.approx(
            float(np.asarray(exact(t))), rel=5e-2)


# --------------------------------------------------------------------------
# criteria agreement: centered radial test vs layer-cake test


@pytest.mark.parametrize("expo", [-0.3, -0.8, -1.2])
def test_radial_and_layer_cake_agree_on_powers(expo):
    # V = |x|^expo in R^3, alpha = 2, p = 1: both tests reduce to the
    # integrability of r^{expo} near 0 against the weight r^{d - p(d-a) - 1}
    f = lambda s: np.asarray(s, dtype=float) ** expo
    val_r, ok_r = radial_criterion(f, d=3, alpha_exponent=2.0, p=1.0)
    dist = DistributionFunction.from_radial(f, d=3)
    val_l, ok_l = layer_cake_criterion(dist, d=3, alpha_exponent=2.0, p=1.0)
    assert ok_r and ok_l


def test_radial_criterion_detects_divergence():
    f = lambda s: np.asarray(s, dtype=float) ** -2.5
    val, ok = radial_criterion(f, d=3, alpha_exponent=2.0, p=1.0)
    assert not ok and val == math.inf
    dist = DistributionFunction.from_radial(f, d=3)
    val_l, ok_l = layer_cake_criterion(dist, d=3, alpha_exponent=2.0, p=1.0)
    assert not ok_l


def test_radial_criterion_power_oracle():
    # d=3, a=2, p=1: weight r^{d-p(d-a)-1} = r, so the test integral is
    # int_0^1 r * r^-0.5 dr = 2/3
    f = lambda s: np.asarray(s, dtype=float) ** -0.5
    val, ok = radial_criterion(f, d=3, alpha_exponent=2.0, p=1.0)
    assert ok
    assert val == pytest.approx(2.0 / 3.0, rel=1e-9)


def test_layer_cake_power_oracle():
    # V = |x|^-2 in R^3, alpha = 2, p = 1: m(V>=t) = omega_3 t^{-3/2},
    # exponent (d - p(d-a))/d = 2/3, so the tail integral from 1 is
    # omega_3^{2/3} * int_1^inf t^-1... diverges; use p slightly smaller
    dist = DistributionFunction.from_radial(
        lambda s: np.asarray(s, dtype=float) ** -2.0, d=3)
    # p = 0.8: exponent = (3 - 0.8)/3 -> tail t^{-1.1}, integral = 10 w^e
    val, ok = layer_cake_criterion(dist, d=3, alpha_exponent=2.0, p=0.8)
    expo = (3.0 - 0.8 * 1.0) / 3.0
    exact = unit_ball_volume(3) ** expo / (1.5 * expo - 1.0)
    assert ok
    assert val == pytest.approx(exact, rel=1e-3)


def test_layer_cake_exponent_guard():
    dist = DistributionFunction.from_radial(
        lambda s: np.asarray(s, dtype=float) ** -1.0, d=3)
    with pytest.raises(DomainError):
        layer_cake_criterion(dist, d=3, alpha_exponent=2.0, p=4.0)


def test_log_profile_borderline():
    # V = log(1/r) near 0 is in the class for every p in the power regime
    f = lambda s: np.maximum(np.log(1.0 / np.asarray(s, dtype=float)), 0.0)
    for p in [1.0, 2.0]:
        val, ok = radial_criterion(f, d=3, alpha_exponent=2.0, p=p)
        assert ok and math.isfinite(val)


# --------------------------------------------------------------------------
# moment-weighted tail criterion


def test_g_criterion_power_oracle():
    # G(s) = s^2, d = 3, alpha = 2, p = 2: exponent 1 - 3/2 = -1/2 applied
    # to G'(s) = 2s gives int_1^inf (2s)^{-1/2} ds = divergent; with
    # G(s) = s^4, G' = 4 s^3, exponent -1/2: int_1^inf (4 s^3)^{-1/2}
    # = (1/2) * int s^{-3/2} = 1/2 * 2 / 2 = 0.5... compute directly
    val, ok = g_criterion(lambda s: 4.0 * np.asarray(s, float) ** 3,
                          d=3, alpha_exponent=2.0, p=2.0)
    exact = 0.5 * 2.0 / 2.0 / 2.0  # 4^{-1/2} * int_1^inf s^{-3/2} ds = 1/2 * 2
    assert ok
    assert val == pytest.approx(0.5 * 2.0, rel=1e-8)


def test_g_criterion_requires_singular_regime():
    with pytest.raises(DomainError):
        g_criterion(lambda s: np.asarray(s, float), d=2, alpha_exponent=2.0,
                    p=2.0)


def test_g_criterion_warns_when_vacuous():
    # p small enough that 1 - d/(p(d-alpha)) >= 0 never happens for p >= 1
    # with d=3, alpha=2: q = 1 - 3/p >= 0 iff p >= 3
    with pytest.warns(UserWarning):
        g_criterion(lambda s: np.asarray(s, float), d=3, alpha_exponent=2.0,
                    p=4.0)


def test_g_criterion_rejects_infinite_moment():
    with pytest.raises(DomainError):
        g_criterion(lambda s: np.asarray(s, float), d=3, alpha_exponent=2.0,
                    p=2.0, moment=math.inf)


def test_check_decreasing_passes_constants():
    check_decreasing(lambda s: np.ones_like(np.asarray(s, dtype=float)))
