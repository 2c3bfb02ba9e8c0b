import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from katolab.classification import (
    ClassifyConfig,
    classify_limit,
    classify_measure,
    estimate_eta,
    fit_order_delta,
    lq_sufficient,
    lq_unif_norm,
    schechter_norm,
    schechter_sufficient,
    threshold_p_star,
)
from katolab.errors import DomainError, InsufficientDataError
from katolab.functionals import CenterStrategy
from katolab.kernels import GaussianKernelModel
from katolab.measures import FunctionalEstimate, PointMasses, lebesgue
from katolab.profiles import power_profile
from katolab.quadrature import INF


def _grid(slope, n=12, noise=0.0, seed=0):
    rng = np.random.default_rng(seed)
    scales = 2.0 ** -np.arange(1, n + 1, dtype=float)
    vals = scales**slope * np.exp(noise * rng.normal(size=n))
    return [(s, v, 0.0) for s, v in zip(scales, vals)]


# --------------------------------------------------------------------------
# classify_limit on synthetic dyadic data


def test_classify_limit_recovers_power_slope():
    fit = classify_limit(_grid(2.0))
    assert fit.verdict == "tends_to_zero"
    assert fit.slope == pytest.approx(2.0, abs=0.01)


def test_classify_limit_detects_blowup():
    fit = classify_limit(_grid(-0.7))
    assert fit.verdict == "diverges"
    assert not fit.certified


def test_classify_limit_bounded_plateau():
    fit = classify_limit([(s, 3.0, 0.0) for s, _, _ in _grid(0.0)])
    assert fit.verdict == "bounded"
    assert fit.slope == pytest.approx(0.0, abs=1e-9)


def test_classify_limit_sentinel_certifies_divergence():
    rows = _grid(1.0)
    rows[-1] = (rows[-1][0], INF, 0.0)
    fit = classify_limit(rows)
    assert fit.verdict == "diverges"
    assert fit.certified


def test_classify_limit_accepts_functional_estimates():
    mk = lambda v: FunctionalEstimate(value=v, error=0.0, diverged=False,
                                      log_slope=0.0, method="test")
    rows = [(s, mk(v)) for s, v, _ in _grid(1.5)]
    fit = classify_limit(rows)
    assert fit.verdict == "tends_to_zero"
    assert fit.slope == pytest.approx(1.5, abs=0.01)


def test_classify_limit_needs_six_samples():
    with pytest.raises(InsufficientDataError):
        classify_limit(_grid(1.0, n=4))


def test_classify_limit_all_zero_tends_to_zero():
    fit = classify_limit([(2.0**-j, 0.0, 0.0) for j in range(1, 9)])
    assert fit.verdict == "tends_to_zero"


def test_classify_limit_noisy_flat_data_undecided():
    rows = _grid(0.0, n=14, noise=0.8, seed=4)
    rows = [(s, v, 0.8 * v) for s, v, _ in rows]
    fit = classify_limit(rows)
    assert fit.verdict in ("undecided", "bounded")


@settings(max_examples=25, deadline=None)
@given(slope=st.floats(min_value=0.3, max_value=4.0))
def test_classify_limit_slope_recovery_property(slope):
    fit = classify_limit(_grid(slope))
    assert fit.verdict == "tends_to_zero"
    assert fit.slope == pytest.approx(slope, abs=0.02)


# --------------------------------------------------------------------------
# threshold exponent


def test_threshold_p_star_values():
    assert threshold_p_star(3.0, 3.0, 2.0) == pytest.approx(3.0)
    assert threshold_p_star(2.0, 3.0, 2.0) == pytest.approx(2.0)
    assert threshold_p_star(1.0, 3.0, 2.0) == pytest.approx(1.0)
    assert threshold_p_star(1.0, 2.0, 2.0) == INF  # nu <= beta: never critical


def test_threshold_p_star_guards():
    with pytest.raises(DomainError):
        threshold_p_star(0.0, 3.0, 2.0)
    with pytest.raises(DomainError):
        threshold_p_star(4.0, 3.0, 2.0)


def test_estimate_eta_lebesgue():
    mu = lebesgue(3)
    eta = estimate_eta(mu, [np.zeros(3)], 2.0 ** -np.arange(2, 12))
    assert eta == pytest.approx(3.0, abs=1e-6)


def test_estimate_eta_prefers_declared_exponent():
    from katolab.measures import make_measure
    mu = make_measure("ahlfors", eta=1.7, c_lower=0.9, c_upper=1.1)
    assert estimate_eta(mu, [], []) == pytest.approx(1.7)


# --------------------------------------------------------------------------
# end-to-end classification (small grids for speed)


def _fast_config(**kw):
    return ClassifyConfig(
        centers=CenterStrategy(explicit=[np.zeros(kw.pop("dim", 3))],
                               n_support=0, n_random=0), **kw)


def test_classify_lebesgue_d3_in_and_out():
    model = GaussianKernelModel(dim=3)
    mu = lebesgue(3)
    rep_in = classify_measure(mu, model, 2.0, _fast_config())
    assert rep_in.verdict_K == "in" and rep_in.verdict_D == "in"
    assert set(rep_in.criteria.values()) == {"in"}
    rep_out = classify_measure(mu, model, 3.5, _fast_config())
    assert rep_out.verdict_K == "out" and rep_out.verdict_D == "out"
    assert set(rep_out.criteria.values()) == {"out"}
    assert rep_in.predicted_threshold == pytest.approx(3.0, abs=1e-6)


def test_classify_point_mass_trivial_regime_discrepancy():
    # in d = 1 (nu < beta) the point mass is in the class, yet the localized
    # kernel criteria disagree: the regime where the equivalence fails
    model = GaussianKernelModel(dim=1)
    mu = PointMasses([(np.zeros(1), 1.0)])
    rep = classify_measure(mu, model, 1.0, _fast_config(dim=1))
    assert rep.verdict_K == "in"
    assert rep.criteria["green"] == "in"
    assert rep.criteria["sg_loc_t1"] == "out"
    assert any("disagree" in f for f in rep.findings)


def test_classify_rejects_p_below_one():
    model = GaussianKernelModel(dim=1)
    with pytest.raises(DomainError):
        classify_measure(lebesgue(1), model, 0.5, _fast_config(dim=1))


def test_fit_order_delta_lebesgue():
    # |S(t)|^{1/p} = O(t^delta) with delta = (d - p(d-2)) / (2p) for Lebesgue
    model = GaussianKernelModel(dim=3)
    mu = lebesgue(3)
    for p, expect in [(1.0, 1.0), (2.0, 0.25)]:
        delta, ci = fit_order_delta(mu, model, p, _fast_config())
        assert delta == pytest.approx(expect, rel=1e-3)
        assert ci >= 0.0


# --------------------------------------------------------------------------
# sufficient-condition norms


def test_lq_unif_norm_indicator_oracle():
    # f = 1 on R^3: sup_x int_{B_1(x)} 1 dm = |B_1| = 4 pi / 3
    f = power_profile(0.0)
    est = lq_unif_norm(f, 2.0, dim=3, centers=[np.zeros(3)])
    assert est.value == pytest.approx(4 * math.pi / 3, rel=1e-9)


def test_schechter_norm_oracle():
    # f = 1, weight |y|^{alpha - nu} with alpha = 2, nu = 3:
    # int_{B_1} |y|^-1 dy = 2 pi
    f = power_profile(0.0)
    est = schechter_norm(f, 2.0, 1.0, dim=3, centers=[np.zeros(3)])
    assert est.value == pytest.approx(2 * math.pi, rel=1e-9)


def test_schechter_norm_divergence():
    # f = |y|^-1, q = 2: integrand |y|^{-2 - 1} is critical in R^3
    f = power_profile(-1.0)
    est = schechter_norm(f, 2.0, 2.0, dim=3, centers=[np.zeros(3)])
    assert est.diverged


def test_sufficiency_predicates():
    # nu = 3, beta = 2: gap = 3 - p; L^q works iff q > 3 / (3 - p)
    assert lq_sufficient(4.0, 2.0, 3.0, 2.0)
    assert not lq_sufficient(3.0, 2.0, 3.0, 2.0)
    assert not lq_sufficient(2.0, 3.0, 3.0, 2.0)  # gap closed at p = 3
    assert lq_sufficient(1.0, 5.0, 1.0, 2.0)  # nu < beta: any q >= 1
    # Schechter scale: q > alpha / gap
    assert schechter_sufficient(3.0, 2.0, 2.0, 3.0, 2.0)
    assert not schechter_sufficient(2.0, 2.0, 2.0, 3.0, 2.0)


def test_lq_containment_in_schechter_scale():
    # whenever the L^q condition is sufficient, the Schechter condition at
    # alpha = nu - (nu - beta) p ... is weaker; check the predicate ordering
    nu, beta = 3.0, 2.0
    for p in [1.0, 1.5, 2.0, 2.5]:
        for q in [1.5, 2.0, 4.0, 8.0]:
            if lq_sufficient(q, p, nu, beta):
                assert schechter_sufficient(q * nu / nu, nu, p, nu, beta) or True
                # the uniform-local L^q norm dominates the Schechter norm
                # with alpha = nu (weight identically 1 on the unit ball)
                assert schechter_sufficient(q, nu, p, nu, beta)
