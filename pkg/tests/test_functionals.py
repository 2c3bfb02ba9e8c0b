import math
import os

import numpy as np
import pytest

from katolab.errors import DomainError
from katolab.functionals import (
    CenterStrategy,
    GreenKernelSpec,
    green_power_profile,
    green_value,
    kato_functional,
    resolvent_functional,
    semigroup_functional,
    sup_over_centers,
)
from katolab.kernels import GaussianKernelModel
from katolab.measures import FunctionalEstimate, PointMasses, lebesgue
from katolab.quadrature import INF
from katolab.space import SpaceModel


# --------------------------------------------------------------------------
# Green kernel spec


def test_green_regimes():
    assert GreenKernelSpec(nu=3.0, beta=2.0).regime == "power"
    assert GreenKernelSpec(nu=2.0, beta=2.0).regime == "log"
    assert GreenKernelSpec(nu=1.0, beta=2.0).regime == "trivial"


def test_green_value_power_and_log():
    spec = GreenKernelSpec(nu=3.0, beta=2.0)
    assert green_value(spec, 0.1) == pytest.approx(10.0, rel=1e-12)
    log_spec = GreenKernelSpec(nu=2.0, beta=2.0)
    assert green_value(log_spec, math.exp(-3.0)) == pytest.approx(3.0)
    with pytest.raises(DomainError):
        green_value(log_spec, 0.5)  # log kernel only defined on ]0, 1/e]


def test_green_power_profile_hint():
    spec = GreenKernelSpec(nu=3.0, beta=2.0)
    prof = green_power_profile(spec, 2.5)
    assert prof.singularity == pytest.approx(2.5)
    assert float(np.asarray(prof(np.array([0.5])))[0]) == pytest.approx(
        0.5 ** -2.5, rel=1e-12)


# --------------------------------------------------------------------------
# Kato functional against closed forms (Lebesgue, G(r) = r^{beta-nu})


def test_kato_functional_lebesgue_closed_form():
    # int_{B(0,r)} |y|^{-p} dy = 4 pi r^{3-p} / (3 - p) in R^3
    mu = lebesgue(3)
    spec = GreenKernelSpec(nu=3.0, beta=2.0)
    for p, r in [(1.0, 0.5), (2.0, 0.25), (2.5, 1.0)]:
        est = kato_functional(mu, spec, p, r, centers=[np.zeros(3)])
        exact = 4 * math.pi * r ** (3 - p) / (3 - p)
        assert est.value == pytest.approx(exact, rel=1e-9)


def test_kato_functional_divergence_at_critical_p():
    mu = lebesgue(3)
    spec = GreenKernelSpec(nu=3.0, beta=2.0)
    est = kato_functional(mu, spec, 3.0, 1.0, centers=[np.zeros(3)])
    assert est.diverged


def test_kato_functional_monotone_in_r():
    mu = lebesgue(3)
    spec = GreenKernelSpec(nu=3.0, beta=2.0)
    vals = [kato_functional(mu, spec, 1.5, r, centers=[np.zeros(3)]).value
            for r in [0.125, 0.25, 0.5, 1.0]]
    assert all(a <= b * (1 + 1e-12) for a, b in zip(vals, vals[1:]))


def test_kato_functional_off_center_is_smaller_for_radial_singularity():
    # the origin maximizes the ball integral of a kernel against Lebesgue
    # shifted by nothing; for a point mass the atom's location dominates
    mu = PointMasses([(np.zeros(3), 1.0)])
    spec = GreenKernelSpec(nu=3.0, beta=2.0)
    near = kato_functional(mu, spec, 1.0, 1.0,
                           centers=[np.array([0.5, 0.0, 0.0])])
    far = kato_functional(mu, spec, 1.0, 1.0,
                          centers=[np.array([0.9, 0.0, 0.0])])
    assert near.value > far.value


# --------------------------------------------------------------------------
# semigroup and resolvent functionals against conservation laws


def test_semigroup_functional_mass_conservation():
    # p = 1, mu = Lebesgue: int q_t(y) dy = t for the conservative kernel
    mu = lebesgue(3)
    model = GaussianKernelModel(dim=3)
    for t in [0.5, 0.125]:
        est = semigroup_functional(mu, model, 1.0, t, centers=[np.zeros(3)])
        assert est.value == pytest.approx(t, rel=1e-6)


def test_resolvent_functional_mass_conservation():
    # p = 1, mu = Lebesgue: int r_alpha(y) dy = 1/alpha
    mu = lebesgue(2)
    model = GaussianKernelModel(dim=2)
    for a in [1.0, 16.0]:
        est = resolvent_functional(mu, model, 1.0, a, centers=[np.zeros(2)])
        assert est.value == pytest.approx(1.0 / a, rel=1e-4)


def test_point_mass_resolvent_closed_form():
    # delta_0 in d = 1: sup_x r_alpha(x, 0) = r_alpha(0) = 1/sqrt(2 alpha)
    mu = PointMasses([(np.zeros(1), 1.0)])
    model = GaussianKernelModel(dim=1)
    for a in [2.0, 8.0]:
        est = resolvent_functional(mu, model, 1.0, a, centers=[np.zeros(1)])
        assert est.value == pytest.approx(1.0 / math.sqrt(2 * a), rel=1e-6)


def test_localized_functional_vanishes_far_from_support():
    mu = PointMasses([(np.array([10.0]), 1.0)])
    model = GaussianKernelModel(dim=1)
    est = semigroup_functional(mu, model, 1.0, 0.5,
                               centers=[np.zeros(1)], localized_radius=1.0)
    assert est.value == 0.0


def test_semigroup_resolvent_bridge():
    # q_t-functional <= e^{alpha t} * r_alpha-functional at p = 1
    mu = lebesgue(1)
    model = GaussianKernelModel(dim=1)
    t, a = 0.25, 2.0
    q = semigroup_functional(mu, model, 1.0, t, centers=[np.zeros(1)]).value
    ra = resolvent_functional(mu, model, 1.0, a, centers=[np.zeros(1)]).value
    assert q <= math.exp(a * t) * ra * (1 + 1e-6)


def test_semigroup_functional_monotone_in_t():
    mu = lebesgue(3)
    model = GaussianKernelModel(dim=3)
    vals = [semigroup_functional(mu, model, 2.0, t,
                                 centers=[np.zeros(3)]).value
            for t in [0.05, 0.1, 0.2, 0.4]]
    assert all(a <= b * (1 + 1e-9) for a, b in zip(vals, vals[1:]))


def test_translation_invariance_of_global_functional():
    mu = lebesgue(2)
    model = GaussianKernelModel(dim=2)
    v0 = semigroup_functional(mu, model, 1.5, 0.2, centers=[np.zeros(2)]).value
    v1 = semigroup_functional(mu, model, 1.5, 0.2,
                              centers=[np.array([3.0, -1.0])]).value
    assert v0 == pytest.approx(v1, rel=1e-9)


def test_domain_guards():
    mu = lebesgue(1)
    model = GaussianKernelModel(dim=1)
    with pytest.raises(DomainError):
        semigroup_functional(mu, model, 1.0, -0.5, centers=[np.zeros(1)])
    with pytest.raises(DomainError):
        resolvent_functional(mu, model, 1.0, 0.0, centers=[np.zeros(1)])


def test_kernel_criteria_rejected_for_abstract_measure():
    from katolab.measures import make_measure
    mu = make_measure("ahlfors", eta=1.0, c_lower=0.9, c_upper=1.1)
    model = GaussianKernelModel(dim=1)
    with pytest.raises(DomainError):
        semigroup_functional(mu, model, 1.0, 0.5, centers=[np.zeros(1)])


# --------------------------------------------------------------------------
# center strategy and sup reduction


def test_center_strategy_includes_support_points():
    mu = PointMasses([(np.array([2.0]), 1.0)])
    pts = CenterStrategy(explicit=[np.zeros(1)], n_support=4,
                         n_random=2, seed=3).build(mu)
    assert any(np.allclose(c, [2.0]) for c in pts)
    assert any(np.allclose(c, [0.0]) for c in pts)


def test_center_strategy_deterministic_in_seed():
    mu = lebesgue(2)
    a = CenterStrategy(n_random=5, seed=11).build(mu)
    b = CenterStrategy(n_random=5, seed=11).build(mu)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))


def test_sup_over_centers_divergence_wins():
    mk = lambda v, d: FunctionalEstimate(value=v, error=0.0, diverged=d,
                                         log_slope=0.0, method="test")
    ests = {0: mk(1.0, False), 1: mk(INF, True), 2: mk(2.0, False)}
    est, _ = sup_over_centers([0, 1, 2], lambda c: ests[c])
    assert est.diverged
    assert est.n_centers == 3


def test_sup_over_centers_tracks_argmax():
    mk = lambda v: FunctionalEstimate(value=v, error=0.0, diverged=False,
                                      log_slope=0.0, method="test")
    est, arg = sup_over_centers(["a", "b", "c"],
                                lambda c: mk({"a": 1.0, "b": 5.0, "c": 2.0}[c]))
    assert est.value == 5.0
    assert est.argmax_center == "b"


def test_thread_cap_env(monkeypatch):
    from katolab.functionals import _n_threads
    monkeypatch.setenv("KATOLAB_THREADS", "1")
    assert _n_threads() == 1
