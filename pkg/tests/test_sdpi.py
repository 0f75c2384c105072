import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from bayeslb.info import DiscreteChannel, DiscreteDistribution, DistributionError, bec, bsc
from bayeslb.sdpi import (ContractionEstimate, bsc_product_dobrushin,
                          dobrushin, dobrushin_bern_uniform_posterior,
                          doeblin_bound, eta_bec, eta_bsc, eta_closed_form,
                          eta_gaussian, eta_multi_use, eta_numeric,
                          gaussian_sample_mean_eta, pairwise_ratio_bound,
                          sufficient_statistic_reduction, tensorized_eta)

import oracles

FAIR = DiscreteDistribution(np.array([0.5, 0.5]))


@pytest.mark.parametrize("eps", [0.0, 0.1, 0.25, 0.4, 0.5])
def test_eta_bsc_closed_form(eps):
    assert_allclose(eta_bsc(eps).value, (1.0 - 2.0 * eps) ** 2, rtol=0, atol=1e-15)
    assert eta_bsc(eps).kind == "exact"


def test_eta_bec_and_gaussian():
    assert eta_bec(0.3).value == pytest.approx(0.7)
    assert eta_gaussian(0.6).value == pytest.approx(0.36)


def test_eta_closed_form_dispatch():
    assert eta_closed_form("bsc", 0.25).value == pytest.approx(0.25)
    assert eta_closed_form("bec", 0.25).value == pytest.approx(0.75)
    with pytest.raises(DistributionError):
        eta_closed_form("awgn", 0.25)


def test_dobrushin_bsc_is_one_minus_two_eps():
    assert_allclose(dobrushin(bsc(0.2)).value, 0.6, rtol=0, atol=1e-15)


def test_dobrushin_dominates_eta_numeric_on_bsc():
    est = eta_numeric(FAIR, bsc(0.2))
    assert est.value <= dobrushin(bsc(0.2)).value + 1e-9


def test_doeblin_bound_bsc():
    # columnwise minima sum to 2 eps, so the bound is 1 - 2 eps
    assert_allclose(doeblin_bound(bsc(0.25)).value, 0.5, rtol=0, atol=1e-15)


def test_eta_numeric_bsc_tolerance_window():
    for eps in (0.1, 0.25, 0.4):
        est = eta_numeric(FAIR, bsc(eps))
        dev = est.value - (1.0 - 2.0 * eps) ** 2
        assert -1e-3 <= dev <= 1e-9
        assert est.kind == "numeric_lower_estimate"


def test_eta_numeric_bec():
    mu = DiscreteDistribution(np.array([0.5, 0.5]))
    est = eta_numeric(mu, bec(0.25))
    dev = est.value - 0.75
    assert -1e-3 <= dev <= 1e-9


def test_eta_numeric_deterministic_given_seed():
    a = eta_numeric(FAIR, bsc(0.3), seed=2)
    b = eta_numeric(FAIR, bsc(0.3), seed=2)
    assert a.value == b.value


@given(st.integers(min_value=0, max_value=10**6))
@settings(max_examples=15, deadline=None)
def test_eta_numeric_below_dobrushin(seed):
    """The numeric lower estimate can never exceed the Dobrushin coefficient."""
    rng = np.random.default_rng(seed)
    channel = DiscreteChannel(rng.dirichlet(np.full(3, 2.0), size=2))
    mu = DiscreteDistribution(rng.dirichlet(np.ones(2)))
    est = eta_numeric(mu, channel, restarts=4, seed=seed)
    assert est.value <= dobrushin(channel).value + 1e-9


def test_pairwise_ratio_bound_bsc049():
    # alpha = 0.49/0.51 per output, so the n-sample bound is 1 - (49/51)^n
    bound = pairwise_ratio_bound(bsc(0.49), n=100)
    assert_allclose(bound.alpha, 49.0 / 51.0, rtol=1e-15)
    assert_allclose(bound.forward.value, 0.98169412919139994, rtol=1e-13)
    assert not bound.degenerate


def test_pairwise_ratio_bound_degenerate_when_support_differs():
    rows = np.array([[1.0, 0.0], [0.5, 0.5]])
    bound = pairwise_ratio_bound(DiscreteChannel(rows))
    assert bound.degenerate
    assert bound.forward.value == 1.0


def test_bsc_product_dobrushin_frozen():
    # (1/sqrt(10)) 0.6^5 subtracted from one, for eps = 0.1 over T = 5 uses
    assert_allclose(bsc_product_dobrushin(0.1, 5), 0.97541012891453068,
                    rtol=1e-14)


def test_eta_multi_use_product_rule():
    est = eta_multi_use(0.25, 4)
    assert_allclose(est.value, 1.0 - 0.75 ** 4, rtol=1e-15)
    assert_allclose(est.value, 0.68359375, rtol=0, atol=1e-15)


def test_eta_multi_use_non_feedback_bsc_takes_min():
    est = eta_multi_use(eta_bsc(0.1).value, 5, feedback=False, bsc_eps=0.1)
    assert_allclose(est.value, 0.9754101289145307, rtol=1e-13)
    fb = eta_multi_use(eta_bsc(0.1).value, 5, feedback=True, bsc_eps=0.1)
    assert fb.value >= est.value


@given(st.floats(min_value=0.0, max_value=1.0), st.integers(min_value=1, max_value=30))
@settings(max_examples=100, deadline=None)
def test_eta_multi_use_monotone_in_T(eta, T):
    assert eta_multi_use(eta, T + 1).value >= eta_multi_use(eta, T).value - 1e-15


def test_tensorized_eta_takes_max():
    est = tensorized_eta([eta_bsc(0.25), eta_bec(0.5)])
    assert est.value == pytest.approx(0.5)


def test_sufficient_statistic_reduction_weakens_kind():
    est = sufficient_statistic_reduction(gaussian_sample_mean_eta(10, 1.0, 1.0))
    assert est.value == pytest.approx(10.0 / 11.0)
    assert est.kind == "upper_bound"


def test_gaussian_sample_mean_eta_frozen():
    assert_allclose(gaussian_sample_mean_eta(10, 1.0, 1.0).value,
                    0.9090909090909091, rtol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_posterior_dobrushin_matches_quadrature(n):
    v = dobrushin_bern_uniform_posterior(n)
    assert_allclose(v, oracles.beta_posterior_tv_extremes(n), rtol=0, atol=1e-10)
    assert_allclose(v, 1.0 - 2.0 ** (-n), rtol=0, atol=1e-12)


def test_contraction_estimate_validation():
    with pytest.raises(DistributionError):
        ContractionEstimate(1.5, "exact")
    with pytest.raises(DistributionError):
        ContractionEstimate(0.5, "guess")
