import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from bayeslb.info import (DiscreteChannel, DiscreteDistribution,
                          DistortionSpec, DistributionError,
                          InfoDensityDistribution, JointPMF, PriorSpec,
                          UnsupportedPairError, bec, bsc, binary_entropy,
                          binary_relative_entropy, channel_capacity,
                          conditional_mutual_information,
                          differential_entropy, entropy, identity_channel,
                          information_density, inv_binary_entropy,
                          inv_binary_entropy_floor, kl_divergence,
                          mutual_information, neyman_pearson_beta,
                          small_ball, small_ball_mc, std_normal_cdf,
                          unit_ball_volume, verify_np_properties)

import oracles

# 50-digit bisection values, see oracles.h2_mp / oracles.h2inv_mp
H2_03 = 0.88129089923069262
H2INV_05 = 0.11002786443835955
H2INV_075 = 0.21450174485982875


def test_binary_entropy_endpoints_and_symmetry():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == 1.0
    assert_allclose(binary_entropy(0.3), binary_entropy(0.7), rtol=0, atol=1e-15)
    assert_allclose(binary_entropy(0.3), H2_03, rtol=0, atol=1e-15)


def test_binary_entropy_rejects_outside_unit_interval():
    with pytest.raises(DistributionError):
        binary_entropy(-0.01)
    with pytest.raises(DistributionError):
        binary_entropy(1.01)


@pytest.mark.parametrize("y,expected", [(0.5, H2INV_05), (0.75, H2INV_075)])
def test_inv_binary_entropy_frozen_values(y, expected):
    assert_allclose(inv_binary_entropy(y), expected, rtol=0, atol=1e-11)


@given(st.floats(min_value=0.0, max_value=0.5))
@settings(max_examples=200, deadline=None)
def test_inv_binary_entropy_round_trip(p):
    assert abs(inv_binary_entropy(binary_entropy(p)) - p) < 1e-9


@given(st.floats(min_value=1e-6, max_value=1.0))
@settings(max_examples=200, deadline=None)
def test_inv_binary_entropy_floor_is_a_floor(y):
    """x/(2 log2(6/x)) never exceeds the true inverse."""
    assert inv_binary_entropy_floor(y) <= inv_binary_entropy(y) + 1e-12


def test_binary_relative_entropy_matches_kl():
    v = binary_relative_entropy(0.3, 0.1)
    w = kl_divergence([0.3, 0.7], [0.1, 0.9])
    assert_allclose(v, w, rtol=1e-14)


def test_entropy_uniform_and_deterministic():
    assert_allclose(entropy(np.full(8, 0.125)), 3.0, rtol=0, atol=1e-14)
    assert entropy([1.0, 0.0, 0.0]) == 0.0


def test_kl_divergence_zero_iff_equal():
    p = np.array([0.2, 0.3, 0.5])
    assert kl_divergence(p, p) == 0.0
    assert kl_divergence([0.5, 0.5, 0.0], [0.25, 0.25, 0.5]) > 0.0
    assert kl_divergence([0.5, 0.5], [1.0, 0.0]) == math.inf


def test_pmf_validation_rejects_rather_than_renormalizes():
    with pytest.raises(DistributionError):
        DiscreteDistribution(np.array([0.5, 0.5 + 1e-9]))
    with pytest.raises(DistributionError):
        DiscreteDistribution(np.array([0.5, -0.5, 1.0]))


def test_channel_compose_tensor_push():
    k = bsc(0.25)
    composed = k.compose(k)
    # two BSCs in series give a BSC with crossover 2e(1-e)
    assert_allclose(composed.rows[0, 1], 2 * 0.25 * 0.75, rtol=1e-15)
    prod = k.tensor(k)
    assert prod.num_inputs == 4 and prod.num_outputs == 4
    assert_allclose(prod.rows.sum(axis=1), 1.0, rtol=0, atol=1e-12)
    out = k.push(DiscreteDistribution(np.array([0.5, 0.5])))
    assert_allclose(out.probs, [0.5, 0.5], rtol=0, atol=1e-15)


def test_identity_channel_is_noiseless():
    joint = JointPMF.from_input_channel(
        DiscreteDistribution(np.full(4, 0.25)), identity_channel(4))
    assert_allclose(mutual_information(joint), 2.0, rtol=0, atol=1e-12)


def test_mutual_information_bsc_quarter():
    joint = JointPMF.from_input_channel(
        DiscreteDistribution(np.array([0.5, 0.5])), bsc(0.25))
    assert_allclose(mutual_information(joint), 1.0 - binary_entropy(0.25),
                    rtol=0, atol=1e-14)


def test_conditional_mutual_information_mixes():
    joints = [JointPMF.from_input_channel(
        DiscreteDistribution(np.array([0.5, 0.5])), bsc(e)) for e in (0.1, 0.4)]
    v = conditional_mutual_information([0.5, 0.5], joints)
    expected = 0.5 * (1 - binary_entropy(0.1)) + 0.5 * (1 - binary_entropy(0.4))
    assert_allclose(v, expected, rtol=1e-13)


def test_information_density_mean_is_mi():
    joint = JointPMF.from_input_channel(
        DiscreteDistribution(np.array([0.3, 0.7])), bsc(0.1))
    dens = information_density(joint)
    assert_allclose(dens.mean(), mutual_information(joint), rtol=0, atol=1e-12)


def test_information_density_tail_conventions():
    dens = InfoDensityDistribution(values=np.array([-1.0, 0.0, 2.0]),
                                   probs=np.array([0.2, 0.3, 0.5]))
    assert dens.prob_below(0.0) == pytest.approx(0.2)   # strict <
    assert dens.prob_at_least(0.0) == pytest.approx(0.8)
    assert dens.prob_below(3.0) == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# Neyman-Pearson


def test_np_beta_against_linear_program():
    rng = np.random.default_rng(7)
    for _ in range(25):
        k = rng.integers(2, 9)
        p = rng.dirichlet(np.ones(k))
        q = rng.dirichlet(np.ones(k))
        for alpha in (0.05, 0.3, 0.77, 1.0):
            mine = neyman_pearson_beta(alpha, p, q)
            lp = oracles.lp_np_beta(alpha, p, q)
            assert_allclose(mine, lp, rtol=0, atol=1e-9)


def test_np_beta_edge_levels():
    p = [0.5, 0.5]
    q = [0.9, 0.1]
    assert neyman_pearson_beta(0.0, p, q) == 0.0
    assert_allclose(neyman_pearson_beta(1.0, p, q), 1.0, rtol=0, atol=1e-12)


def test_np_beta_monotone_in_alpha():
    p = np.array([0.1, 0.2, 0.3, 0.4])
    q = np.array([0.4, 0.3, 0.2, 0.1])
    vals = [neyman_pearson_beta(a, p, q) for a in np.linspace(0, 1, 21)]
    assert all(b2 >= b1 - 1e-12 for b1, b2 in zip(vals, vals[1:]))


def test_np_properties_on_fixed_instance():
    rng = np.random.default_rng(3)
    p = rng.dirichlet(np.ones(5))
    q = rng.dirichlet(np.ones(5))
    channel = DiscreteChannel(rng.dirichlet(np.ones(4), size=5))
    report = verify_np_properties(p, q, channel,
                                  alphas=np.linspace(0.01, 0.99, 25),
                                  gammas=np.geomspace(0.1, 10, 9))
    assert report.max_violation <= 1e-9


# ---------------------------------------------------------------------------
# small-ball machinery


def test_unit_ball_volume_low_dimensions():
    assert_allclose(unit_ball_volume(1), 2.0, rtol=1e-14)
    assert_allclose(unit_ball_volume(2), math.pi, rtol=1e-14)
    assert_allclose(unit_ball_volume(3), 4.188790204786391, rtol=1e-14)


def test_small_ball_uniform01():
    prior = PriorSpec.uniform01()
    dist = DistortionSpec("absolute")
    assert_allclose(small_ball(prior, 0.1, dist), 0.2, rtol=1e-14)
    assert small_ball(prior, 0.8, dist) == 1.0


def test_small_ball_gaussian_is_centered_interval():
    prior = PriorSpec.gaussian(var=4.0)
    dist = DistortionSpec("absolute")
    expected = std_normal_cdf(0.5) - std_normal_cdf(-0.5)
    assert_allclose(small_ball(prior, 1.0, dist), expected, rtol=1e-12)


def test_small_ball_ball_prior_volume_ratio():
    prior = PriorSpec.ball(radius=2.0, dim=3)
    dist = DistortionSpec("l2r", r=1.0)
    assert_allclose(small_ball(prior, 1.0, dist), 0.125, rtol=1e-12)
    assert small_ball(prior, 2.5, dist) == 1.0


def test_small_ball_squared_reduces_to_absolute():
    prior = PriorSpec.uniform01()
    v1 = small_ball(prior, 0.04, DistortionSpec("squared"))
    v2 = small_ball(prior, 0.2, DistortionSpec("absolute"))
    assert_allclose(v1, v2, rtol=1e-14)


def test_small_ball_discrete_uniform():
    prior = PriorSpec.discrete_uniform(6)
    assert_allclose(small_ball(prior, 0.5, DistortionSpec("zero_one")),
                    1.0 / 6.0, rtol=1e-15)


def test_small_ball_unsupported_pair():
    with pytest.raises(UnsupportedPairError):
        small_ball(PriorSpec.hypercube(4), 0.1, DistortionSpec("absolute"))


def test_small_ball_mc_matches_closed_form():
    prior = PriorSpec.gaussian(var=1.0)
    dist = DistortionSpec("absolute")
    est, half = small_ball_mc(prior, 0.5, dist, reps=200000, seed=5)
    exact = small_ball(prior, 0.5, dist)
    assert abs(est - exact) <= 3 * half


def test_small_ball_mc_is_deterministic():
    prior = PriorSpec.ball(radius=1.0, dim=2)
    dist = DistortionSpec("l2r", r=2.0)
    a = small_ball_mc(prior, 0.3, dist, reps=20000, seed=11)
    b = small_ball_mc(prior, 0.3, dist, reps=20000, seed=11)
    assert a == b


def test_differential_entropy_gaussian():
    # (1/2) log2(2 pi e), the one-dimensional unit-variance value
    assert_allclose(differential_entropy(PriorSpec.gaussian(var=1.0)),
                    2.0470955851806411, rtol=1e-14)
    assert_allclose(differential_entropy(PriorSpec.uniform01()), 0.0,
                    rtol=0, atol=1e-14)


def test_differential_entropy_ball_is_log_volume():
    prior = PriorSpec.ball(radius=1.0, dim=3)
    assert_allclose(differential_entropy(prior),
                    math.log2(unit_ball_volume(3)), rtol=1e-14)


# ---------------------------------------------------------------------------
# capacity


def test_capacity_bsc_and_bec():
    assert_allclose(channel_capacity(bsc(0.11)), 1.0 - binary_entropy(0.11),
                    rtol=0, atol=1e-9)
    assert_allclose(channel_capacity(bec(0.3)), 0.7, rtol=0, atol=1e-9)


def test_capacity_useless_channel_is_zero():
    rows = np.array([[0.4, 0.6], [0.4, 0.6]])
    assert channel_capacity(DiscreteChannel(rows)) <= 1e-9


@given(st.integers(min_value=2, max_value=5), st.integers(min_value=0, max_value=10**6))
@settings(max_examples=40, deadline=None)
def test_capacity_bounded_by_log_alphabet(k, seed):
    rng = np.random.default_rng(seed)
    channel = DiscreteChannel(rng.dirichlet(np.ones(k), size=k))
    c = channel_capacity(channel, tol=1e-7)
    assert -1e-9 <= c <= math.log2(k) + 1e-9
