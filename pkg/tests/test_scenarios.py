import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from bayeslb.info import DistributionError, binary_entropy
from bayeslb.scenarios import (GAMMA_N_LIMIT, ScenarioSpec,
                               bern_uniform_conditional_mi, bern_uniform_mi,
                               feedback_zero_rate_exponent, fig2_data,
                               fig34_data, random_coding_exponent,
                               scenario_bern_bsc, scenario_bern_uniform,
                               scenario_bsc_bit, scenario_dglm_decentralized,
                               scenario_gauss_ball, scenario_gauss_gauss,
                               scenario_hide_seek, scenario_hypercube,
                               scenario_minimax_cube, scenario_noisy_ceo,
                               scenario_xor)

import oracles


def test_scenario_spec_validation():
    with pytest.raises(DistributionError):
        ScenarioSpec(tag="x", n=0)
    with pytest.raises(DistributionError):
        ScenarioSpec(tag="x", eps=0.6)
    with pytest.raises(DistributionError):
        ScenarioSpec(tag="x", delta=1.5)
    with pytest.raises(DistributionError):
        ScenarioSpec(tag="x", var_noise=0.0)
    with pytest.raises(DistributionError):
        ScenarioSpec(tag="x", r=0.5)


# ---------------------------------------------------------------------------
# Gaussian location, single processor


GG_LOWER = {1: 0.055389182840797376, 10: 0.023618026920019772,
            100: 0.0077943386102804492}
GG_MMAE = {1: 0.56418958354775629, 10: 0.24057124674551033,
           100: 0.079392481149321438}


@pytest.mark.parametrize("n", [1, 10, 100])
def test_gauss_gauss_frozen_values(n):
    report = scenario_gauss_gauss(ScenarioSpec(tag="gauss-gauss", n=n))
    assert_allclose(report.lower_bounds["corollary"].value, GG_LOWER[n],
                    rtol=1e-13)
    assert_allclose(report.upper_bounds["posterior_mean"],
                    math.sqrt(1.0 / (1.0 + n)), rtol=1e-14)
    assert_allclose(report.derived["mmae_exact"], GG_MMAE[n], rtol=1e-13)
    # posterior-mean absolute risk is sigma_post sqrt(2/pi)
    assert_allclose(report.derived["mmae_exact"],
                    oracles.mmae_gauss(math.sqrt(1.0 / (1.0 + n))), rtol=1e-13)


def test_gauss_gauss_sandwich_order():
    report = scenario_gauss_gauss(ScenarioSpec(tag="gauss-gauss", n=10))
    assert report.lower_bounds["corollary"].value \
        <= report.derived["mmae_exact"] \
        <= report.upper_bounds["posterior_mean"]


def test_gauss_gauss_s_half_chain_frozen():
    report = scenario_gauss_gauss(ScenarioSpec(tag="gauss-gauss", n=1))
    assert_allclose(report.lower_bounds["s_half_chain"].value,
                    0.07385224378772982, rtol=1e-13)


def test_gauss_gauss_asymptotic_flagged():
    report = scenario_gauss_gauss(ScenarioSpec(tag="gauss-gauss", n=100))
    assert report.lower_bounds["unconditioned_asymptotic"].asymptotic
    assert not report.lower_bounds["corollary"].asymptotic


# ---------------------------------------------------------------------------
# Bernoulli bias, clean samples


# digamma closed form, cross-checked against quadrature below
BU_MI = {1: 0.2786524795555183, 2: 0.47560079316552611,
         3: 0.62843868902713298, 10: 1.2320577353273232}


@pytest.mark.parametrize("n", sorted(BU_MI))
def test_bern_uniform_mi_frozen(n):
    assert_allclose(bern_uniform_mi(n), BU_MI[n], rtol=1e-13)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_bern_uniform_mi_matches_quadrature(n):
    assert_allclose(bern_uniform_mi(n), oracles.quad_bern_uniform_mi(n),
                    rtol=1e-9)


def test_bern_uniform_conditional_mi():
    assert_allclose(bern_uniform_conditional_mi(10),
                    bern_uniform_mi(20) - bern_uniform_mi(10), rtol=1e-13)
    assert_allclose(bern_uniform_conditional_mi(10), 0.42301472622798374,
                    rtol=1e-13)


def test_bern_uniform_report_frozen():
    report = scenario_bern_uniform(ScenarioSpec(tag="bern-uniform", n=100))
    assert_allclose(report.lower_bounds["finite"].value,
                    0.0021838020607828005, rtol=1e-12)
    assert_allclose(report.lower_bounds["asymptotic"].value,
                    0.0024933892525089542, rtol=1e-13)
    assert report.lower_bounds["asymptotic"].asymptotic
    assert_allclose(report.upper_bounds["sample_mean"],
                    0.040824829046386302, rtol=1e-14)


# ---------------------------------------------------------------------------
# Gaussian location, ball prior


def test_gauss_ball_asymptote_frozen():
    report = scenario_gauss_ball(ScenarioSpec(tag="gauss-ball", n=100))
    assert_allclose(report.lower_bounds["asymptotic"].value,
                    0.012533141373155003, rtol=1e-13)
    assert report.lower_bounds["asymptotic"].asymptotic
    assert_allclose(report.derived["ratio_to_upper"],
                    math.sqrt(2.0 * math.pi) / 20.0, rtol=1e-14)


def test_gauss_ball_mc_chain_deterministic_and_present():
    spec = ScenarioSpec(tag="gauss-ball", n=400, d=3)
    a = scenario_gauss_ball(spec, reps=20000, seed=4)
    b = scenario_gauss_ball(spec, reps=20000, seed=4)
    assert a.lower_bounds["finite_mc_weak"].value \
        == b.lower_bounds["finite_mc_weak"].value
    assert a.lower_bounds["finite_mc_sharp"].value > 0.0
    assert a.derived["p_hat"] > 0.5
    assert not a.lower_bounds["finite_mc_weak"].asymptotic


def test_gauss_ball_without_reps_has_no_mc_entries():
    report = scenario_gauss_ball(ScenarioSpec(tag="gauss-ball", n=100))
    assert "finite_mc_weak" not in report.lower_bounds


# ---------------------------------------------------------------------------
# single bit over a BSC


def test_bsc_bit_matches_bisection_oracle():
    report = scenario_bsc_bit(ScenarioSpec(tag="bsc-bit", eps=0.25, T=4))
    z = 0.75
    assert_allclose(report.lower_bounds["no_feedback"].value,
                    oracles.h2inv_mp(z ** 2 / math.sqrt(8.0)), atol=1e-10)
    assert_allclose(report.lower_bounds["feedback"].value,
                    oracles.h2inv_mp(z ** 4), atol=1e-10)
    assert report.upper_bounds["repetition"] == pytest.approx(z ** 2)


def test_bsc_bit_exponents():
    report = scenario_bsc_bit(ScenarioSpec(tag="bsc-bit", eps=0.25, T=4))
    base = 0.5 * math.log2(4.0 / 3.0)
    assert_allclose(report.derived["exponent_no_feedback"], base, rtol=1e-14)
    assert_allclose(report.derived["exponent_repetition"], base, rtol=1e-14)
    assert_allclose(report.derived["exponent_feedback"], 2 * base, rtol=1e-14)


def test_bsc_bit_needs_noisy_channel():
    with pytest.raises(DistributionError):
        scenario_bsc_bit(ScenarioSpec(tag="bsc-bit", eps=None, T=4))


# ---------------------------------------------------------------------------
# hypercube prior with per-coordinate bias


def test_hypercube_budget_terms_frozen():
    spec = ScenarioSpec(tag="hypercube", d=3, delta=0.6, b=2.0, T=2,
                        eps=0.1, p=0.3)
    report = scenario_hypercube(spec)
    terms = report.derived["mi_upper"].arguments["terms"]
    assert_allclose(terms["source"], 0.7261013586301195, rtol=1e-12)
    assert_allclose(terms["bits"], 0.626688, rtol=1e-12)
    assert_allclose(terms["capacity"], 0.3823231726157175, rtol=1e-12)
    assert_allclose(report.lower_bounds["bit_error"].value,
                    0.29299517191748237, rtol=1e-10)
    assert_allclose(report.lower_bounds["rate_per_coordinate"].value,
                    0.3788459353595643, rtol=1e-12)
    assert_allclose(report.derived["noisy_lossy_rate"],
                    0.34997757835164578, rtol=1e-12)
    assert_allclose(report.derived["rate_distortion"],
                    0.1187091007693073, rtol=1e-12)


def test_hypercube_zhang_comparison_crossover():
    # the competing coefficient passes 1 just below delta = 0.133
    spec = ScenarioSpec(tag="hypercube", d=1, delta=0.133, b=8.0, T=1, eps=0.1)
    report = scenario_hypercube(spec)
    assert_allclose(report.derived["zhang_mi_upper"], 1.0017904109605131,
                    rtol=1e-12)


def test_hypercube_infeasible_bit_error_flagged():
    # with no usable budget the binary-entropy argument leaves [0, 1]
    spec = ScenarioSpec(tag="hypercube", d=1, delta=1.0, b=100.0, T=50, eps=0.0)
    report = scenario_hypercube(spec)
    assert report.lower_bounds["bit_error"].value == 0.0


# ---------------------------------------------------------------------------
# quantization-rate curves


def test_fig2_header_and_coincidence_point():
    header, rows = fig2_data()
    assert header == ["delta", "blb_eta_1", "blb_eta_0.75", "blb_eta_0.5",
                      "tildeR", "R"]
    last = rows[-1]
    assert last[0] == pytest.approx(1.0)
    r_p = 1.0 - binary_entropy(0.3)
    assert_allclose(last[1], r_p, atol=1e-9)
    assert_allclose(last[4], r_p, atol=1e-9)
    assert_allclose(last[5], r_p, atol=1e-9)


def test_fig2_smaller_eta_dominates():
    header, rows = fig2_data()
    for row in rows:
        assert row[2] >= row[1] - 1e-12
        assert row[3] >= row[2] - 1e-12


def test_fig2_validates_inputs():
    with pytest.raises(DistributionError):
        fig2_data(p=0.6)
    with pytest.raises(DistributionError):
        fig2_data(etas=(0.0,))


# ---------------------------------------------------------------------------
# Bernoulli bias over a BSC


def test_bern_bsc_case1_frozen():
    report = scenario_bern_bsc(ScenarioSpec(tag="bern-bsc", n=256, b=4.0,
                                            eps=0.0, T=None))
    assert_allclose(report.lower_bounds["case1"].value,
                    0.011496232536607573, rtol=1e-13)
    assert_allclose(report.upper_bounds["case1"],
                    0.088015518153991439, rtol=1e-13)
    assert_allclose(report.derived["case1_floor"],
                    1.0 / (2.0 * math.e * 16.0), rtol=1e-14)
    assert_allclose(report.derived["case1_cap"], 1.41 / 16.0, rtol=1e-14)
    # with a noiseless link only sample and bit budgets can bind
    terms = report.lower_bounds["mi"].arguments["terms"]
    assert set(terms) == {"source", "bits"}


def test_bern_bsc_gamma_caveat_recorded():
    report = scenario_bern_bsc(ScenarioSpec(tag="bern-bsc", n=100, b=7.0,
                                            eps=0.1, T=40))
    assert GAMMA_N_LIMIT == -0.6
    assert "-0.6" in report.lower_bounds["mi"].arguments["caveat"]


def test_bern_bsc_case2_structure():
    report = scenario_bern_bsc(ScenarioSpec(tag="bern-bsc", n=100, b=7.0,
                                            eps=0.1, T=40))
    case2 = report.lower_bounds["case2"]
    first = case2.arguments["polynomial_term"]
    second = case2.arguments["exponential_term"]
    assert case2.value == pytest.approx(max(first, second))
    assert "case2" in report.upper_bounds


def test_bern_bsc_case2_upper_needs_valid_rate():
    # at T = 20 the message rate exceeds the linear regime of the exponent
    report = scenario_bern_bsc(ScenarioSpec(tag="bern-bsc", n=100, b=7.0,
                                            eps=0.1, T=20))
    assert "case2" not in report.upper_bounds
    assert "case2_upper_notice" in report.derived


def test_random_coding_exponent_frozen():
    assert_allclose(random_coding_exponent(0.1, 0.0), 0.32192809488736235,
                    rtol=1e-13)
    assert_allclose(feedback_zero_rate_exponent(0.1), 0.64231681400944387,
                    rtol=1e-13)


def test_capacity_feedback_exponent_ratio_window():
    # the ratio stays within [1, 9/8] strictly inside (2/9, 1/2)
    for eps in np.linspace(2.0 / 9.0 + 1e-3, 0.5 - 1e-3, 30):
        ratio = (1.0 - binary_entropy(eps)) / feedback_zero_rate_exponent(eps)
        assert 1.0 - 1e-12 <= ratio <= 9.0 / 8.0 + 1e-12


# ---------------------------------------------------------------------------
# decentralized Gaussian location


def test_dglm_channel_noise_term():
    spec = ScenarioSpec(tag="dglm", m=5, d=1, total_samples=100,
                        total_bits=20.0)
    report = scenario_dglm_decentralized(spec)
    assert_allclose(report.lower_bounds["decentralized"].value, 1.0 / 101.0,
                    rtol=1e-14)
    assert_allclose(report.derived["centralized_risk"], 1.0 / 101.0,
                    rtol=1e-14)
    assert_allclose(report.derived["bits_needed_for_centralized"],
                    3.4955610284446923, rtol=1e-13)


def test_dglm_requires_enough_samples():
    with pytest.raises(DistributionError):
        scenario_dglm_decentralized(ScenarioSpec(tag="dglm", m=5, d=1,
                                                 total_samples=3,
                                                 total_bits=10.0))


def test_dglm_bits_term_binds_when_starved():
    spec = ScenarioSpec(tag="dglm", m=2, d=1, total_samples=100,
                        total_bits=0.5)
    report = scenario_dglm_decentralized(spec)
    assert report.lower_bounds["decentralized"].arguments["active"] \
        == "decentralized_bits"
    assert report.lower_bounds["decentralized"].value > 1.0 / 101.0


# ---------------------------------------------------------------------------
# minimax cube


def test_minimax_cube_frozen():
    spec = ScenarioSpec(tag="minimax-cube", d=8, b=8.0, m=4, T=None)
    report = scenario_minimax_cube(spec)
    assert_allclose(report.lower_bounds["minimax"].value, 0.4, rtol=1e-14)


def test_minimax_cube_caps_at_prior_scale():
    spec = ScenarioSpec(tag="minimax-cube", d=5, b=0.0, m=10, T=None)
    report = scenario_minimax_cube(spec)
    assert_allclose(report.lower_bounds["minimax"].value, 1.0, rtol=1e-14)


# ---------------------------------------------------------------------------
# CEO sum rate


def test_ceo_scalar_gaussian_reduction():
    spec = ScenarioSpec(tag="ceo", d=1, r=2.0, var_w=2.0, m=3, T=None)
    report = scenario_noisy_ceo(spec, alpha=0.5)
    assert_allclose(report.lower_bounds["sum_rate_requirement"].value,
                    0.5 * math.log2(2.0 / 0.5), rtol=1e-13)


def test_ceo_zero_requirement_when_ball_is_big():
    spec = ScenarioSpec(tag="ceo", d=1, r=2.0, var_w=0.001, m=2, T=None)
    report = scenario_noisy_ceo(spec, alpha=100.0)
    assert report.lower_bounds["sum_rate_requirement"].value == 0.0
    assert report.lower_bounds["sum_rate_requirement"].clamped


# ---------------------------------------------------------------------------
# parity estimation


def test_xor_frozen_values():
    spec = ScenarioSpec(tag="xor", m=2, n=16, b=1.0)
    report = scenario_xor(spec)
    assert_allclose(report.lower_bounds["distributed"].value,
                    0.091970833025198246, rtol=1e-13)
    assert_allclose(report.lower_bounds["colocated"].value,
                    0.045985902883912077, rtol=1e-13)
    assert_allclose(report.derived["floor_no_bits"],
                    0.18393972058572116, rtol=1e-14)


def test_xor_penalty_scalings():
    spec = ScenarioSpec(tag="xor", m=2, n=16, b=1.0)
    report = scenario_xor(spec)
    assert_allclose(report.derived["penalty_colocated"],
                    1.0 / (2.0 * math.e * 4.0), rtol=1e-13)
    assert_allclose(report.derived["penalty_distributed"],
                    1.0 / (2.0 * math.e * 2.0), rtol=1e-13)


# ---------------------------------------------------------------------------
# hide and seek


def test_hide_seek_frozen_point():
    spec = ScenarioSpec(tag="hide-seek", m=10, d=512, b=1536.0, n=100,
                        rho_bias=0.01)
    report = scenario_hide_seek(spec)
    assert_allclose(report.lower_bounds["ours"].value, 0.84444444444444444,
                    rtol=1e-13)
    assert report.lower_bounds["shamir"].value == 0.0


FIG3_FROZEN = {1: (0.6111111111111112, 0.0), 10: (0.8611111111111112, 0.0),
               100: (0.8861111111111111, 0.5988559174789525),
               1000: (0.8886111111111111, 0.869140625)}


def test_fig3_rows_frozen():
    header, rows = fig34_data(rho_rule="quarter_n")
    assert header == ["n", "ours", "shamir"]
    table = {int(row[0]): (row[1], row[2]) for row in rows}
    for n, (ours, shamir) in FIG3_FROZEN.items():
        assert_allclose(table[n][0], ours, rtol=1e-12)
        assert_allclose(table[n][1], shamir, rtol=1e-12, atol=1e-15)


def test_fig34_ours_dominates_both_rules():
    for rule, rho in (("quarter_n", None), ("fixed", 0.01)):
        kwargs = {"rho_rule": rule}
        if rho is not None:
            kwargs["rho"] = rho
        _, rows = fig34_data(**kwargs)
        assert len(rows) == 1000
        for row in rows:
            assert row[1] >= row[2] - 1e-12
