"""Worked estimation scenarios with closed-form lower and upper bounds.

Each ``scenario_*`` function evaluates one model end to end: the closed-form
risk lower bounds, the matching achievability (upper) formulas, and the
auxiliary quantities (capacities, contraction coefficients, exponents) that
go into them. Asymptotic entries are flagged and must not be used in hard
lower-vs-upper comparisons. ``fig2_data`` and ``fig34_data`` emit the rows
behind the quantization-rate and hide-and-seek comparison plots.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import digamma, gammaln
from scipy.stats import ncx2

from .bounds import BoundReport
from .info import (
    DistributionError,
    binary_entropy,
    inv_binary_entropy,
    unit_ball_volume,
)

__all__ = [
    "ScenarioSpec",
    "ScenarioReport",
    "bern_uniform_mi",
    "bern_uniform_conditional_mi",
    "scenario_gauss_gauss",
    "scenario_bern_uniform",
    "scenario_gauss_ball",
    "scenario_bsc_bit",
    "scenario_hypercube",
    "fig2_data",
    "scenario_bern_bsc",
    "scenario_dglm_decentralized",
    "scenario_minimax_cube",
    "scenario_noisy_ceo",
    "scenario_xor",
    "scenario_hide_seek",
    "fig34_data",
]

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class ScenarioSpec:
    """Parameter bundle for a scenario evaluation.

    Only the fields a given scenario reads need to be set; the rest keep
    their defaults. ``T=None`` means the channel-use budget is not binding
    (noiseless-style evaluations drop the capacity term). ``eps=None`` with
    no explicit ``capacity``/``eta_uses`` means a noiseless channel.
    """

    tag: str
    n: int = 1
    b: float = 0.0
    T: int | None = 1
    m: int = 1
    d: int = 1
    eps: float | None = None
    var_w: float = 1.0
    var_noise: float = 1.0
    delta: float = 1.0
    rho_bias: float = 0.0
    radius: float = 1.0
    total_samples: int | None = None
    total_bits: float | None = None
    total_uses: int | None = None
    feedback: bool = False
    r: float = 1.0
    p: float | None = None
    capacity: float | None = None
    eta_uses: float | None = None

    def __post_init__(self):
        if self.n < 1 or self.m < 1 or self.d < 1:
            raise DistributionError("sample, processor and dimension counts must be >= 1")
        if self.T is not None and self.T < 1:
            raise DistributionError("channel-use count must be >= 1 when set")
        if self.b < 0.0:
            raise DistributionError("bit budget cannot be negative")
        if self.eps is not None and not 0.0 <= self.eps <= 0.5:
            raise DistributionError("crossover probability must lie in [0, 1/2]")
        if not 0.0 <= self.delta <= 1.0:
            raise DistributionError("bias delta must lie in [0, 1]")
        if not 0.0 <= self.rho_bias <= 0.5:
            raise DistributionError("coordinate bias must lie in [0, 1/2]")
        if self.p is not None and not 0.0 <= self.p <= 0.5:
            raise DistributionError("target distortion must lie in [0, 1/2]")
        if self.r < 1.0:
            raise DistributionError("norm exponent must be >= 1")
        if self.var_w <= 0.0 or self.var_noise <= 0.0 or self.radius <= 0.0:
            raise DistributionError("variances and radius must be positive")


@dataclass(frozen=True)
class ScenarioReport:
    tag: str
    lower_bounds: dict = field(default_factory=dict)
    upper_bounds: dict = field(default_factory=dict)
    derived: dict = field(default_factory=dict)


def _bsc_eta_multi(eps: float, T: int | None) -> float:
    if T is None:
        return 1.0
    return 1.0 - (4.0 * eps * (1.0 - eps)) ** T


def _channel_profile(spec: ScenarioSpec, uses: int | None = None) -> tuple[float, float]:
    """Per-protocol (eta over the channel uses, capacity per use)."""
    T = spec.T if uses is None else uses
    if spec.eta_uses is not None:
        eta_T = spec.eta_uses
    elif spec.eps is not None:
        eta_T = _bsc_eta_multi(spec.eps, T)
    else:
        eta_T = 1.0
    if spec.capacity is not None:
        cap = spec.capacity
    elif spec.eps is not None:
        cap = 1.0 - binary_entropy(spec.eps)
    else:
        cap = 1.0
    return eta_T, cap


# ---------------------------------------------------------------------------
# scalar Gaussian mean, Gaussian prior


def scenario_gauss_gauss(spec: ScenarioSpec) -> ScenarioReport:
    """Gaussian mean with Gaussian prior under absolute loss.

    The finite-n lower bound conditions on an independent sample copy; the
    posterior-mean estimator gives the matching upper bound. The report also
    carries the pre-weakening value of the conditioning chain at s = 1/2 and
    the unconditioned asymptotic bound that loses a log factor.
    """
    snr = spec.n * spec.var_w / spec.var_noise
    scale = math.sqrt(math.pi * spec.var_w / (2.0 * (1.0 + snr)))
    lower = BoundReport(scale / 16.0, "gauss-gauss-lower", {"s": 0.5}, {"n": spec.n})
    s_half = BoundReport((snr + 1.0) / (8.0 * (2.0 * snr + 1.0)) * scale,
                         "gauss-gauss-s-half-chain", {"s": 0.5}, {"n": spec.n})
    log_snr = math.log2(1.0 + snr)
    if log_snr > 0.0:
        asym = BoundReport(
            math.sqrt(math.pi * spec.var_w / (1.0 + snr)) / (4.0 * log_snr),
            "gauss-gauss-unconditioned", {}, {"n": spec.n}, asymptotic=True)
    else:
        asym = BoundReport(0.0, "gauss-gauss-unconditioned", {}, {"n": spec.n},
                           asymptotic=True, infeasible=True)
    posterior_var = spec.var_w / (1.0 + snr)
    i_cond = 0.5 * math.log2((1.0 + 2.0 * snr) / (1.0 + snr))
    return ScenarioReport(
        spec.tag,
        lower_bounds={"corollary": lower, "s_half_chain": s_half,
                      "unconditioned_asymptotic": asym},
        upper_bounds={"posterior_mean": math.sqrt(posterior_var)},
        derived={
            "i_cond_bits": i_cond,
            "posterior_std": math.sqrt(posterior_var),
            "mmae_exact": math.sqrt(2.0 * posterior_var / math.pi),
            "envelope_slope": math.sqrt(
                (2.0 / math.pi) * (1.0 / spec.var_w + spec.n / spec.var_noise)),
        })


# ---------------------------------------------------------------------------
# Bernoulli bias, uniform prior


def bern_uniform_mi(n: int) -> float:
    """I(W; X^n) in bits for W ~ U[0,1] and X_i ~ Bern(W).

    The sample sum K is sufficient and uniform on {0, ..., n}, so
    I = log2(n+1) - H(K|W). The conditional entropy has an exact digamma
    form obtained by integrating the binomial log-likelihood against the
    Beta(k+1, n-k+1) weights.
    """
    if n < 1:
        raise DistributionError("need at least one sample")
    k = np.arange(n + 1, dtype=float)
    log_binom = gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)
    inner = log_binom + k * digamma(k + 1.0) + (n - k) * digamma(n - k + 1.0) \
        - n * digamma(n + 2.0)
    return math.log2(n + 1.0) + float(inner.sum()) / ((n + 1.0) * _LN2)


def bern_uniform_conditional_mi(n: int) -> float:
    """I(W; X^n | X'^n) with X'^n an independent conditional sample copy."""
    return bern_uniform_mi(2 * n) - bern_uniform_mi(n)


def scenario_bern_uniform(spec: ScenarioSpec) -> ScenarioReport:
    n = spec.n
    i_cond = bern_uniform_conditional_mi(n)
    envelope_const = 2.0 + math.sqrt(math.pi * n / 2.0)
    finite = BoundReport(
        2.0 ** (-2.0 * (i_cond + 1.0)) / (4.0 * envelope_const),
        "bern-uniform-finite", {"s": 0.5, "i_cond": i_cond}, {"n": n})
    asym = BoundReport(1.0 / (16.0 * math.sqrt(2.0 * math.pi * n)),
                       "bern-uniform-asymptotic", {}, {"n": n}, asymptotic=True)
    return ScenarioReport(
        spec.tag,
        lower_bounds={"finite": finite, "asymptotic": asym},
        upper_bounds={"sample_mean": 1.0 / math.sqrt(6.0 * n)},
        derived={"i_cond_bits": i_cond, "i_n_bits": bern_uniform_mi(n),
                 "envelope_const": envelope_const})


# ---------------------------------------------------------------------------
# d-dimensional Gaussian mean, uniform prior on a ball


def _posterior_mass_in_ball(spec: ScenarioSpec, reps: int, seed: int) -> np.ndarray:
    """Monte Carlo draws of the posterior normalizing mass c_n(sample mean).

    Given the mean of n Gaussian observations of a ball-uniform W, the mass
    the untruncated Gaussian posterior puts inside the ball is a noncentral
    chi-square tail and is evaluated exactly per draw.
    """
    d, n = spec.d, spec.n
    sigma2, a = spec.var_noise, spec.radius
    rng = np.random.Generator(np.random.Philox(key=seed))
    direction = rng.normal(size=(reps, d))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    w = a * direction * rng.random(reps)[:, None] ** (1.0 / d)
    xbar = w + math.sqrt(sigma2 / n) * rng.normal(size=(reps, d))
    noncentrality = n * (xbar * xbar).sum(axis=1) / sigma2
    return ncx2.cdf(a * a * n / sigma2, d, noncentrality)


def scenario_gauss_ball(spec: ScenarioSpec, reps: int | None = None,
                        seed: int = 0, concentration_delta: float = 0.05,
                        ) -> ScenarioReport:
    """Gaussian mean with uniform prior on the radius-a ball, l2 loss.

    The asymptotic lower bound and the sample-mean upper bound are closed
    forms. With ``reps`` set, the finite-n information-density chain is
    evaluated by Monte Carlo: the probability that the posterior mass inside
    the ball exceeds 1/(1+delta) feeds both the sharp-constant chain and the
    weakened-constant chain that the asymptote is derived from.
    """
    d, n = spec.d, spec.n
    sigma2, a = spec.var_noise, spec.radius
    asym_value = math.sqrt(2.0 * math.pi * sigma2 * d / n) / 20.0
    lower = {
        "asymptotic": BoundReport(asym_value, "gauss-ball-asymptotic", {},
                                  {"n": n, "d": d}, asymptotic=True),
    }
    derived = {
        "ratio_to_upper": math.sqrt(2.0 * math.pi) / 20.0,
        "mmse_lower_asymptotic": asym_value ** 2,
        "mmse_upper": sigma2 * d / n,
    }
    if reps is not None:
        if reps < 1:
            raise DistributionError("replication count must be >= 1")
        delta = concentration_delta
        if delta <= 0.0:
            raise DistributionError("concentration margin must be positive")
        mass = _posterior_mass_in_ball(spec, reps, seed)
        p_hat = float(np.mean(mass > 1.0 / (1.0 + delta)))
        gap = p_hat - 0.5
        root_term = math.sqrt(2.0 * math.pi * sigma2 / n)
        sharp = (1.0 / (2.0 * (1.0 + delta))) ** (1.0 / d) \
            * unit_ball_volume(d) ** (-1.0 / d) * root_term * gap
        # the root (1/(2(1+delta)))^{1/d} is at least 1/2 whenever
        # 2(1+delta) <= 2^d; outside that regime keep the plain reciprocal
        weak_const = 0.5 if 2.0 * (1.0 + delta) <= 2.0 ** d else 0.5 / (1.0 + delta)
        weak = weak_const * (math.sqrt(d) / 5.0) * root_term * gap
        mc_args = {"p_hat": p_hat, "delta": delta, "reps": reps, "seed": seed}
        lower["finite_mc_sharp"] = BoundReport(
            max(sharp, 0.0), "gauss-ball-mc-sharp", dict(mc_args), {"n": n, "d": d},
            clamped=sharp < 0.0)
        lower["finite_mc_weak"] = BoundReport(
            max(weak, 0.0), "gauss-ball-mc-weak", dict(mc_args), {"n": n, "d": d},
            clamped=weak < 0.0)
        derived["p_hat"] = p_hat
    return ScenarioReport(
        spec.tag, lower_bounds=lower,
        upper_bounds={"sample_mean": math.sqrt(sigma2 * d / n)},
        derived=derived)


# ---------------------------------------------------------------------------
# one bit over a BSC


def scenario_bsc_bit(spec: ScenarioSpec) -> ScenarioReport:
    """Equiprobable bit sent over T uses of a BSC, with and without feedback."""
    if spec.eps is None or not 0.0 < spec.eps < 0.5:
        raise DistributionError("this scenario needs a crossover in (0, 1/2)")
    eps, T = spec.eps, spec.T
    if T is None:
        raise DistributionError("this scenario needs a finite use count")
    z = 4.0 * eps * (1.0 - eps)
    no_fb = inv_binary_entropy(z ** (T / 2.0) / math.sqrt(2.0 * T))
    fb = inv_binary_entropy(z ** T)
    exponent = 0.5 * math.log2(1.0 / z)
    return ScenarioReport(
        spec.tag,
        lower_bounds={
            "no_feedback": BoundReport(no_fb, "bsc-bit-no-feedback", {},
                                       {"eps": eps, "T": T}),
            "feedback": BoundReport(fb, "bsc-bit-feedback", {},
                                    {"eps": eps, "T": T}),
        },
        upper_bounds={"repetition": z ** (T / 2.0)},
        derived={
            "exponent_no_feedback": exponent,
            "exponent_feedback": 2.0 * exponent,
            "exponent_repetition": exponent,
        })


# ---------------------------------------------------------------------------
# uniform hypercube parameter observed through per-coordinate flips


def scenario_hypercube(spec: ScenarioSpec) -> ScenarioReport:
    """Uniform W on {-1,1}^d observed coordinatewise with bias delta.

    Emits the three-term information budget, the Zhang-style comparison
    value, the average-bit-error lower bound, and (when a target distortion
    p is set) the quantization-rate lower bound next to the asymptotic
    noisy-lossy rate and the rate-distortion function.
    """
    d, b, delta = spec.d, spec.b, spec.delta
    eta_T, cap = _channel_profile(spec)
    i_wx = d * (1.0 - binary_entropy((1.0 - delta) / 2.0))
    ct = cap * spec.T if spec.T is not None else math.inf
    terms = {
        "source": i_wx * eta_T,
        "bits": delta * delta * b * eta_T,
        "capacity": delta * delta * ct,
    }
    active = min(terms, key=terms.get)
    mi_ub = BoundReport(terms[active], "hypercube-mi-ub",
                        {"active": active, "terms": terms},
                        {"d": d, "b": b, "delta": delta, "eta_T": eta_T})
    if delta < 1.0:
        zhang = 32.0 * delta * delta * min(d, b) / (1.0 - delta) ** 4
    else:
        zhang = math.inf
    arg = 1.0 - terms[active] / d
    if 0.0 <= arg <= 1.0:
        bit_error = BoundReport(inv_binary_entropy(arg), "hypercube-bit-error",
                                {"h2_arg": arg}, {"d": d})
    else:
        bit_error = BoundReport(0.0, "hypercube-bit-error", {"h2_arg": arg},
                                {"d": d}, infeasible=True)
    lower = {"bit_error": bit_error}
    derived = {"mi_upper": mi_ub, "zhang_mi_upper": zhang, "eta_T": eta_T,
               "capacity": cap}
    if spec.p is not None:
        p = spec.p
        derived["rate_distortion"] = 1.0 - binary_entropy(p)
        if delta > 0.0 and eta_T > 0.0:
            lower["rate_per_coordinate"] = BoundReport(
                (1.0 - binary_entropy(p)) / (delta * delta * eta_T),
                "hypercube-rate-lb", {}, {"p": p, "delta": delta, "eta_T": eta_T})
        if (1.0 - delta) / 2.0 <= p:
            derived["noisy_lossy_rate"] = 1.0 - binary_entropy(
                (2.0 * p + delta - 1.0) / (2.0 * delta))
    return ScenarioReport(spec.tag, lower_bounds=lower, upper_bounds={},
                          derived=derived)


def fig2_data(p: float = 0.3, delta_grid=None, etas=(1.0, 0.75, 0.5)):
    """Quantization-rate comparison rows: one per delta, one bound per eta.

    Returns (header, rows) where each row is
    (delta, rate bound at each eta, asymptotic noisy-lossy rate, R(p)).
    The rate bound treats eta as the end-to-end contraction of the uses.
    """
    if not 0.0 < p < 0.5:
        raise DistributionError("target distortion must lie in (0, 1/2)")
    for eta in etas:
        if not 0.0 < eta <= 1.0:
            raise DistributionError("contraction values must lie in (0, 1]")
    if delta_grid is None:
        delta_grid = np.linspace(1.0 - 2.0 * p, 1.0, 61)
    rate = 1.0 - binary_entropy(p)
    header = ["delta"] + [f"blb_eta_{eta:g}" for eta in etas] + ["tildeR", "R"]
    rows = []
    for delta in np.asarray(delta_grid, dtype=float):
        if not 1.0 - 2.0 * p <= delta <= 1.0 or delta <= 0.0:
            raise DistributionError("delta grid outside the feasible range")
        bounds = [rate / (delta * delta * eta) for eta in etas]
        tilde = 1.0 - binary_entropy((2.0 * p + delta - 1.0) / (2.0 * delta))
        rows.append((float(delta), *bounds, tilde, rate))
    return header, rows


# ---------------------------------------------------------------------------
# Bernoulli bias over a BSC


GAMMA_N_LIMIT = -0.6


def random_coding_exponent(eps: float, rate: float) -> float:
    """E_r(rate) for a BSC in the low-rate linear regime."""
    return 1.0 - math.log2(1.0 + math.sqrt(4.0 * eps * (1.0 - eps))) - rate


def feedback_zero_rate_exponent(eps: float) -> float:
    return -math.log2(eps ** (1.0 / 3.0) * (1.0 - eps) ** (2.0 / 3.0)
                      + eps ** (2.0 / 3.0) * (1.0 - eps) ** (1.0 / 3.0))


def scenario_bern_bsc(spec: ScenarioSpec) -> ScenarioReport:
    """Bernoulli bias with uniform prior, quantized and sent over a BSC.

    The information budget fixes the Clarke-Barron correction at its limit
    value -0.6 for every n, so the budget (and anything derived from it) is
    asymptotic whenever that term is active. The two special regimes are
    evaluated when their premises hold: quantization-limited (eps = 0) and
    channel-limited (b large enough to carry the sample mean exactly).
    """
    if spec.eps is None:
        raise DistributionError("this scenario needs a crossover probability")
    eps, n, b, T = spec.eps, spec.n, spec.b, spec.T
    if T is None and eps > 0.0:
        raise DistributionError("this scenario needs a finite use count")
    eta_T = _bsc_eta_multi(eps, T)
    eta_stat = 1.0 - 2.0 ** (-n)
    cap = 1.0 - binary_entropy(eps)
    terms = {
        "source": (0.5 * math.log2(n) + GAMMA_N_LIMIT) * eta_T,
        "bits": eta_stat * b * eta_T,
    }
    if eps > 0.0:
        # with a noiseless link the delivered bits are the only channel
        # constraint, so the use-count term applies to the noisy case only
        terms["capacity"] = eta_stat * cap * T
    active = min(terms, key=terms.get)
    i_star = terms[active]
    lower = {
        "mi": BoundReport(2.0 ** (-i_star) / (2.0 * math.e), "bern-bsc-mi",
                          {"active": active, "terms": terms,
                           "caveat": "gamma_n held at its limit -0.6"},
                          {"n": n, "b": b, "T": T, "eps": eps},
                          asymptotic=(active == "source")),
    }
    upper: dict = {}
    derived = {"i_star": i_star, "eta_T": eta_T, "eta_stat": eta_stat,
               "capacity": cap}
    if eps == 0.0:
        lower["case1"] = BoundReport(
            2.0 ** (-eta_stat * b) / (2.0 * math.e), "bern-bsc-case1",
            {}, {"n": n, "b": b})
        upper["case1"] = 1.0 / math.sqrt(6.0 * n) + 2.0 ** (-b)
        derived["case1_floor"] = 1.0 / (2.0 * math.e * math.sqrt(n))
        derived["case1_cap"] = 1.41 / math.sqrt(n)
    else:
        first = 2.0 ** (-GAMMA_N_LIMIT * eta_T) / (2.0 * math.e * n ** (eta_T / 2.0))
        second = 2.0 ** (-eta_stat * cap * T) / (2.0 * math.e)
        lower["case2"] = BoundReport(
            max(first, second), "bern-bsc-case2",
            {"polynomial_term": first, "exponential_term": second},
            {"n": n, "T": T, "eps": eps}, asymptotic=(first >= second))
        rate = math.log2(n + 1.0) / T
        rate_valid = rate <= 1.0 - binary_entropy(
            math.sqrt(eps) / (math.sqrt(eps) + math.sqrt(1.0 - eps)))
        if b >= math.log2(n + 1.0) and rate_valid:
            upper["case2"] = 1.0 / math.sqrt(6.0 * n) \
                + 2.0 ** (-random_coding_exponent(eps, rate) * T)
        else:
            derived["case2_upper_notice"] = (
                "rate outside the linear regime of the random-coding "
                "exponent; upper bound omitted")
        derived["random_coding_exponent_0"] = random_coding_exponent(eps, 0.0)
        derived["feedback_exponent_0"] = feedback_zero_rate_exponent(eps)
        derived["capacity_to_feedback_exponent"] = \
            cap / feedback_zero_rate_exponent(eps)
    return ScenarioReport(spec.tag, lower_bounds=lower, upper_bounds=upper,
                          derived=derived)


# ---------------------------------------------------------------------------
# decentralized Gaussian location model


def scenario_dglm_decentralized(spec: ScenarioSpec) -> ScenarioReport:
    """Gaussian location model with resources split across m processors.

    Needs the total budgets: N samples, B quantization bits, L channel uses
    (L=None with no eps means noiseless channels with no use constraint).
    """
    if spec.total_samples is None or spec.total_bits is None:
        raise DistributionError("this scenario needs total sample and bit budgets")
    N, B, L, m, d = (spec.total_samples, spec.total_bits, spec.total_uses,
                     spec.m, spec.d)
    if N < m:
        raise DistributionError("each processor needs at least one sample")
    var_w, var_noise = spec.var_w, spec.var_noise
    snr = N * var_w / var_noise
    eta_L, cap = _channel_profile(spec, uses=L)
    if L is None:
        eta_split, cl = 1.0, math.inf
    else:
        if spec.eta_uses is not None:
            eta_split = spec.eta_uses
        elif spec.eps is not None:
            eta_split = 1.0 - (4.0 * spec.eps * (1.0 - spec.eps)) ** (L / m)
        else:
            eta_split = 1.0
        cl = cap * L
    first = d * var_w * (1.0 + snr) ** (-eta_L)
    shrink = N * var_w * math.log(4.0) / (N * var_w + m * var_noise)
    second = d * var_w * math.exp(-shrink * min(B * eta_split, cl) / d)
    active = "channel_noise" if first >= second else "decentralized_bits"
    lower = BoundReport(max(first, second), "dglm-lower",
                        {"active": active, "channel_noise": first,
                         "decentralized_bits": second},
                        {"N": N, "B": B, "L": L, "m": m, "d": d})
    bits_needed = (1.0 + m * var_noise / (N * var_w)) * (d / 2.0) \
        * math.log2(1.0 + snr)
    return ScenarioReport(
        spec.tag, lower_bounds={"decentralized": lower},
        upper_bounds={},
        derived={"centralized_risk": d * var_w / (1.0 + snr),
                 "bits_needed_for_centralized": bits_needed,
                 "eta_L": eta_L, "eta_split": eta_split})


# ---------------------------------------------------------------------------
# minimax mean estimation on the cube


def scenario_minimax_cube(spec: ScenarioSpec) -> ScenarioReport:
    """Minimax mean estimation over distributions on [-1,1]^d, m processors."""
    d, b, m = spec.d, spec.b, spec.m
    eta_T, cap = _channel_profile(spec)
    ct = cap * spec.T if spec.T is not None else math.inf
    inner = min(d * eta_T, b * eta_T, ct)
    if inner <= 0.0:
        ratio, delta_sq = 1.0, 1.0
    else:
        ratio = min(1.0, d / (m * inner))
        delta_sq = min(1.0, d / (2.0 * m * inner))
    lower = BoundReport((d / 5.0) * ratio, "minimax-cube",
                        {"inner_min": inner, "delta_star_sq": delta_sq},
                        {"d": d, "b": b, "m": m, "eta_T": eta_T})
    return ScenarioReport(spec.tag, lower_bounds={"minimax": lower},
                          upper_bounds={},
                          derived={"eta_T": eta_T, "capacity": cap})


# ---------------------------------------------------------------------------
# CEO problem over noisy channels


def scenario_noisy_ceo(spec: ScenarioSpec, alpha: float, etas=None,
                       rates=None) -> ScenarioReport:
    """Sum-rate requirement for estimating an i.i.d. Gaussian sequence.

    ``alpha`` is the per-letter distortion target, ``etas`` the per-processor
    observation contractions (default all 1), ``rates`` optional per-processor
    quantization rates b_i/n to check against the requirement.
    """
    if alpha <= 0.0:
        raise DistributionError("distortion target must be positive")
    d, r = spec.d, spec.r
    etas = [1.0] * spec.m if etas is None else list(etas)
    if len(etas) != spec.m:
        raise DistributionError("need one observation contraction per processor")
    eta_T, _ = _channel_profile(spec)
    h_w = 0.5 * d * math.log2(2.0 * math.pi * math.e * spec.var_w)
    rhs = h_w - math.log2(
        unit_ball_volume(d) * (alpha * r * math.e / d) ** (d / r)
        * math.gamma(1.0 + d / r))
    requirement = BoundReport(max(rhs, 0.0), "ceo-sum-rate",
                              {"raw": rhs}, {"alpha": alpha, "d": d, "r": r},
                              clamped=rhs < 0.0)
    derived = {"h_w_bits": h_w, "eta_T": eta_T}
    eta_sum = eta_T * sum(etas)
    if rhs <= 0.0:
        derived["min_equal_rate"] = 0.0
        derived["feasible"] = True
    elif eta_sum > 0.0:
        derived["min_equal_rate"] = rhs / eta_sum
    else:
        derived["min_equal_rate"] = math.inf
    if rates is not None:
        rates = list(rates)
        if len(rates) != spec.m:
            raise DistributionError("need one rate per processor")
        lhs = eta_T * sum(rate * eta for rate, eta in zip(rates, etas))
        derived["weighted_sum_rate"] = lhs
        derived["feasible"] = lhs >= rhs
    return ScenarioReport(spec.tag,
                          lower_bounds={"sum_rate_requirement": requirement},
                          upper_bounds={}, derived=derived)


# ---------------------------------------------------------------------------
# parity-coupled samples


def scenario_xor(spec: ScenarioSpec) -> ScenarioReport:
    """Parity-coupled binary samples: any m-1 processors see pure noise.

    Distributed: each of the m processors quantizes its own n-sample stream
    to b bits. Colocated: one processor holds all streams and mb bits.
    """
    if spec.m < 2:
        raise DistributionError("the parity construction needs at least two processors")
    n, b, m = spec.n, spec.b, spec.m
    eta_stat = 1.0 - 2.0 ** (-n)
    distributed = BoundReport(2.0 ** (-eta_stat * b) / (2.0 * math.e),
                              "xor-distributed", {"eta_stat": eta_stat},
                              {"n": n, "b": b, "m": m})
    colocated = BoundReport(2.0 ** (-eta_stat * m * b) / (2.0 * math.e),
                            "xor-colocated", {"eta_stat": eta_stat},
                            {"n": n, "b": b, "m": m})
    return ScenarioReport(
        spec.tag,
        lower_bounds={"distributed": distributed, "colocated": colocated},
        upper_bounds={},
        derived={
            "floor_no_bits": 1.0 / (2.0 * math.e),
            "penalty_colocated": 1.0 / (2.0 * math.e * math.sqrt(n)),
            "penalty_distributed": 1.0 / (2.0 * math.e * n ** (1.0 / (2.0 * m))),
        })


# ---------------------------------------------------------------------------
# hide-and-seek


def _hide_seek_ours(n: int, m: int, d: int, b: float, rho: float) -> float:
    log_d = math.log2(d)
    ratio_term = (1.0 - ((1.0 - 2.0 * rho) / (1.0 + 2.0 * rho)) ** n) * m * b + 1.0
    info_term = min(4.0 * m * n * rho * rho, log_d) + 1.0
    value = 1.0 - min(ratio_term, info_term) / log_d
    return min(max(value, 0.0), 1.0)


def _hide_seek_shamir(n: int, m: int, d: int, b: float, rho: float) -> float:
    if rho > 1.0 / (4.0 * n):
        return 0.0
    value = 1.0 - (3.0 / d + 5.0 * math.sqrt(
        min(10.0 * rho * n * m * b / d, m * n * rho * rho)))
    return min(max(value, 0.0), 1.0)


def scenario_hide_seek(spec: ScenarioSpec) -> ScenarioReport:
    """Identify which of d coordinates is biased, b bits per processor.

    Compares our error-probability lower bound against the earlier one,
    which is only stated for rho <= 1/(4n) and is zeroed outside that range.
    """
    if spec.d < 2:
        raise DistributionError("need at least two coordinates to hide in")
    n, m, d, b, rho = spec.n, spec.m, spec.d, spec.b, spec.rho_bias
    ours = BoundReport(_hide_seek_ours(n, m, d, b, rho), "hide-seek-ours",
                       {}, {"n": n, "m": m, "d": d, "b": b, "rho": rho})
    shamir = BoundReport(_hide_seek_shamir(n, m, d, b, rho), "hide-seek-shamir",
                         {"valid": rho <= 1.0 / (4.0 * n)},
                         {"n": n, "m": m, "d": d, "b": b, "rho": rho})
    return ScenarioReport(spec.tag,
                          lower_bounds={"ours": ours, "shamir": shamir},
                          upper_bounds={},
                          derived={"log2_d": math.log2(d)})


def fig34_data(m: int = 10, d: int = 512, b: float | None = None,
               n_grid=None, rho_rule: str = "quarter_n", rho: float = 0.01):
    """Hide-and-seek comparison rows (n, ours, shamir).

    ``rho_rule`` is ``quarter_n`` (rho = 1/(4n), always inside the earlier
    bound's validity range) or ``fixed`` (constant rho, the earlier bound
    zeroed once n exceeds 1/(4 rho)). ``b`` defaults to 3d.
    """
    if rho_rule not in ("quarter_n", "fixed"):
        raise DistributionError(f"unknown rho rule {rho_rule!r}")
    if b is None:
        b = 3.0 * d
    if n_grid is None:
        n_grid = range(1, 1001)
    rows = []
    for n in n_grid:
        n = int(n)
        r = 1.0 / (4.0 * n) if rho_rule == "quarter_n" else rho
        rows.append((n, _hide_seek_ours(n, m, d, b, r),
                     _hide_seek_shamir(n, m, d, b, r)))
    return ["n", "ours", "shamir"], rows
