"""Strong data-processing contraction coefficients and their upper bounds.

For an input distribution mu and channel K, the contraction coefficient is

    eta(mu, K) = sup_{nu != mu} D(nu K || mu K) / D(nu || mu),

and eta(K) is its supremum over mu. Every estimate carries a ``kind`` tag:
``exact`` for closed forms, ``upper_bound`` for structural bounds (Dobrushin,
Doeblin, tensor products, sufficient-statistic reductions), and
``numeric_lower_estimate`` for the search in ``eta_numeric``, which scans
feasible mixtures and therefore can only undershoot the supremum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .info import (
    DiscreteChannel,
    DiscreteDistribution,
    DistributionError,
    _validated_pmf,
)

__all__ = [
    "ContractionEstimate",
    "PairwiseRatioBound",
    "eta_closed_form",
    "eta_bsc",
    "eta_bec",
    "eta_gaussian",
    "dobrushin",
    "doeblin_bound",
    "pairwise_ratio_bound",
    "eta_numeric",
    "eta_multi_use",
    "bsc_product_dobrushin",
    "tensorized_eta",
    "sufficient_statistic_reduction",
    "gaussian_sample_mean_eta",
    "dobrushin_bern_uniform_posterior",
]

_KIND_RANK = {"exact": 0, "upper_bound": 1, "numeric_lower_estimate": 2}


@dataclass(frozen=True)
class ContractionEstimate:
    """A contraction coefficient value with its epistemic status."""

    value: float
    kind: str
    provenance: str = ""
    argmax: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise DistributionError(f"unknown estimate kind {self.kind!r}")
        if not 0.0 <= self.value <= 1.0:
            raise DistributionError("contraction coefficients lie in [0, 1]")


def eta_bsc(eps: float) -> ContractionEstimate:
    """Contraction of the binary symmetric channel at uniform input: (1-2eps)^2."""
    if not 0.0 <= eps <= 0.5:
        raise DistributionError("crossover must lie in [0, 1/2]")
    return ContractionEstimate((1.0 - 2.0 * eps) ** 2, "exact", "bsc closed form")


def eta_bec(eps: float) -> ContractionEstimate:
    """Contraction of the binary erasure channel: 1 - eps (externally sourced closed form)."""
    if not 0.0 <= eps <= 1.0:
        raise DistributionError("erasure probability must lie in [0, 1]")
    return ContractionEstimate(1.0 - eps, "exact", "bec closed form")


def eta_gaussian(rho_corr: float) -> ContractionEstimate:
    """Contraction of a jointly Gaussian pair: the squared correlation."""
    if not -1.0 <= rho_corr <= 1.0:
        raise DistributionError("correlation must lie in [-1, 1]")
    return ContractionEstimate(rho_corr ** 2, "exact", "jointly gaussian closed form")


def eta_closed_form(kind: str, param: float) -> ContractionEstimate:
    """Dispatch to one of the closed forms: ``bsc``, ``bec`` or ``gaussian``."""
    table = {"bsc": eta_bsc, "bec": eta_bec, "gaussian": eta_gaussian}
    if kind not in table:
        raise DistributionError(f"no closed form for channel kind {kind!r}")
    return table[kind](param)


def dobrushin(channel: DiscreteChannel) -> ContractionEstimate:
    """Dobrushin coefficient: the largest total variation between two rows."""
    rows = channel.rows
    worst = 0.0
    for i in range(rows.shape[0]):
        diff = np.abs(rows[i + 1:] - rows[i]).sum(axis=1)
        if diff.size:
            worst = max(worst, 0.5 * float(diff.max()))
    return ContractionEstimate(worst, "upper_bound", "dobrushin coefficient")


def doeblin_bound(channel: DiscreteChannel) -> ContractionEstimate:
    """Doeblin minorization bound 1 - sum_y min_x K(y|x)."""
    alpha = float(channel.rows.min(axis=0).sum())
    return ContractionEstimate(1.0 - alpha, "upper_bound", "doeblin minorization")


@dataclass(frozen=True)
class PairwiseRatioBound:
    """Row-ratio contraction bound; applies in both chain directions."""

    alpha: float
    forward: ContractionEstimate
    backward: ContractionEstimate
    degenerate: bool


def pairwise_ratio_bound(channel: DiscreteChannel, n: int = 1) -> PairwiseRatioBound:
    """Bound 1 - alpha^n from alpha = min over outputs and row pairs of K(y|x)/K(y|x').

    The same constant bounds the contraction of the channel and of its
    backward (posterior) channel; with n conditionally independent
    observations the bound weakens to 1 - alpha^n. A zero entry forces
    alpha = 0 and the vacuous bound 1, flagged ``degenerate``.
    """
    if n < 1:
        raise DistributionError("sample count must be at least 1")
    rows = channel.rows
    degenerate = bool(np.any(rows == 0.0))
    if degenerate:
        alpha = 0.0
    else:
        alpha = float((rows.min(axis=0) / rows.max(axis=0)).min())
    value = 1.0 - alpha ** n
    note = f"pairwise row ratio, {n} sample(s)"
    return PairwiseRatioBound(
        alpha,
        ContractionEstimate(value, "upper_bound", note),
        ContractionEstimate(value, "upper_bound", note + ", backward"),
        degenerate,
    )


# ---------------------------------------------------------------------------
# numeric lower estimate


_LN2 = math.log(2.0)


def _kl_shifted(base: np.ndarray, diff: np.ndarray) -> float:
    """D(base + diff || base) in bits for a mass-preserving perturbation.

    Evaluates the Bregman form sum_i base_i * g(diff_i / base_i) with
    g(u) = (1+u) log1p(u) - u, which equals the divergence whenever ``diff``
    sums to zero. Each summand is nonnegative and of order diff^2, so there
    is no cancellation, and residual mass error from floating point enters
    only quadratically; a truncated series handles |u| below 1e-2. Entries
    with base == 0 must have diff == 0.
    """
    mask = base > 0.0
    b = base[mask]
    u = diff[mask] / b
    g = np.empty_like(u)
    small = np.abs(u) <= 1e-2
    us = u[small]
    g[small] = us * us * (1.0 / 2.0 - us * (1.0 / 6.0 - us * (
        1.0 / 12.0 - us * (1.0 / 20.0 - us * (1.0 / 30.0 - us / 42.0)))))
    ub = u[~small]
    dead = ub <= -1.0
    ub = np.where(dead, 0.0, ub)
    gb = (1.0 + ub) * np.log1p(ub) - ub
    g[~small] = np.where(dead, 1.0, gb)
    return float((b * g).sum()) / _LN2


def _ratio_along(mu, muK, K, direction, out_direction, t) -> float:
    din = _kl_shifted(mu, t * direction)
    if not din > 0.0:
        return -math.inf
    dout = _kl_shifted(muK, t * out_direction)
    return dout / din


def _max_step(mu: np.ndarray, direction: np.ndarray) -> float:
    neg = direction < 0.0
    if not np.any(neg):
        return 1.0
    return float((mu[neg] / -direction[neg]).min())


def _scan_direction(mu, muK, K, direction, t_grid) -> tuple[float, float]:
    """Best ratio along a fixed mixture direction; returns (ratio, step)."""
    direction = direction - direction.sum() * mu
    t_max = _max_step(mu, direction)
    if not t_max > 0.0 or not np.all(np.isfinite(direction)):
        return -math.inf, 0.0
    out_direction = direction @ K
    best, best_t = -math.inf, 0.0
    for frac in t_grid:
        t = frac * t_max
        r = _ratio_along(mu, muK, K, direction, out_direction, t)
        if r > best:
            best, best_t = r, t
    return best, best_t


def eta_numeric(mu, channel: DiscreteChannel, restarts: int = 8,
                seed: int = 0) -> ContractionEstimate:
    """Numeric lower estimate of eta(mu, K) for alphabets up to 16.

    Strategy: scan mixture paths from mu toward every vertex and along every
    coordinate-pair direction with log-spaced step sizes, add the principal
    chi-square directions (singular vectors of the divergence transition
    matrix, whose local KL ratio attains the chi-square contraction), then
    run seeded random restarts with coordinate ascent over the direction.
    Every candidate is a feasible mixture, so the result can only undershoot
    the true supremum.

    Parameters
    ----------
    mu : input distribution (full support required).
    channel : the channel K.
    restarts : number of random-restart ascents.
    seed : base seed; restart r uses seed + r.

    Returns
    -------
    ContractionEstimate
        kind ``numeric_lower_estimate`` with the best ratio and its argmax.
    """
    mu = _validated_pmf(mu.probs if isinstance(mu, DiscreteDistribution) else mu, "input")
    if mu.size > 16:
        raise DistributionError("numeric search is limited to alphabets of size 16")
    if np.any(mu == 0.0):
        raise DistributionError("numeric search needs a full-support input")
    if mu.size != channel.num_inputs:
        raise DistributionError("input distribution does not match channel")
    K = channel.rows
    muK = mu @ K
    k = mu.size
    t_grid = np.geomspace(1e-6, 1.0, 60)

    candidates = []
    eye = np.eye(k)
    for x in range(k):
        candidates.append(eye[x] - mu)
    for x in range(k):
        for xp in range(k):
            if x != xp:
                candidates.append(eye[x] - eye[xp])
    # chi-square principal directions
    used = muK > 0.0
    A = (np.sqrt(mu)[:, None] * K[:, used]) / np.sqrt(muK[used])[None, :]
    U, _, _ = np.linalg.svd(A, full_matrices=False)
    for j in range(1, U.shape[1]):
        candidates.append(np.sqrt(mu) * U[:, j])

    best = -math.inf
    best_dir, best_t = None, 0.0
    for direction in candidates:
        r, t = _scan_direction(mu, muK, K, direction, t_grid)
        if r > best:
            best, best_dir, best_t = r, direction, t

    coarse = t_grid[::4]
    for rstart in range(restarts):
        rng = np.random.default_rng(seed + rstart)
        v = rng.standard_normal(k)
        v -= v.mean()
        step = 0.5
        cur, _ = _scan_direction(mu, muK, K, v, coarse)
        for _ in range(40):
            improved = False
            for _ in range(k):
                i, j = rng.integers(0, k, 2)
                if i == j:
                    continue
                trial = v + step * (eye[i] - eye[j])
                r, _ = _scan_direction(mu, muK, K, trial, coarse)
                if r > cur:
                    cur, v = r, trial
                    improved = True
            if not improved:
                step *= 0.5
                if step < 1e-4:
                    break
        r, t = _scan_direction(mu, muK, K, v, t_grid)
        if r > best:
            best, best_dir, best_t = r, v, t

    argmax = mu + best_t * (best_dir - best_dir.sum() * mu) if best_dir is not None else None
    value = min(max(best, 0.0), 1.0)
    return ContractionEstimate(value, "numeric_lower_estimate",
                               "mixture-path scan with restarts", argmax)


# ---------------------------------------------------------------------------
# combinators


def bsc_product_dobrushin(eps: float, T: int) -> float:
    """Dobrushin coefficient bound 1 - (4 eps (1-eps))^{T/2} / sqrt(2T) for T parallel BSC uses."""
    if T < 1:
        raise DistributionError("use count must be at least 1")
    if not 0.0 <= eps <= 0.5:
        raise DistributionError("crossover must lie in [0, 1/2]")
    return 1.0 - (4.0 * eps * (1.0 - eps)) ** (T / 2.0) / math.sqrt(2.0 * T)


def _as_value(eta) -> tuple[float, str]:
    if isinstance(eta, ContractionEstimate):
        return eta.value, eta.kind
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise DistributionError("contraction coefficients lie in [0, 1]")
    return eta, "exact"


def eta_multi_use(eta_single, T: int, feedback: bool = False,
                  bsc_eps: float | None = None) -> ContractionEstimate:
    """Contraction bound for T channel uses: 1 - (1 - eta)^T.

    With feedback this tensor bound is the only one available. Without
    feedback and for a BSC of known crossover, the product-channel Dobrushin
    coefficient ``bsc_product_dobrushin`` is also valid and the smaller of the
    two is returned.
    """
    if T < 1:
        raise DistributionError("use count must be at least 1")
    value, kind = _as_value(eta_single)
    bound = 1.0 - (1.0 - value) ** T
    note = "tensor bound 1-(1-eta)^T"
    if not feedback and bsc_eps is not None:
        alt = bsc_product_dobrushin(bsc_eps, T)
        if alt < bound:
            bound, note = alt, "product-channel dobrushin"
    out_kind = "upper_bound"
    if T == 1 and note.startswith("tensor"):
        out_kind = kind
    return ContractionEstimate(bound, out_kind, note)


def tensorized_eta(estimates) -> ContractionEstimate:
    """Contraction of a product of independent pairs: the max of the components.

    The returned kind is the weakest among the inputs (a single numeric
    lower estimate degrades the whole product to a lower estimate).
    """
    estimates = list(estimates)
    if not estimates:
        raise DistributionError("at least one component is required")
    value = max(e.value for e in estimates)
    kind = max((e.kind for e in estimates), key=_KIND_RANK.get)
    return ContractionEstimate(value, kind, "tensorization max")


def sufficient_statistic_reduction(eta_stat: ContractionEstimate) -> ContractionEstimate:
    """Reinterpret eta for a sufficient statistic of the sample as a bound for the full sample."""
    kind = "upper_bound" if eta_stat.kind == "exact" else eta_stat.kind
    return ContractionEstimate(eta_stat.value, kind,
                               f"sufficient statistic: {eta_stat.provenance}")


def gaussian_sample_mean_eta(n: int, var_w: float, var_noise: float) -> ContractionEstimate:
    """Contraction bound for n Gaussian observations via the sample-mean statistic.

    The pair (W, sample mean) is jointly Gaussian with squared correlation
    n var_w / (n var_w + var_noise), which bounds the full-sample coefficient.
    """
    if n < 1:
        raise DistributionError("sample count must be at least 1")
    if not (var_w > 0.0 and var_noise > 0.0):
        raise DistributionError("variances must be positive")
    rho2 = n * var_w / (n * var_w + var_noise)
    return sufficient_statistic_reduction(
        ContractionEstimate(rho2, "exact", "gaussian sample mean"))


# ---------------------------------------------------------------------------
# exact posterior-channel Dobrushin coefficient for the Bernoulli bias model


def _beta_cdf_int(a: int, b: int, x: float) -> float:
    """CDF of Beta(a, b) with integer parameters: P[Bin(a+b-1, x) >= a]."""
    m = a + b - 1
    return float(sum(math.comb(m, j) * x ** j * (1.0 - x) ** (m - j)
                     for j in range(a, m + 1)))


def _beta_density_coeffs(n: int, s: int) -> np.ndarray:
    """Monomial coefficients of (n+1) C(n,s) w^s (1-w)^{n-s}."""
    coeffs = np.zeros(n + 1)
    lead = (n + 1) * math.comb(n, s)
    for j in range(n - s + 1):
        coeffs[s + j] = lead * math.comb(n - s, j) * (-1) ** j
    return coeffs


def _beta_tv(n: int, s: int, sp: int) -> float:
    """Total variation between Beta(s+1, n-s+1) and Beta(sp+1, n-sp+1)."""
    diff = _beta_density_coeffs(n, s) - _beta_density_coeffs(n, sp)
    roots = np.polynomial.polynomial.polyroots(diff)
    cuts = [0.0]
    for r in roots:
        if abs(r.imag) < 1e-9 and 1e-12 < r.real < 1.0 - 1e-12:
            cuts.append(float(r.real))
    cuts.append(1.0)
    cuts.sort()
    gap = [
        _beta_cdf_int(s + 1, n - s + 1, x) - _beta_cdf_int(sp + 1, n - sp + 1, x)
        for x in cuts
    ]
    return 0.5 * float(sum(abs(b - a) for a, b in zip(gap, gap[1:])))


def dobrushin_bern_uniform_posterior(n: int) -> float:
    """Dobrushin coefficient of the posterior channel of a uniform Bernoulli bias.

    With W uniform on [0, 1] and n conditionally independent bits, the
    posterior given a sample with s ones is Beta(s+1, n-s+1); the coefficient
    is the largest total variation between two such rows, computed exactly
    via polynomial root isolation (the value is 1 - 2^{-n}, attained by the
    all-zeros and all-ones samples).
    """
    if n < 1:
        raise DistributionError("sample count must be at least 1")
    return max(_beta_tv(n, s, sp) for s in range(n + 1) for sp in range(s + 1, n + 1))
