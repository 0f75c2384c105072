"""Shared information-theoretic primitives on finite alphabets and simple priors.

Conventions used across the package:

* every information quantity is measured in bits (log base 2),
* 0 log 0 = 0,
* probability vectors must already be normalized: anything whose mass
  deviates from 1 by more than ``PROB_ATOL`` is rejected, never silently
  renormalized,
* quantities that are infinite (e.g. KL divergence under support
  violation) come back as ``math.inf``, not NaN.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PROB_ATOL = 1e-12

__all__ = [
    "PROB_ATOL",
    "DistributionError",
    "UnsupportedPairError",
    "ConvergenceError",
    "DiscreteDistribution",
    "DiscreteChannel",
    "JointPMF",
    "PriorSpec",
    "DistortionSpec",
    "InfoDensityDistribution",
    "NPPropertyReport",
    "bsc",
    "bec",
    "identity_channel",
    "binary_entropy",
    "binary_relative_entropy",
    "inv_binary_entropy",
    "inv_binary_entropy_floor",
    "entropy",
    "kl_divergence",
    "mutual_information",
    "conditional_mutual_information",
    "information_density",
    "neyman_pearson_beta",
    "verify_np_properties",
    "std_normal_cdf",
    "small_ball",
    "small_ball_mc",
    "differential_entropy",
    "unit_ball_volume",
    "gamma_fn",
    "channel_capacity",
]


class DistributionError(ValueError):
    """A probability object failed validation."""


class UnsupportedPairError(ValueError):
    """No closed form is known for the requested (prior, distortion) pair."""


class ConvergenceError(RuntimeError):
    """An iterative routine exhausted its iteration cap."""


def _validated_pmf(p, what: str) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size < 1:
        raise DistributionError(f"{what} must be a nonempty vector")
    if np.any(p < 0.0) or np.any(p > 1.0):
        raise DistributionError(f"{what} entries must lie in [0, 1]")
    if abs(float(p.sum()) - 1.0) > PROB_ATOL:
        raise DistributionError(
            f"{what} mass {p.sum():.17g} deviates from 1 by more than {PROB_ATOL}"
        )
    return p


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    """Probability vector on a finite alphabet {0, ..., k-1}."""

    probs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "probs", _validated_pmf(self.probs, "distribution"))

    @property
    def size(self) -> int:
        return self.probs.size

    def entropy(self) -> float:
        return entropy(self.probs)

    @classmethod
    def uniform(cls, k: int) -> "DiscreteDistribution":
        return cls(np.full(k, 1.0 / k))


@dataclass(frozen=True, eq=False)
class DiscreteChannel:
    """Row-stochastic matrix; ``rows[x, y]`` is the probability of output y on input x."""

    rows: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        if rows.ndim != 2 or rows.shape[0] < 1 or rows.shape[1] < 1:
            raise DistributionError("channel must be a nonempty matrix")
        for x in range(rows.shape[0]):
            _validated_pmf(rows[x], f"channel row {x}")
        object.__setattr__(self, "rows", rows)

    @property
    def num_inputs(self) -> int:
        return self.rows.shape[0]

    @property
    def num_outputs(self) -> int:
        return self.rows.shape[1]

    def compose(self, other: "DiscreteChannel") -> "DiscreteChannel":
        """Feed this channel's output into ``other``."""
        if self.num_outputs != other.num_inputs:
            raise DistributionError("composition dimensions do not match")
        return DiscreteChannel(self.rows @ other.rows)

    def tensor(self, other: "DiscreteChannel") -> "DiscreteChannel":
        """Independent parallel use of two channels."""
        return DiscreteChannel(np.kron(self.rows, other.rows))

    def push(self, dist: DiscreteDistribution) -> DiscreteDistribution:
        if dist.size != self.num_inputs:
            raise DistributionError("input distribution does not match channel")
        return DiscreteDistribution(dist.probs @ self.rows)


def bsc(eps: float) -> DiscreteChannel:
    """Binary symmetric channel with crossover probability ``eps``."""
    if not 0.0 <= eps <= 1.0:
        raise DistributionError("crossover probability must lie in [0, 1]")
    return DiscreteChannel(np.array([[1.0 - eps, eps], [eps, 1.0 - eps]]))


def bec(eps: float) -> DiscreteChannel:
    """Binary erasure channel; output alphabet is (0, erasure, 1)."""
    if not 0.0 <= eps <= 1.0:
        raise DistributionError("erasure probability must lie in [0, 1]")
    return DiscreteChannel(np.array([[1.0 - eps, eps, 0.0], [0.0, eps, 1.0 - eps]]))


def identity_channel(k: int) -> DiscreteChannel:
    return DiscreteChannel(np.eye(k))


@dataclass(frozen=True, eq=False)
class JointPMF:
    """Joint PMF of a pair (W, X); ``table[w, x]`` with total mass 1."""

    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=float)
        if t.ndim != 2 or t.shape[0] < 1 or t.shape[1] < 1:
            raise DistributionError("joint PMF must be a nonempty matrix")
        if np.any(t < 0.0):
            raise DistributionError("joint PMF entries must be nonnegative")
        if abs(float(t.sum()) - 1.0) > PROB_ATOL:
            raise DistributionError(
                f"joint mass {t.sum():.17g} deviates from 1 by more than {PROB_ATOL}"
            )
        object.__setattr__(self, "table", t)

    @classmethod
    def from_input_channel(cls, dist: DiscreteDistribution, channel: DiscreteChannel) -> "JointPMF":
        if dist.size != channel.num_inputs:
            raise DistributionError("input distribution does not match channel")
        return cls(dist.probs[:, None] * channel.rows)

    def marginal_w(self) -> DiscreteDistribution:
        return DiscreteDistribution(self.table.sum(axis=1))

    def marginal_x(self) -> DiscreteDistribution:
        return DiscreteDistribution(self.table.sum(axis=0))


@dataclass(frozen=True)
class PriorSpec:
    """Prior on the estimand W; one of a small set of named families.

    Families and their parameters:

    * ``uniform01``: uniform on [0, 1] (scalar),
    * ``gaussian``: N(0, var I) in ``dim`` dimensions,
    * ``ball``: uniform on the centered ell-2 ball of radius ``radius``,
    * ``hypercube``: uniform on {-1, +1}^dim,
    * ``discrete_uniform``: uniform on ``size`` symbols.
    """

    family: str
    var: float = 0.0
    dim: int = 1
    radius: float = 0.0
    size: int = 0

    def __post_init__(self):
        if self.family not in ("uniform01", "gaussian", "ball", "hypercube", "discrete_uniform"):
            raise DistributionError(f"unknown prior family {self.family!r}")
        if self.dim < 1:
            raise DistributionError("dimension must be at least 1")
        if self.family == "gaussian" and not self.var > 0.0:
            raise DistributionError("gaussian prior needs a positive variance")
        if self.family == "ball" and not self.radius > 0.0:
            raise DistributionError("ball prior needs a positive radius")
        if self.family == "discrete_uniform" and self.size < 2:
            raise DistributionError("discrete uniform prior needs at least 2 symbols")

    @classmethod
    def uniform01(cls) -> "PriorSpec":
        return cls("uniform01")

    @classmethod
    def gaussian(cls, var: float, dim: int = 1) -> "PriorSpec":
        return cls("gaussian", var=var, dim=dim)

    @classmethod
    def ball(cls, radius: float, dim: int) -> "PriorSpec":
        return cls("ball", radius=radius, dim=dim)

    @classmethod
    def hypercube(cls, dim: int) -> "PriorSpec":
        return cls("hypercube", dim=dim)

    @classmethod
    def discrete_uniform(cls, size: int) -> "PriorSpec":
        return cls("discrete_uniform", size=size)


@dataclass(frozen=True)
class DistortionSpec:
    """Distortion function used in small-ball probabilities and risk bounds.

    Kinds: ``absolute`` |w - v|, ``squared`` (w - v)^2, ``l2r`` the ell-2 norm
    raised to exponent ``r``, ``zero_one`` the indicator of a miss, and
    ``hamming`` the fraction of differing coordinates.
    """

    kind: str
    r: float = 1.0

    def __post_init__(self):
        if self.kind not in ("absolute", "squared", "l2r", "zero_one", "hamming"):
            raise DistributionError(f"unknown distortion kind {self.kind!r}")
        if self.kind == "l2r" and not self.r >= 1.0:
            raise DistributionError("norm exponent must be at least 1")


# ---------------------------------------------------------------------------
# scalar entropy helpers


def binary_entropy(p: float) -> float:
    """Entropy of a Bernoulli(p) bit, in bits."""
    if not 0.0 <= p <= 1.0:
        raise DistributionError("binary entropy argument must lie in [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def binary_relative_entropy(p: float, q: float) -> float:
    """Divergence between Bernoulli(p) and Bernoulli(q), in bits."""
    if not 0.0 <= p <= 1.0:
        raise DistributionError("first argument must lie in [0, 1]")
    if not 0.0 <= q <= 1.0:
        raise DistributionError("second argument must lie in [0, 1]")
    if q in (0.0, 1.0):
        if p == q:
            return 0.0
        raise DistributionError("reference probability must be interior unless equal")
    out = 0.0
    if p > 0.0:
        out += p * math.log2(p / q)
    if p < 1.0:
        out += (1.0 - p) * math.log2((1.0 - p) / (1.0 - q))
    return out


def inv_binary_entropy_floor(y: float) -> float:
    """Closed-form lower bound y / (2 log2(6/y)) on the inverse binary entropy."""
    if not 0.0 <= y <= 1.0:
        raise DistributionError("argument must lie in [0, 1]")
    if y == 0.0:
        return 0.0
    return y / (2.0 * math.log2(6.0 / y))


def inv_binary_entropy(y: float) -> float:
    """Inverse of the binary entropy on [0, 1/2].

    Bisection to absolute accuracy 1e-12 in the argument; the result always
    dominates the closed-form floor ``inv_binary_entropy_floor``.
    """
    if not 0.0 <= y <= 1.0:
        raise DistributionError("argument must lie in [0, 1]")
    if y == 0.0:
        return 0.0
    if y == 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if binary_entropy(mid) < y:
            lo = mid
        else:
            hi = mid
    p = 0.5 * (lo + hi)
    assert p >= inv_binary_entropy_floor(y) - 1e-12
    return p


def entropy(p) -> float:
    """Shannon entropy of a probability vector, in bits."""
    p = p.probs if isinstance(p, DiscreteDistribution) else np.asarray(p, dtype=float)
    pos = p[p > 0.0]
    return float(-(pos * np.log2(pos)).sum())


def kl_divergence(p, q) -> float:
    """D(p || q) in bits; ``math.inf`` when p is not dominated by q."""
    p = p.probs if isinstance(p, DiscreteDistribution) else np.asarray(p, dtype=float)
    q = q.probs if isinstance(q, DiscreteDistribution) else np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise DistributionError("distributions must share an alphabet")
    mask = p > 0.0
    if np.any(q[mask] == 0.0):
        return math.inf
    return float((p[mask] * np.log2(p[mask] / q[mask])).sum())


def mutual_information(joint: JointPMF) -> float:
    """I(W; X) of a joint PMF, in bits."""
    pw = joint.table.sum(axis=1)
    px = joint.table.sum(axis=0)
    prod = np.outer(pw, px)
    mask = joint.table > 0.0
    return float((joint.table[mask] * np.log2(joint.table[mask] / prod[mask])).sum())


def conditional_mutual_information(weights, joints) -> float:
    """I(W; X | U) = sum_u P(u) I(W; X | U = u) for finitely many contexts u."""
    weights = _validated_pmf(weights, "context weights")
    if len(joints) != weights.size:
        raise DistributionError("one joint PMF is needed per context")
    return float(sum(w * mutual_information(j) for w, j in zip(weights, joints)))


# ---------------------------------------------------------------------------
# information density


@dataclass(frozen=True, eq=False)
class InfoDensityDistribution:
    """Distribution of the information density i(W; X), values in bits."""

    values: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        object.__setattr__(self, "probs", _validated_pmf(self.probs, "density probabilities"))
        if self.values.shape != self.probs.shape:
            raise DistributionError("values and probabilities must align")

    def mean(self) -> float:
        return float((self.values * self.probs).sum())

    def prob_below(self, threshold: float) -> float:
        """P[i(W;X) < threshold] with strict inequality."""
        return float(self.probs[self.values < threshold].sum())

    def prob_at_least(self, threshold: float) -> float:
        return float(self.probs[self.values >= threshold].sum())


def information_density(joint: JointPMF, merge_tol: float = 1e-12) -> InfoDensityDistribution:
    """Distribution of i(w; x) = log2 P(w|x)/P(w) under the joint PMF.

    Atoms with equal value (within ``merge_tol``) are merged. The expectation
    of the result is I(W; X); construction fails if the two disagree by more
    than 1e-9, which would indicate a corrupted joint.
    """
    pw = joint.table.sum(axis=1)
    px = joint.table.sum(axis=0)
    if np.any(pw == 0.0) or np.any(px == 0.0):
        raise DistributionError("information density needs full-support marginals")
    mask = joint.table > 0.0
    vals = np.log2(joint.table[mask] / np.outer(pw, px)[mask])
    ps = joint.table[mask]
    order = np.argsort(vals)
    vals, ps = vals[order], ps[order]
    merged_v, merged_p = [vals[0]], [ps[0]]
    for v, p in zip(vals[1:], ps[1:]):
        if v - merged_v[-1] <= merge_tol * max(1.0, abs(v)):
            merged_p[-1] += p
        else:
            merged_v.append(v)
            merged_p.append(p)
    dens = InfoDensityDistribution(np.array(merged_v), np.array(merged_p))
    if abs(dens.mean() - mutual_information(joint)) > 1e-9:
        raise DistributionError("information density mean disagrees with I(W;X)")
    return dens


# ---------------------------------------------------------------------------
# binary hypothesis testing


def neyman_pearson_beta(alpha: float, p, q) -> float:
    """Smallest type-II error of any randomized test with type-I power >= alpha.

    Computed exactly by the likelihood-ratio construction: outcomes are taken
    in decreasing order of dP/dQ (ties broken by outcome index), accumulated
    until their P-mass reaches ``alpha``, and the boundary outcome is included
    fractionally.

    Parameters
    ----------
    alpha : required power in [0, 1].
    p, q : probability vectors on a common alphabet.

    Returns
    -------
    float
        beta_alpha(p, q), the exact infimum.
    """
    if not 0.0 <= alpha <= 1.0:
        raise DistributionError("power requirement must lie in [0, 1]")
    p = _validated_pmf(p.probs if isinstance(p, DiscreteDistribution) else p, "P")
    q = _validated_pmf(q.probs if isinstance(q, DiscreteDistribution) else q, "Q")
    if p.shape != q.shape:
        raise DistributionError("distributions must share an alphabet")
    if alpha == 0.0:
        return 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(q > 0.0, p / np.where(q > 0.0, q, 1.0), np.inf)
    ratio = np.where((p == 0.0) & (q == 0.0), 0.0, ratio)
    order = np.lexsort((np.arange(p.size), -ratio))
    beta = 0.0
    acc = 0.0
    for z in order:
        if p[z] == 0.0:
            continue
        if acc + p[z] < alpha:
            acc += p[z]
            beta += q[z]
        else:
            beta += q[z] * (alpha - acc) / p[z]
            return float(beta)
    return float(beta)


@dataclass(frozen=True)
class NPPropertyReport:
    """Worst observed violations of the testing inequalities on a grid."""

    dpi_violation: float
    weak_converse_violation: float
    strong_converse_violation: float

    @property
    def max_violation(self) -> float:
        return max(self.dpi_violation, self.weak_converse_violation,
                   self.strong_converse_violation)


def _d2_extended(a: float, b: float) -> float:
    """Binary divergence extended with +inf on support violations."""
    if b in (0.0, 1.0):
        return 0.0 if a == b else math.inf
    return binary_relative_entropy(a, b)


def verify_np_properties(p, q, channel: DiscreteChannel, alphas, gammas) -> NPPropertyReport:
    """Check data-processing, weak-converse and strong-converse inequalities.

    For each alpha on the grid the data-processing inequality
    beta_alpha(PK, QK) >= beta_alpha(P, Q) and the weak converse
    d2(alpha || beta_alpha) <= D(P || Q) are evaluated; for each (alpha, gamma)
    pair the strong converse
    alpha - gamma beta_alpha <= (1 - gamma inf dQ/dP) P[dP/dQ >= gamma]
    is evaluated. All three hold with exact arithmetic, so the reported
    violations measure floating-point error only.
    """
    p = _validated_pmf(p.probs if isinstance(p, DiscreteDistribution) else p, "P")
    q = _validated_pmf(q.probs if isinstance(q, DiscreteDistribution) else q, "Q")
    pk = p @ channel.rows
    qk = q @ channel.rows
    d_pq = kl_divergence(p, q)
    sup = p > 0.0
    inf_ratio = float((q[sup] / p[sup]).min())
    with np.errstate(divide="ignore"):
        fwd_ratio = np.where(q > 0.0, p / np.where(q > 0.0, q, 1.0), np.inf)
    dpi_v = weak_v = strong_v = 0.0
    for alpha in alphas:
        beta = neyman_pearson_beta(alpha, p, q)
        beta_k = neyman_pearson_beta(alpha, pk, qk)
        dpi_v = max(dpi_v, beta - beta_k)
        d_ab = _d2_extended(alpha, beta) if beta > 0.0 or alpha == 0.0 else math.inf
        if not d_ab <= d_pq:
            weak_v = max(weak_v, d_ab - d_pq)
        for gamma in gammas:
            tail = float(p[sup][fwd_ratio[sup] >= gamma].sum())
            rhs = (1.0 - gamma * inf_ratio) * tail
            strong_v = max(strong_v, alpha - gamma * beta - rhs)
    return NPPropertyReport(dpi_v, weak_v, strong_v)


# ---------------------------------------------------------------------------
# continuous priors: small-ball probabilities and differential entropy


def std_normal_cdf(x: float) -> float:
    """Standard normal CDF via erfc; absolute error below 1e-12."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def gamma_fn(x: float) -> float:
    """Euler gamma function (relative error well below 1e-10)."""
    return math.gamma(x)


def unit_ball_volume(d: int) -> float:
    """Volume of the unit ell-2 ball in d dimensions."""
    if d < 1:
        raise DistributionError("dimension must be at least 1")
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def _ball_radius_for(rho: float, distortion: DistortionSpec) -> float:
    """Radius of the set {distortion < rho} when it is a metric ball."""
    if distortion.kind in ("absolute",):
        return rho
    if distortion.kind == "squared":
        return math.sqrt(rho)
    if distortion.kind == "l2r":
        return rho ** (1.0 / distortion.r)
    raise UnsupportedPairError(f"distortion {distortion.kind!r} is not a norm ball")


def small_ball(prior: PriorSpec, rho: float, distortion: DistortionSpec) -> float:
    """Largest probability the prior puts on a distortion ball of radius rho.

    Closed forms: uniform [0,1] and scalar Gaussian priors under absolute
    (or squared, by monotone reduction) distortion, the uniform d-ball under
    ell-2 norm distortion, and the discrete uniform prior under 0-1 loss.
    Other pairs raise ``UnsupportedPairError``; use ``small_ball_mc``.
    """
    if not rho > 0.0:
        raise DistributionError("ball radius must be positive")
    if prior.family == "uniform01" and distortion.kind in ("absolute", "squared"):
        return min(2.0 * _ball_radius_for(rho, distortion), 1.0)
    if prior.family == "gaussian" and prior.dim == 1 and distortion.kind in ("absolute", "squared"):
        r = _ball_radius_for(rho, distortion)
        return 2.0 * std_normal_cdf(r / math.sqrt(prior.var)) - 1.0
    if prior.family == "ball" and distortion.kind in ("absolute", "squared", "l2r"):
        r = _ball_radius_for(rho, distortion)
        return min((r / prior.radius) ** prior.dim, 1.0)
    if prior.family == "discrete_uniform" and distortion.kind == "zero_one":
        return 1.0 if rho > 1.0 else 1.0 / prior.size
    raise UnsupportedPairError(
        f"no closed form for prior {prior.family!r} with distortion {distortion.kind!r}"
    )


def _sample_prior(prior: PriorSpec, reps: int, rng: np.random.Generator) -> np.ndarray:
    if prior.family == "uniform01":
        return rng.random((reps, 1))
    if prior.family == "gaussian":
        return math.sqrt(prior.var) * rng.standard_normal((reps, prior.dim))
    if prior.family == "ball":
        g = rng.standard_normal((reps, prior.dim))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        u = rng.random(reps) ** (1.0 / prior.dim)
        return prior.radius * g * u[:, None]
    if prior.family == "hypercube":
        return 2.0 * rng.integers(0, 2, (reps, prior.dim)) - 1.0
    if prior.family == "discrete_uniform":
        return rng.integers(0, prior.size, (reps, 1)).astype(float)
    raise DistributionError(f"unknown prior family {prior.family!r}")


def _prior_center(prior: PriorSpec) -> np.ndarray:
    if prior.family == "uniform01":
        return np.array([0.5])
    if prior.family in ("gaussian", "ball"):
        return np.zeros(prior.dim)
    if prior.family == "hypercube":
        return np.ones(prior.dim)
    return np.zeros(1)


def _distortion_to_center(samples: np.ndarray, center: np.ndarray,
                          distortion: DistortionSpec) -> np.ndarray:
    diff = samples - center[None, :]
    if distortion.kind == "absolute":
        return np.abs(diff[:, 0])
    if distortion.kind == "squared":
        return diff[:, 0] ** 2
    if distortion.kind == "l2r":
        return np.linalg.norm(diff, axis=1) ** distortion.r
    if distortion.kind == "zero_one":
        return (np.abs(diff) > 0).any(axis=1).astype(float)
    if distortion.kind == "hamming":
        return (np.abs(diff) > 0).mean(axis=1)
    raise DistributionError(f"unknown distortion kind {distortion.kind!r}")


def small_ball_mc(prior: PriorSpec, rho: float, distortion: DistortionSpec,
                  reps: int = 100_000, seed: int = 0) -> tuple[float, float]:
    """Monte Carlo small-ball probability around the prior's symmetry center.

    Returns the estimate together with a 95% CI half-width. Fallback for
    (prior, distortion) pairs without a closed form; for the symmetric
    families handled here the centered ball attains the supremum.
    """
    if not rho > 0.0:
        raise DistributionError("ball radius must be positive")
    if reps < 1:
        raise DistributionError("at least one replication is needed")
    rng = np.random.Generator(np.random.Philox(key=seed))
    samples = _sample_prior(prior, reps, rng)
    hits = _distortion_to_center(samples, _prior_center(prior), distortion) < rho
    est = float(hits.mean())
    ci = 1.96 * math.sqrt(max(est * (1.0 - est), 1e-300) / reps)
    return est, ci


def differential_entropy(prior: PriorSpec) -> float:
    """Differential entropy in bits of a continuous prior family."""
    if prior.family == "uniform01":
        return 0.0
    if prior.family == "gaussian":
        return 0.5 * prior.dim * math.log2(2.0 * math.pi * math.e * prior.var)
    if prior.family == "ball":
        return math.log2(unit_ball_volume(prior.dim) * prior.radius ** prior.dim)
    raise UnsupportedPairError(f"prior {prior.family!r} has no differential entropy")


# ---------------------------------------------------------------------------
# channel capacity


def channel_capacity(channel: DiscreteChannel, tol: float = 1e-9,
                     max_iter: int = 100_000) -> float:
    """Capacity of a DMC in bits per use, by alternating maximization.

    Stops once the duality gap max_x D(K_x || q) - I(r) drops below ``tol``,
    which brackets the capacity to that accuracy. Raises ``ConvergenceError``
    if the iteration cap is exhausted first.
    """
    K = channel.rows
    mask = K > 0.0
    logK = np.zeros_like(K)
    logK[mask] = np.log2(K[mask])
    r = np.full(K.shape[0], 1.0 / K.shape[0])
    for _ in range(max_iter):
        q = r @ K
        logq = np.zeros_like(q)
        used = q > 0.0
        logq[used] = np.log2(q[used])
        per_input = np.where(mask, K * (logK - logq[None, :]), 0.0).sum(axis=1)
        lower = float(r @ per_input)
        upper = float(per_input.max())
        if upper - lower <= tol:
            return 0.5 * (lower + upper)
        w = np.exp2(per_input - per_input.max())
        r = r * w
        r = r / r.sum()
    raise ConvergenceError(f"capacity iteration cap {max_iter} exhausted")
