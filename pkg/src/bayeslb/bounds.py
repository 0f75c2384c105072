"""Risk lower bounds and mutual-information upper bounds.

The lower-bound routines turn an information budget (a mutual information or
an information-density distribution) plus a small-ball profile of the prior
into a bound on Bayes risk; the ``mi_ub_*`` routines compute the information
budgets themselves for single-processor, replicated i.i.d., cutset and
interactive protocols. Every result is wrapped in a ``BoundReport`` carrying
the optimizing arguments and status flags. Negative lower bounds are clamped
to zero and flagged, never silently returned.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .info import DistributionError, InfoDensityDistribution, unit_ball_volume

__all__ = [
    "BoundReport",
    "lb_mi_smallball",
    "lb_info_density",
    "lb_diff_entropy",
    "fano_family",
    "mi_ub_single",
    "mi_ub_multi_iid",
    "mi_ub_cutset",
    "mi_ub_interactive",
    "lb_multi_general",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class BoundReport:
    """A bound value with the argument that achieved it and status flags."""

    value: float
    kind: str
    arguments: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)
    clamped: bool = False
    asymptotic: bool = False
    infeasible: bool = False


def _log_grid(lo: float, hi: float, points: int = 200) -> np.ndarray:
    if not 0.0 < lo < hi:
        raise DistributionError("grid endpoints must satisfy 0 < lo < hi")
    return np.geomspace(lo, hi, points)


def _golden_max(f, lo: float, hi: float, iters: int = 60) -> tuple[float, float]:
    """Golden-section maximization of f on [lo, hi]."""
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def _grid_then_golden(f, grid) -> tuple[float, float]:
    """Maximize f over a grid, then refine locally by golden section."""
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise DistributionError("optimization grid must be nonempty")
    vals = np.array([f(x) for x in grid])
    i = int(np.argmax(vals))
    if not math.isfinite(vals[i]):
        return float(grid[i]), float(vals[i])
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]
    if lo < hi:
        x, fx = _golden_max(f, lo, hi)
        if fx > vals[i]:
            return float(x), float(fx)
    return float(grid[i]), float(vals[i])


def _eta_value(eta) -> float:
    value = float(getattr(eta, "value", eta))
    if not 0.0 <= value <= 1.0:
        raise DistributionError("contraction coefficients lie in [0, 1]")
    return value


def _clamped_report(value, kind, arguments, inputs, asymptotic=False) -> BoundReport:
    clamped = value < 0.0
    return BoundReport(max(value, 0.0), kind, arguments, inputs,
                       clamped=clamped, asymptotic=asymptotic)


def _checked_smallball(smallball, rho: float) -> float:
    val = float(smallball(rho))
    if not 0.0 < val <= 1.0:
        raise DistributionError(
            f"small-ball value {val:.6g} at radius {rho:.6g} is outside (0, 1]")
    return val


# ---------------------------------------------------------------------------
# risk lower bounds


def lb_mi_smallball(mi: float, smallball, rho_grid=None,
                    envelope_inv=None, s_grid=None) -> BoundReport:
    """Risk lower bound from a mutual-information budget and small-ball profile.

    Maximizes rho * (1 - (mi + 1) / log2(1 / L(rho))) over the radius grid,
    where L is the (expected conditional) small-ball probability. When the
    caller supplies ``envelope_inv``, the generalized inverse of an increasing
    envelope g with L(rho) <= g(rho), the alternative parameterization
    sup_s s * g^{-1}(2^{-(mi+1)/(1-s)}) over s in (0, 1) is evaluated as well
    and the larger of the two is returned.

    Parameters
    ----------
    mi : information budget in bits (conditional or unconditional).
    smallball : callable rho -> L(rho), values required to lie in (0, 1].
    rho_grid : radii to scan (default log grid over [1e-6, 1]).
    envelope_inv : optional callable p -> sup{rho : g(rho) <= p}.
    s_grid : grid for the envelope branch (default 199 points in (0, 1)).
    """
    if mi < 0.0:
        raise DistributionError("mutual information cannot be negative")

    def objective(rho):
        L = _checked_smallball(smallball, rho)
        if L >= 1.0:
            return -math.inf
        return rho * (1.0 - (mi + 1.0) / math.log2(1.0 / L))

    arguments: dict = {}
    best = -math.inf
    if rho_grid is None:
        rho_grid = _log_grid(1e-6, 1.0)
    rho_star, val = _grid_then_golden(objective, rho_grid)
    if val > best:
        best = val
        arguments = {"rho": rho_star, "branch": "direct"}

    if envelope_inv is not None:
        if s_grid is None:
            s_grid = np.linspace(0.005, 0.995, 199)

        def env_objective(s):
            if not 0.0 < s < 1.0:
                return -math.inf
            return s * float(envelope_inv(2.0 ** (-(mi + 1.0) / (1.0 - s))))

        s_star, val = _grid_then_golden(env_objective, s_grid)
        if val > best:
            best = val
            arguments = {"s": s_star, "branch": "envelope"}

    return _clamped_report(best, "mi-smallball", arguments, {"mi": mi})


def lb_info_density(density, smallball, rho_grid=None, gamma_grid=None,
                    inf_ratio: float | None = None) -> BoundReport:
    """Risk lower bound from the information-density distribution.

    Maximizes rho * (P[i < log2 gamma] - gamma * L(rho)) jointly over the
    radius and threshold grids. With ``inf_ratio`` (the essential infimum of
    the prior-to-posterior density ratio) the sharper form adds
    gamma * inf_ratio * P[i >= log2 gamma].

    ``density`` may be an ``InfoDensityDistribution`` or a callable mapping a
    threshold in bits to P[i < threshold].
    """
    if isinstance(density, InfoDensityDistribution):
        prob_below = density.prob_below
    else:
        prob_below = density
    if rho_grid is None:
        rho_grid = _log_grid(1e-6, 1.0)
    if gamma_grid is None:
        gamma_grid = _log_grid(1e-3, 1e3)

    best = -math.inf
    arguments: dict = {}
    for gamma in gamma_grid:
        log_gamma = math.log2(gamma)
        p_below = float(prob_below(log_gamma))
        extra = gamma * inf_ratio * (1.0 - p_below) if inf_ratio is not None else 0.0

        def objective(rho, _g=gamma, _p=p_below, _e=extra):
            return rho * (_p - _g * _checked_smallball(smallball, rho) + _e)

        rho_star, val = _grid_then_golden(objective, rho_grid)
        if val > best:
            best = val
            arguments = {"rho": rho_star, "gamma": float(gamma)}

    return _clamped_report(best, "info-density", arguments, {})


def lb_diff_entropy(mi: float, h: float, d: int = 1, r: float = 1.0) -> BoundReport:
    """Risk lower bound for r-th power of norm loss via differential entropy.

    Value: (d / (r e)) (V_d Gamma(1 + d/r))^{-r/d} 2^{-(mi - h) r / d} with
    V_d the unit-ball volume, ``h`` the (conditional) differential entropy of
    the estimand in bits and ``mi`` the information budget in bits.
    """
    if d < 1 or r < 1.0:
        raise DistributionError("need dimension >= 1 and norm exponent >= 1")
    if mi < 0.0:
        raise DistributionError("mutual information cannot be negative")
    const = (d / (r * math.e)) * (unit_ball_volume(d) * math.gamma(1.0 + d / r)) ** (-r / d)
    value = const * 2.0 ** (-(mi - h) * r / d)
    return BoundReport(value, "diff-entropy", {"constant": const},
                       {"mi": mi, "h": h, "d": d, "r": r})


def fano_family(mode: str, **kw) -> BoundReport:
    """Lower bounds on error probability in the Fano family.

    Modes and their keyword arguments:

    * ``classic``: ``mi``, ``m`` — 1 - (mi + 1)/log2(m) for m hypotheses.
    * ``han_verdu``: ``mi``, ``pmax`` — 1 - (mi + 1)/log2(1/pmax).
    * ``poor_verdu``: ``density``, ``m``, optional ``gamma_grid`` —
      sup_gamma (1 - gamma/m) P[i < log2 gamma].
    * ``continuum_mi``: ``mi``, ``smallball_value`` — excess-distortion
      probability bound 1 - (mi + 1)/log2(1/L).
    * ``continuum_id``: ``density``, ``smallball_value``, optional
      ``gamma_grid`` — sup_gamma (P[i < log2 gamma] - gamma L).

    The raw right-hand side is recorded under ``arguments['raw']``; the
    returned value is clamped to be a valid probability lower bound.
    """
    if mode == "classic":
        mi, m = kw["mi"], kw["m"]
        if m < 2:
            raise DistributionError("need at least two hypotheses")
        raw = 1.0 - (mi + 1.0) / math.log2(m)
        return _clamped_report(raw, "fano-classic", {"raw": raw}, {"mi": mi, "m": m})
    if mode == "han_verdu":
        mi, pmax = kw["mi"], kw["pmax"]
        if not 0.0 < pmax < 1.0:
            raise DistributionError("largest prior mass must be interior")
        raw = 1.0 - (mi + 1.0) / math.log2(1.0 / pmax)
        return _clamped_report(raw, "fano-han-verdu", {"raw": raw}, {"mi": mi, "pmax": pmax})
    if mode == "poor_verdu":
        density, m = kw["density"], kw["m"]
        gamma_grid = kw.get("gamma_grid")
        if gamma_grid is None:
            gamma_grid = _log_grid(1e-3, float(m))

        def objective(gamma):
            return (1.0 - gamma / m) * density.prob_below(math.log2(gamma))

        gamma_star, raw = _grid_then_golden(objective, gamma_grid)
        return _clamped_report(raw, "fano-poor-verdu",
                               {"raw": raw, "gamma": gamma_star}, {"m": m})
    if mode == "continuum_mi":
        mi, L = kw["mi"], kw["smallball_value"]
        if not 0.0 < L < 1.0:
            raise DistributionError("small-ball value must lie in (0, 1)")
        raw = 1.0 - (mi + 1.0) / math.log2(1.0 / L)
        return _clamped_report(raw, "fano-continuum-mi", {"raw": raw},
                               {"mi": mi, "smallball_value": L})
    if mode == "continuum_id":
        density, L = kw["density"], kw["smallball_value"]
        gamma_grid = kw.get("gamma_grid")
        if gamma_grid is None:
            gamma_grid = _log_grid(1e-3, 1e3)

        def objective(gamma):
            return density.prob_below(math.log2(gamma)) - gamma * L

        gamma_star, raw = _grid_then_golden(objective, gamma_grid)
        return _clamped_report(raw, "fano-continuum-id",
                               {"raw": raw, "gamma": gamma_star},
                               {"smallball_value": L})
    raise DistributionError(f"unknown fano mode {mode!r}")


# ---------------------------------------------------------------------------
# mutual-information upper bounds for communication protocols


def _min_terms(terms: dict) -> tuple[float, str]:
    active = min(terms, key=terms.get)
    return terms[active], active


def mi_ub_single(i_wx: float, h_x: float, b: float, capacity: float, T: int,
                 eta_stat, eta_uses) -> BoundReport:
    """Information budget of one processor talking over a noisy channel.

    Three ways the data pipe can be the bottleneck: the source information
    itself (contracted by the channel uses), the quantization budget b or
    source entropy (whichever is smaller, contracted twice), and the channel
    capacity over T uses. Records which term is active, and the ordinary
    data-processing value min(i_wx, min(h_x, b), capacity * T) for comparison.
    """
    if T < 1:
        raise DistributionError("use count must be at least 1")
    eta_stat = _eta_value(eta_stat)
    eta_uses = _eta_value(eta_uses)
    terms = {
        "source": i_wx * eta_uses,
        "bits": eta_stat * min(h_x, b) * eta_uses,
        "capacity": eta_stat * capacity * T,
    }
    value, active = _min_terms(terms)
    odpi = min(i_wx, min(h_x, b), capacity * T)
    return BoundReport(value, "mi-ub-single",
                       {"active": active, "terms": terms, "odpi": odpi},
                       {"i_wx": i_wx, "h_x": h_x, "b": b,
                        "capacity": capacity, "T": T,
                        "eta_stat": eta_stat, "eta_uses": eta_uses})


def mi_ub_multi_iid(i_w_all: float, i_w_single: float, eta_stat, m: int,
                    b: float, capacity: float, T: int, eta_uses_T,
                    eta_uses_mT=None) -> BoundReport:
    """Information budget of m processors with conditionally i.i.d. sample sets.

    The source term takes the smaller of the joint information contracted
    over all m T uses and m times the per-processor information contracted
    over T uses. ``eta_uses_mT`` defaults to 1 - (1 - eta_uses_T)^m, a valid
    product bound that reduces to eta_uses_T at m = 1.
    """
    if m < 1:
        raise DistributionError("processor count must be at least 1")
    eta_stat = _eta_value(eta_stat)
    eta_T = _eta_value(eta_uses_T)
    eta_mT = 1.0 - (1.0 - eta_T) ** m if eta_uses_mT is None else _eta_value(eta_uses_mT)
    terms = {
        "source": min(i_w_all * eta_mT, m * i_w_single * eta_T),
        "bits": eta_stat * m * b * eta_T,
        "capacity": eta_stat * m * capacity * T,
    }
    value, active = _min_terms(terms)
    return BoundReport(value, "mi-ub-multi-iid",
                       {"active": active, "terms": terms},
                       {"i_w_all": i_w_all, "i_w_single": i_w_single, "m": m,
                        "b": b, "capacity": capacity, "T": T,
                        "eta_stat": eta_stat, "eta_uses_T": eta_T,
                        "eta_uses_mT": eta_mT})


def mi_ub_cutset(i_cond: float, eta_s, num_outside: int, b: float,
                 capacity: float, T: int, eta_uses, colocated: bool = False,
                 m: int | None = None, noiseless: bool = False) -> BoundReport:
    """Information budget across a cutset of processors.

    ``i_cond`` is the information of the estimand with the samples outside
    the cutset given those inside, ``eta_s`` the contraction of the posterior
    channel given the cutset samples, and ``num_outside`` the number of
    processors outside. In the colocated regime the bit and capacity terms
    count all ``m`` transmissions instead of ``num_outside``. With
    ``noiseless`` communication the channel-use contraction disappears and
    the capacity term is dropped.
    """
    if num_outside < 0:
        raise DistributionError("cutset complement size cannot be negative")
    if num_outside == 0:
        return BoundReport(0.0, "mi-ub-cutset", {"active": "empty"}, {"num_outside": 0})
    if colocated and m is None:
        raise DistributionError("colocated form needs the processor count m")
    eta_s = _eta_value(eta_s)
    eta_uses = 1.0 if noiseless else _eta_value(eta_uses)
    mult = m if colocated else num_outside
    terms = {
        "source": i_cond * eta_uses,
        "bits": eta_s * mult * b * eta_uses,
    }
    if not noiseless:
        terms["capacity"] = eta_s * mult * capacity * T
    value, active = _min_terms(terms)
    return BoundReport(value, "mi-ub-cutset",
                       {"active": active, "terms": terms},
                       {"i_cond": i_cond, "eta_s": eta_s,
                        "num_outside": num_outside, "b": b, "capacity": capacity,
                        "T": T, "colocated": colocated, "m": m,
                        "noiseless": noiseless})


def mi_ub_interactive(alpha: float, n: int, m: int, b: float,
                      i_w_all: float) -> BoundReport:
    """Information budget for one round of serial (interactive) transmissions.

    ``alpha`` is the pairwise likelihood-ratio floor of the per-sample
    observation channel; n conditionally independent samples weaken it to
    alpha^n, so the messages carry at most (1 - alpha^n) m b bits about the
    estimand regardless of the interaction pattern.
    """
    if not 0.0 <= alpha <= 1.0:
        raise DistributionError("ratio floor must lie in [0, 1]")
    if n < 0 or m < 1:
        raise DistributionError("need n >= 0 samples and m >= 1 processors")
    terms = {
        "source": i_w_all,
        "bits": (1.0 - alpha ** n) * m * b if n > 0 else 0.0,
    }
    value, active = _min_terms(terms)
    return BoundReport(value, "mi-ub-interactive",
                       {"active": active, "terms": terms},
                       {"alpha": alpha, "n": n, "m": m, "b": b})


def lb_multi_general(cutsets, mode: str, d: int = 1, r: float = 1.0,
                     rho_grid=None, envelope_inv=None) -> BoundReport:
    """Best risk lower bound over a collection of cutsets.

    Each entry of ``cutsets`` is a tuple; for mode ``diffentropy`` it is
    (label, i_cond, h_cond) and feeds ``lb_diff_entropy``; for mode
    ``smallball`` it is (label, i_cond, smallball_fn) and feeds
    ``lb_mi_smallball``. The report of the winning cutset is returned with
    its label recorded.
    """
    cutsets = list(cutsets)
    if not cutsets:
        raise DistributionError("at least one cutset is required")
    best: BoundReport | None = None
    best_label = None
    for entry in cutsets:
        if mode == "diffentropy":
            label, i_cond, h_cond = entry
            rep = lb_diff_entropy(i_cond, h_cond, d=d, r=r)
        elif mode == "smallball":
            label, i_cond, smallball = entry
            rep = lb_mi_smallball(i_cond, smallball, rho_grid=rho_grid,
                                  envelope_inv=envelope_inv)
        else:
            raise DistributionError(f"unknown cutset mode {mode!r}")
        if best is None or rep.value > best.value:
            best, best_label = rep, label
    arguments = dict(best.arguments)
    arguments["cutset"] = best_label
    return BoundReport(best.value, best.kind, arguments, best.inputs,
                       clamped=best.clamped, asymptotic=best.asymptotic)
