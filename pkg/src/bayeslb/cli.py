"""Command-line front end: evaluate bounds, run scenarios, emit figure data.

Every CSV the tool writes starts with '#'-prefixed manifest lines carrying
the tool version, a canonical command line, the full model echo, and the
resolved seed, so the file can be regenerated byte-for-byte by re-running
the manifest command. Timestamps are added only on request since they break
reproducibility. Exit codes: 0 success, 1 failed --check, 2 usage error.
"""
from __future__ import annotations

import argparse
import dataclasses
import math
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import (lb_diff_entropy, lb_mi_smallball, mi_ub_cutset,
                     mi_ub_interactive, mi_ub_multi_iid, mi_ub_single)
from .info import (DistortionSpec, DistributionError, PriorSpec,
                   UnsupportedPairError, small_ball)
from .scenarios import (ScenarioSpec, fig2_data, fig34_data,
                        scenario_bern_bsc, scenario_bern_uniform,
                        scenario_bsc_bit, scenario_dglm_decentralized,
                        scenario_gauss_ball, scenario_gauss_gauss,
                        scenario_hide_seek, scenario_hypercube,
                        scenario_minimax_cube, scenario_noisy_ceo,
                        scenario_xor)
from .simulate import (SimulationConfig, sandwich_check, simulate_multi,
                       simulate_single_processor)

__all__ = ["RunManifest", "main", "build_parser"]

_SCENARIO_FNS = {
    "gauss-gauss": scenario_gauss_gauss,
    "bern-uniform": scenario_bern_uniform,
    "gauss-ball": scenario_gauss_ball,
    "bsc-bit": scenario_bsc_bit,
    "hypercube": scenario_hypercube,
    "bern-bsc": scenario_bern_bsc,
    "dglm": scenario_dglm_decentralized,
    "minimax-cube": scenario_minimax_cube,
    "ceo": scenario_noisy_ceo,
    "xor": scenario_xor,
    "hide-seek": scenario_hide_seek,
}

_SINGLE_SCHEMES = ("gauss-gauss", "bern-bsc", "bsc-bit")
_MULTI_SCHEMES = ("xor", "xor-colocated", "gauss-multi")
_SCHEME_TAGS = {"gauss-gauss": "gauss-gauss", "bern-bsc": "bern-bsc",
                "bsc-bit": "bsc-bit", "xor": "xor", "xor-colocated": "xor",
                "gauss-multi": "dglm"}

_SPEC_FLAGS = [
    ("n", "--n"), ("b", "--b"), ("T", "--T"), ("m", "--m"), ("d", "--d"),
    ("eps", "--eps"), ("var_w", "--var-w"), ("var_noise", "--var-noise"),
    ("delta", "--delta"), ("rho", "--rho"), ("radius", "--radius"),
    ("total_samples", "--total-samples"), ("total_bits", "--total-bits"),
    ("total_uses", "--total-uses"), ("feedback", "--feedback"),
    ("r", "--r"), ("p", "--p"), ("capacity", "--capacity"),
    ("eta_uses", "--eta-uses"),
]

_BOUND_FLAGS = [
    ("I", "--I"), ("h", "--h"), ("hx", "--hx"), ("i_single", "--i-single"),
    ("i_cond", "--i-cond"), ("b", "--b"), ("capacity", "--capacity"),
    ("T", "--T"), ("m", "--m"), ("n", "--n"), ("d", "--d"), ("r", "--r"),
    ("outside", "--outside"), ("eta_stat", "--eta-stat"),
    ("eta_uses", "--eta-uses"), ("eta_uses_mt", "--eta-uses-mt"),
    ("eta_s", "--eta-s"), ("alpha", "--alpha"),
    ("colocated", "--colocated"), ("noiseless", "--noiseless"),
    ("prior", "--prior"), ("prior_var", "--prior-var"),
    ("prior_dim", "--prior-dim"), ("prior_radius", "--prior-radius"),
    ("prior_size", "--prior-size"), ("distortion", "--distortion"),
    ("distortion_r", "--distortion-r"),
]


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise DistributionError(f"cannot read {text!r} as a boolean")


def _parse_etas(text: str) -> tuple:
    return tuple(float(part) for part in text.split(","))


_CONFIG_TYPES = {
    "n": int, "b": float, "T": int, "m": int, "d": int, "eps": float,
    "var_w": float, "var_noise": float, "delta": float, "rho": float,
    "radius": float, "total_samples": int, "total_bits": float,
    "total_uses": int, "feedback": _parse_bool, "r": float, "p": float,
    "capacity": float, "eta_uses": float, "reps": int, "seed": int,
    "alpha": float, "etas": _parse_etas, "points": int, "thm": int,
    "I": float, "h": float, "hx": float, "i_single": float, "i_cond": float,
    "eta_stat": float, "eta_s": float, "eta_uses_mt": float, "outside": int,
    "colocated": _parse_bool, "noiseless": _parse_bool, "parallel": int,
    "check": _parse_bool, "timestamp": _parse_bool, "csv": _parse_bool,
    "prior": str, "prior_var": float, "prior_dim": int,
    "prior_radius": float, "prior_size": int, "distortion": str,
    "distortion_r": float,
}


def _load_config(path: str) -> dict:
    """Flat key=value file; '#' starts a comment, keys use flag spellings."""
    values = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DistributionError(f"config line {raw!r} is not key=value")
        key, text = (part.strip() for part in line.split("=", 1))
        dest = key.replace("-", "_")
        if dest not in _CONFIG_TYPES:
            raise DistributionError(f"unknown config key {key!r}")
        values[dest] = _CONFIG_TYPES[dest](text)
    return values


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("BAYESLB_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise DistributionError("BAYESLB_SEED must be an integer") from None
    return 0


# ---------------------------------------------------------------------------
# formatting


def _text(value) -> str:
    if isinstance(value, bool):
        return "True" if value else "False"
    if isinstance(value, (float, np.floating)):
        return "%.9g" % value
    return str(value)


def _arg_text(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ",".join(repr(float(part)) for part in value)
    return str(value)


def _canonical(head: list, args, flags) -> list:
    tokens = list(head)
    for dest, flag in flags:
        value = getattr(args, dest, None)
        if value is None:
            continue
        if isinstance(value, bool):
            if value:
                tokens.append(flag)
            continue
        tokens.extend([flag, _arg_text(value)])
    return tokens


def _flat_items(mapping: dict, prefix: str = "") -> list:
    items = []
    for key, value in mapping.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            items.extend(_flat_items(value, name + "."))
        elif isinstance(value, (list, tuple, np.ndarray)):
            continue
        else:
            items.append((name, value))
    return items


@dataclasses.dataclass(frozen=True)
class RunManifest:
    command: str
    spec: ScenarioSpec | None = None
    seed: int | None = None
    version: str = __version__
    timestamp: str | None = None

    def lines(self) -> list:
        out = [f"# bayeslb {self.version}", f"# command: {self.command}"]
        if self.spec is not None:
            echo = " ".join(
                f"{field.name}={_arg_text(getattr(self.spec, field.name))}"
                for field in dataclasses.fields(self.spec))
            out.append(f"# spec: {echo}")
        if self.seed is not None:
            out.append(f"# seed: {self.seed}")
        if self.timestamp is not None:
            out.append(f"# timestamp: {self.timestamp}")
        return out


def _manifest(tokens: list, args, spec=None, seed=None) -> RunManifest:
    stamp = None
    if getattr(args, "timestamp", False):
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return RunManifest(" ".join(tokens), spec=spec, seed=seed, timestamp=stamp)


def _emit(lines: list, out_path) -> None:
    text = "\n".join(lines) + "\n"
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# bound subcommand


def _prior_from_args(args) -> PriorSpec:
    if args.prior is None:
        raise DistributionError("this theorem needs --prior")
    return PriorSpec(args.prior.replace("-", "_"),
                     var=args.prior_var if args.prior_var is not None else 0.0,
                     dim=args.prior_dim,
                     radius=args.prior_radius if args.prior_radius is not None else 0.0,
                     size=args.prior_size if args.prior_size is not None else 0)


def _inf(value) -> float:
    return math.inf if value is None else value


def _bound_report(args):
    if args.thm == 1:
        if args.I is None:
            raise DistributionError("--thm 1 needs --I and a prior family")
        prior = _prior_from_args(args)
        kind = (args.distortion or "absolute").replace("-", "_")
        dist = DistortionSpec(kind, r=args.distortion_r)
        return lb_mi_smallball(args.I, lambda rho: small_ball(prior, rho, dist))
    if args.thm == 2:
        raise DistributionError(
            "--thm 2 needs a full information-density distribution; "
            "drive bounds.lb_info_density from Python instead")
    if args.thm == 3:
        if args.I is None or args.h is None:
            raise DistributionError("--thm 3 needs --I and --h")
        return lb_diff_entropy(args.I, args.h, d=args.d, r=args.r)
    if args.thm == 4:
        return mi_ub_single(_inf(args.I), _inf(args.hx), _inf(args.b),
                            _inf(args.capacity), args.T,
                            args.eta_stat, args.eta_uses)
    if args.thm == 5:
        return mi_ub_multi_iid(_inf(args.I), _inf(args.i_single),
                               args.eta_stat, args.m, _inf(args.b),
                               _inf(args.capacity), args.T, args.eta_uses,
                               eta_uses_mT=args.eta_uses_mt)
    if args.thm == 6:
        if args.outside is None:
            raise DistributionError("--thm 6 needs --outside")
        return mi_ub_cutset(_inf(args.i_cond), args.eta_s, args.outside,
                            _inf(args.b), _inf(args.capacity), args.T,
                            args.eta_uses, colocated=args.colocated,
                            m=args.m if args.colocated else None,
                            noiseless=args.noiseless)
    if args.thm == 7:
        if args.alpha is None:
            raise DistributionError("--thm 7 needs --alpha")
        return mi_ub_interactive(args.alpha, args.n, args.m, _inf(args.b),
                                 _inf(args.I))
    raise DistributionError(f"no theorem {args.thm}; choose from 1-7")


def cmd_bound(args) -> int:
    report = _bound_report(args)
    pairs = [("value", report.value), ("kind", report.kind),
             ("clamped", report.clamped), ("asymptotic", report.asymptotic),
             ("infeasible", report.infeasible)]
    pairs += _flat_items(report.arguments)
    pairs += _flat_items(report.inputs, "input.")
    if args.csv:
        tokens = _canonical(["bound", "--thm", str(args.thm)], args, _BOUND_FLAGS)
        lines = _manifest(tokens, args).lines()
        lines += ["key,value"] + [f"{k},{_text(v)}" for k, v in pairs]
    else:
        lines = [f"{k}={_text(v)}" for k, v in pairs]
    _emit(lines, args.out)
    return 0


# ---------------------------------------------------------------------------
# scenario subcommand


def _spec_from_args(tag: str, args) -> ScenarioSpec:
    return ScenarioSpec(tag=tag, n=args.n, b=args.b, T=args.T, m=args.m,
                        d=args.d, eps=args.eps, var_w=args.var_w,
                        var_noise=args.var_noise, delta=args.delta,
                        rho_bias=args.rho, radius=args.radius,
                        total_samples=args.total_samples,
                        total_bits=args.total_bits,
                        total_uses=args.total_uses, feedback=args.feedback,
                        r=args.r, p=args.p, capacity=args.capacity,
                        eta_uses=args.eta_uses)


def _scenario_report(tag: str, spec: ScenarioSpec, args, seed: int):
    if tag == "ceo":
        if args.alpha is None:
            raise DistributionError("the CEO scenario needs --alpha")
        return scenario_noisy_ceo(spec, args.alpha)
    if tag == "gauss-ball":
        return scenario_gauss_ball(spec, reps=args.reps, seed=seed)
    return _SCENARIO_FNS[tag](spec)


def _report_rows(report) -> list:
    header = "group,name,value,kind,asymptotic,clamped,infeasible"
    rows = []
    for name, bound in report.lower_bounds.items():
        rows.append(("lower", name, bound.value, bound.kind,
                     bound.asymptotic, bound.clamped, bound.infeasible))
    for name, value in report.upper_bounds.items():
        rows.append(("upper", name, value, "achievable", False, False, False))
    for name, value in report.derived.items():
        if hasattr(value, "value"):
            rows.append(("derived", name, value.value, value.kind,
                         value.asymptotic, value.clamped, value.infeasible))
        elif isinstance(value, (bool, int, float, np.floating)):
            rows.append(("derived", name, value, "derived", False, False, False))
    return [header] + [",".join(_text(cell) for cell in row) for row in rows]


def cmd_scenario(args) -> int:
    seed = _resolve_seed(args)
    args.seed = seed
    spec = _spec_from_args(args.tag, args)
    report = _scenario_report(args.tag, spec, args, seed)
    extra = [("alpha", "--alpha"), ("reps", "--reps"), ("seed", "--seed")]
    tokens = _canonical(["scenario", args.tag], args, _SPEC_FLAGS + extra)
    lines = _manifest(tokens, args, spec=spec, seed=seed).lines()
    lines += _report_rows(report)
    _emit(lines, args.out)
    return 0


# ---------------------------------------------------------------------------
# simulate subcommand


def cmd_simulate(args) -> int:
    if args.reps is None:
        raise DistributionError("simulate needs --reps")
    seed = _resolve_seed(args)
    args.seed = seed
    tag = _SCHEME_TAGS[args.scheme]
    if args.scheme == "gauss-multi":
        # the scheme ships raw local means; model them as 64-bit words so the
        # paired report's bit budget is not the binding term
        if args.total_samples is None:
            args.total_samples = args.m * args.n
        if args.total_bits is None:
            args.total_bits = 64.0 * args.m * args.d
    spec = _spec_from_args(tag, args)
    config = SimulationConfig(spec=spec, replications=args.reps, seed=seed,
                              parallelism=args.parallel, scheme=args.scheme)
    if args.scheme in _SINGLE_SCHEMES:
        result = simulate_single_processor(config)
    else:
        result = simulate_multi(config)
    extra = [("reps", "--reps"), ("seed", "--seed"), ("check", "--check")]
    tokens = _canonical(["simulate", args.scheme], args, _SPEC_FLAGS + extra)
    lines = _manifest(tokens, args, spec=spec, seed=seed).lines()
    lines.append("scheme,empirical_risk,ci_halfwidth,replications,seed")
    lines.append(",".join([result.scheme, _text(result.empirical_risk),
                           _text(result.ci_halfwidth),
                           str(result.replications), str(result.seed)]))
    code = 0
    if args.check:
        report = _scenario_report(tag, spec, args, seed)
        verdict = sandwich_check(report, result)
        lines.append(f"# check: {'pass' if verdict.passed else 'FAIL'}")
        lines += [f"# check-failure: {text}" for text in verdict.hard_failures]
        lines += [f"# advisory: {text}" for text in verdict.advisories]
        if not verdict.passed:
            code = 1
    _emit(lines, args.out)
    return code


# ---------------------------------------------------------------------------
# figure subcommand


def cmd_figure(args) -> int:
    if args.which == "fig2":
        grid = np.linspace(1.0 - 2.0 * args.p, 1.0, args.points)
        header, rows = fig2_data(p=args.p, delta_grid=grid, etas=args.etas)
        flags = [("p", "--p"), ("etas", "--etas"), ("points", "--points")]
    else:
        if args.b is None:
            args.b = 3.0 * args.d
        if args.which == "fig3":
            header, rows = fig34_data(m=args.m, d=args.d, b=args.b,
                                      rho_rule="quarter_n")
            flags = [("m", "--m"), ("d", "--d"), ("b", "--b")]
        else:
            header, rows = fig34_data(m=args.m, d=args.d, b=args.b,
                                      rho_rule="fixed", rho=args.rho)
            flags = [("m", "--m"), ("d", "--d"), ("b", "--b"), ("rho", "--rho")]
    tokens = _canonical(["figure", args.which], args, flags)
    lines = _manifest(tokens, args).lines()
    lines.append(",".join(header))
    lines += [",".join(_text(cell) for cell in row) for row in rows]
    _emit(lines, args.out)
    return 0


# ---------------------------------------------------------------------------
# parser assembly


def _add_common(parser) -> None:
    parser.add_argument("--out", default=None, help="write output to this file")
    parser.add_argument("--timestamp", action="store_true",
                        help="include a timestamp line (breaks byte reproducibility)")


def _add_spec_args(parser) -> None:
    g = parser.add_argument_group("model parameters")
    g.add_argument("--n", type=int, default=1)
    g.add_argument("--b", type=float, default=0.0)
    g.add_argument("--T", type=int, default=1)
    g.add_argument("--m", type=int, default=1)
    g.add_argument("--d", type=int, default=1)
    g.add_argument("--eps", type=float, default=None)
    g.add_argument("--var-w", dest="var_w", type=float, default=1.0)
    g.add_argument("--var-noise", dest="var_noise", type=float, default=1.0)
    g.add_argument("--delta", type=float, default=1.0)
    g.add_argument("--rho", type=float, default=0.0)
    g.add_argument("--radius", type=float, default=1.0)
    g.add_argument("--total-samples", dest="total_samples", type=int, default=None)
    g.add_argument("--total-bits", dest="total_bits", type=float, default=None)
    g.add_argument("--total-uses", dest="total_uses", type=int, default=None)
    g.add_argument("--feedback", action="store_true")
    g.add_argument("--r", type=float, default=1.0)
    g.add_argument("--p", type=float, default=None)
    g.add_argument("--capacity", type=float, default=None)
    g.add_argument("--eta-uses", dest="eta_uses", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bayeslb",
        description="Lower bounds and simulations for distributed estimation "
                    "under communication constraints.")
    parser.add_argument("--config", default=None,
                        help="flat key=value file of defaults; flags override")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_bound = sub.add_parser("bound", help="evaluate one closed-form bound")
    p_bound.add_argument("--thm", type=int, required=True,
                         help="theorem number, 1-7")
    for dest, flag in _BOUND_FLAGS:
        if dest in ("colocated", "noiseless"):
            p_bound.add_argument(flag, action="store_true")
        elif dest in ("T", "m", "n", "d", "outside", "prior_dim", "prior_size"):
            default = None if dest in ("outside", "prior_size") else 1
            p_bound.add_argument(flag, dest=dest, type=int, default=default)
        elif dest in ("prior", "distortion"):
            p_bound.add_argument(flag, dest=dest, default=None)
        else:
            default = 1.0 if dest in ("eta_stat", "eta_uses", "eta_s",
                                      "r", "distortion_r") else None
            p_bound.add_argument(flag, dest=dest, type=float, default=default)
    p_bound.add_argument("--csv", action="store_true",
                         help="emit key,value CSV with a manifest header")
    _add_common(p_bound)
    p_bound.set_defaults(func=cmd_bound)

    p_scen = sub.add_parser("scenario", help="closed-form report for one model")
    p_scen.add_argument("tag", choices=sorted(_SCENARIO_FNS))
    _add_spec_args(p_scen)
    p_scen.add_argument("--alpha", type=float, default=None,
                        help="small-ball level (CEO scenario)")
    p_scen.add_argument("--reps", type=int, default=None,
                        help="Monte Carlo draws for mass estimates (gauss-ball)")
    p_scen.add_argument("--seed", type=int, default=None)
    _add_common(p_scen)
    p_scen.set_defaults(func=cmd_scenario)

    p_sim = sub.add_parser("simulate", help="Monte Carlo run of one scheme")
    p_sim.add_argument("scheme", choices=sorted(_SINGLE_SCHEMES + _MULTI_SCHEMES))
    _add_spec_args(p_sim)
    p_sim.add_argument("--reps", type=int, default=None)
    p_sim.add_argument("--seed", type=int, default=None)
    p_sim.add_argument("--parallel", type=int, default=1,
                       help="scheduling hint; never changes the output bytes")
    p_sim.add_argument("--check", action="store_true",
                       help="compare against the matching closed-form report")
    _add_common(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_fig = sub.add_parser("figure", help="emit the data behind a figure")
    p_fig.add_argument("which", choices=("fig2", "fig3", "fig4"))
    p_fig.add_argument("--p", type=float, default=0.3)
    p_fig.add_argument("--etas", type=_parse_etas, default=(1.0, 0.75, 0.5))
    p_fig.add_argument("--points", type=int, default=61)
    p_fig.add_argument("--m", type=int, default=10)
    p_fig.add_argument("--d", type=int, default=512)
    p_fig.add_argument("--b", type=float, default=None)
    p_fig.add_argument("--rho", type=float, default=0.01)
    _add_common(p_fig)
    p_fig.set_defaults(func=cmd_figure)
    return parser


def _apply_config(args, config: dict, given: list) -> None:
    """Fill config values into parsed args for flags not given explicitly."""
    for dest, value in config.items():
        flag = "--" + dest.replace("_", "-")
        explicit = any(tok == flag or tok.startswith(flag + "=") for tok in given)
        if not explicit:
            setattr(args, dest, value)


def main(argv=None) -> int:
    raw = list(sys.argv[1:]) if argv is None else list(argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    pre_args, rest = pre.parse_known_args(raw)
    parser = build_parser()
    try:
        args = parser.parse_args(rest)
        if pre_args.config is not None:
            _apply_config(args, _load_config(pre_args.config), rest)
        return args.func(args)
    except (DistributionError, UnsupportedPairError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
