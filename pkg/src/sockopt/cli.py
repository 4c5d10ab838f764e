"""``sockopt`` command line: every command runs one service pipeline and writes a manifest last."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from typing import Any, get_args

from pydantic import ValidationError

from sockopt import __version__
from sockopt.app.service import SockService
from sockopt.app.settings import (
    POLICY_THRESHOLDS,
    CatalogueConfig,
    EstimationConfig,
    GridConfig,
    OracleConfig,
    PolicyConfig,
    PolicyKind,
    RunSettings,
    TradeoffConfig,
    load_run_config,
)
from sockopt.errors import DataError, GuardExceededError, InvalidInputError, RunCancelledError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_GUARD = 4
EXIT_CANCELLED = 130

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# simulation flag dest -> flat run config key
_SIM_FLAGS = {
    "T": "T",
    "kappa": "kappa",
    "b": "b",
    "theta": "theta",
    "d": "d",
    "rho": "rho",
    "chi": "chi",
    "gamma": "gamma",
    "alpha": "alpha",
    "delta": "delta",
    "lam": "lambda",
    "catalogue": "catalogue",
    "n_designs": "n_designs",
    "features": "features",
    "price_min": "price_min",
    "price_max": "price_max",
    "replenishment": "replenishment",
    "replenishment_rule": "replenishment_rule",
    "wash_when_short": "wash_when_short",
    "diversity": "diversity",
}

_ORACLE_TOKENS = {"verify": {"n", "trials", "seed"}, "coverage": {"trials", "seed"}}


def parse_policies(text: str | None, *, tau_eta: float | None = None, tau_xi: float | None = None) -> list[PolicyConfig]:
    """``purist,greedy`` or ``all``; each policy receives only the threshold flag it uses."""
    if text is None:
        return []
    known = list(get_args(PolicyKind))
    names = known if text.strip().lower() == "all" else [n for n in text.split(",") if n.strip()]
    specs = []
    for name in names:
        kind = name.strip().lower().replace("-", "_")
        if kind not in known:
            msg = f"--policy: unknown policy '{name.strip()}'; choose from {', '.join(known)} or all"
            raise InvalidInputError(msg)
        thresholds: dict[str, Any] = {}
        used = POLICY_THRESHOLDS[kind]
        if used == "tau_eta" and tau_eta is not None:
            thresholds["tau_eta"] = tau_eta
        if used == "tau_xi" and tau_xi is not None:
            thresholds["tau_xi"] = tau_xi
        specs.append(PolicyConfig(kind=kind, **thresholds))
    return specs


def parse_tokens(tokens: Sequence[str], allowed: set[str], flag: str) -> dict[str, int]:
    """``key=value`` integer tokens such as ``n=5 trials=50``."""
    out: dict[str, int] = {}
    for token in tokens:
        key, sep, value = token.partition("=")
        if not sep or key not in allowed:
            msg = f"{flag}: expected one of {', '.join(f'{k}=N' for k in sorted(allowed))}, got '{token}'"
            raise InvalidInputError(msg)
        try:
            out[key] = int(value)
        except ValueError as exc:
            msg = f"{flag}: '{key}' must be an integer, got '{value}'"
            raise InvalidInputError(msg) from exc
    return out


def _run_settings(args: argparse.Namespace) -> dict[str, Any]:
    settings: dict[str, Any] = {"seed": args.seed, "out_dir": args.out}
    if args.jobs is not None:
        settings["jobs"] = args.jobs
    if getattr(args, "reps", None) is not None:
        settings["reps"] = args.reps
    if getattr(args, "trace", False):
        settings["trace"] = True
    return settings


def _simulation_overrides(args: argparse.Namespace) -> dict[str, Any]:
    overrides = {key: getattr(args, dest, None) for dest, key in _SIM_FLAGS.items()}
    overrides["seed"] = args.seed
    return overrides


def _service(args: argparse.Namespace, **configs: Any) -> SockService:
    simulation = load_run_config(args.config, _simulation_overrides(args))
    return SockService(run_settings=_run_settings(args), simulation_config=simulation, **configs)


def _drop_none(values: dict[str, Any]) -> dict[str, Any]:
    return {k: v for k, v in values.items() if v is not None}


def cmd_gen_catalogue(args: argparse.Namespace) -> int:
    spec = CatalogueConfig.model_validate(
        _drop_none({
            "n_designs": args.n,
            "feature_sizes": args.features,
            "price_min": args.price_min,
            "price_max": args.price_max,
            "alpha": args.alpha,
            "distinct": args.distinct,
        })
    )
    service = SockService(run_settings=_run_settings(args))
    response = service.run_command(service.gen_catalogue(spec))
    print(f"{len(response['catalogue'])} designs -> {service.fs.path('catalogue.csv')}")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    service = _service(args)
    policies = parse_policies(args.policy, tau_eta=args.tau_eta, tau_xi=args.tau_xi)
    if not policies and (args.tau_eta is not None or args.tau_xi is not None):
        policies = parse_policies(service.simulation_config.policy.kind, tau_eta=args.tau_eta, tau_xi=args.tau_xi)
    response = service.run_command(service.run_simulation(policies or None, reps=args.reps, trace=args.trace))
    for row in response["table"].table_rows():
        print(f"{row['policy']}: infeasible_days={row['infeasible_days']:.2f} social={row['cost_soc']:.2f}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    grid = _drop_none({
        "d_values": args.d_values,
        "theta_values": args.theta_values,
        "policies": [spec.model_dump() for spec in parse_policies(args.policies)] or None,
    })
    service = _service(args, grid_config=GridConfig.model_validate(grid))
    response = service.run_command(service.run_sweep(reps=args.reps))
    print(f"{len(response['grid'].cells)} grid rows -> {service.fs.path('grid.csv')}")
    return EXIT_OK


def cmd_tradeoff(args: argparse.Namespace) -> int:
    sweep = TradeoffConfig.model_validate(
        _drop_none({
            "tau_xi_values": args.tau_xi_values,
            "families": args.families.split(",") if args.families else None,
            "baseline_tau_eta": args.baseline_tau_eta,
        })
    )
    service = _service(args, tradeoff_config=sweep)
    response = service.run_command(service.run_tradeoff(reps=args.reps))
    print(f"{len(response['tradeoff'].all_points())} trade-off points -> {service.fs.path('tradeoff.csv')}")
    return EXIT_OK


def _estimation_config(args: argparse.Namespace) -> EstimationConfig:
    ridge = getattr(args, "ridge", None)
    return EstimationConfig.model_validate(
        _drop_none({
            "ridge_chi": ridge,
            "ridge_delta": ridge,
            "respondents": getattr(args, "respondents", None),
            "n_trials": getattr(args, "n_trials", None),
            "n_sets": getattr(args, "n_sets", None),
            "n_sims": getattr(args, "n_sims", None),
            "trial_design": getattr(args, "trial_design", None),
        })
    )


def cmd_estimate(args: argparse.Namespace) -> int:
    service = _service(args, estimation_config=_estimation_config(args))
    if args.what == "chi":
        response = service.run_command(service.estimate_chi(args.input))
    elif args.what == "delta":
        response = service.run_command(service.estimate_delta(args.input))
    else:
        response = service.run_command(service.estimate_synthetic())
        summary = response["summary"]
        print(f"chi MAE {summary['chi_mae']}, delta MAE {summary['delta_mae']}")
    print(f"{len(response['fits'])} respondents -> {service.fs.path('results.csv')}")
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    service = SockService(run_settings=_run_settings(args), oracle_config=OracleConfig())
    if args.what == "solve":
        response = service.run_command(service.oracle_solve(args.input))
        print(f"{response['solution']['kind']} -> {service.fs.path('solution.json')}")
        return EXIT_OK
    tokens = parse_tokens(args.random, _ORACLE_TOKENS[args.what], "--random")
    if args.what == "verify":
        run = service.oracle_verify(n_items=tokens.get("n"), trials=tokens.get("trials"), seed=tokens.get("seed"))
    else:
        run = service.oracle_coverage(trials=tokens.get("trials"), seed=tokens.get("seed"))
    response = service.run_command(run)
    print(response["summary"])
    return EXIT_OK if response["report"].ok else EXIT_FAILED_CHECK


def _csv_ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(","))


def _csv_floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(","))


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, required=True, help="master seed for every random stream")
    common.add_argument("--jobs", type=int, default=None, help="worker processes (default $SOCKOPT_JOBS or 1)")
    common.add_argument("--out", default="sockopt-out", help="output directory")
    common.add_argument("--config", default=None, help="flat YAML run config; flags win")
    common.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return common


def _simulation_parser() -> argparse.ArgumentParser:
    sim = argparse.ArgumentParser(add_help=False)
    group = sim.add_argument_group("model")
    group.add_argument("--T", type=int)
    group.add_argument("--kappa", type=int)
    group.add_argument("--b", type=float)
    group.add_argument("--theta", type=int)
    group.add_argument("--d", type=float)
    group.add_argument("--rho", type=float)
    group.add_argument("--chi", type=float)
    group.add_argument("--gamma", type=float)
    group.add_argument("--alpha", type=float)
    group.add_argument("--delta", type=float)
    group.add_argument("--lambda", dest="lam", type=float)
    group.add_argument("--catalogue", help="catalogue CSV; generated from the seed when omitted")
    group.add_argument("--n-designs", type=int)
    group.add_argument("--features", type=_csv_ints, help="feature cardinalities, e.g. 32,13,3")
    group.add_argument("--price-min", type=int)
    group.add_argument("--price-max", type=int)
    group.add_argument("--replenishment", action=argparse.BooleanOptionalAction, default=None)
    group.add_argument("--replenishment-rule", choices=["cheapest_match", "exposure_aware", "matchable"])
    group.add_argument(
        "--wash-when-short",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="wash a partial laundry buffer when fewer than two clean socks remain (default on)",
    )
    group.add_argument("--diversity", choices=["shannon", "dispersion"])
    group.add_argument("--reps", type=int, help="replications")
    return sim


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    sim = _simulation_parser()
    parser = argparse.ArgumentParser(prog="sockopt", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-catalogue", parents=[common], help="write a synthetic catalogue CSV")
    gen.add_argument("--n", type=int)
    gen.add_argument("--features", type=_csv_ints)
    gen.add_argument("--price-min", type=int)
    gen.add_argument("--price-max", type=int)
    gen.add_argument("--alpha", type=float)
    gen.add_argument("--distinct", choices=["auto", "always", "never"])
    gen.set_defaults(handler=cmd_gen_catalogue)

    simulate = sub.add_parser("simulate", parents=[common, sim], help="replicate one configuration")
    simulate.add_argument("--policy", help="policy name, comma list, or all")
    simulate.add_argument("--tau-eta", type=float)
    simulate.add_argument("--tau-xi", type=float)
    simulate.add_argument("--trace", action="store_true", help="also write the per-day trace")
    simulate.set_defaults(handler=cmd_simulate)

    sweep = sub.add_parser("sweep", parents=[common, sim], help="(theta, d, policy) grid")
    sweep.add_argument("--grid", choices=["default"], default="default")
    sweep.add_argument("--d-values", type=_csv_floats)
    sweep.add_argument("--theta-values", type=_csv_ints)
    sweep.add_argument("--policies", help="comma list of policies (default: the four reference policies)")
    sweep.set_defaults(handler=cmd_sweep)

    tradeoff = sub.add_parser("tradeoff", parents=[common, sim], help="mixing thresholds against Purist")
    tradeoff.add_argument("--tau-xi-values", type=_csv_floats)
    tradeoff.add_argument("--families", help="comma list of threshold_mix, orphan_rescue")
    tradeoff.add_argument("--baseline-tau-eta", type=float)
    tradeoff.set_defaults(handler=cmd_tradeoff)

    estimate = sub.add_parser("estimate", help="preference estimation")
    est_sub = estimate.add_subparsers(dest="what", required=True)
    for what, help_text in (("chi", "pairwise-comparison CSV"), ("delta", "bundle-choice CSV")):
        p = est_sub.add_parser(what, parents=[common], help=f"fit from a {help_text}")
        p.add_argument("--in", dest="input", required=True)
        p.add_argument("--ridge", type=float)
        p.set_defaults(handler=cmd_estimate)
    synthetic = est_sub.add_parser("synthetic", parents=[common, sim], help="generate, fit and summarise a study")
    synthetic.add_argument("--respondents", type=int)
    synthetic.add_argument("--n-trials", type=int)
    synthetic.add_argument("--n-sets", type=int)
    synthetic.add_argument("--n-sims", type=int)
    synthetic.add_argument("--trial-design", choices=["contrast", "factorial"])
    synthetic.add_argument("--ridge", type=float)
    synthetic.set_defaults(handler=cmd_estimate)

    oracle = sub.add_parser("oracle", help="exact solvers and reduction checks")
    or_sub = oracle.add_subparsers(dest="what", required=True)
    verify = or_sub.add_parser("verify", parents=[common], help="random knapsack reduction sweep")
    verify.add_argument("--random", nargs="*", default=[], metavar="KEY=N", help="n=, trials=, seed=")
    verify.set_defaults(handler=cmd_oracle)
    coverage = or_sub.add_parser("coverage", parents=[common], help="random greedy-ratio sweep")
    coverage.add_argument("--random", nargs="*", default=[], metavar="KEY=N", help="trials=, seed=")
    coverage.set_defaults(handler=cmd_oracle)
    solve = or_sub.add_parser("solve", parents=[common], help="solve an instance JSON")
    solve.add_argument("--in", dest="input", required=True)
    solve.set_defaults(handler=cmd_oracle)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT)
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except GuardExceededError as exc:
        print(f"sockopt: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except DataError as exc:
        print(f"sockopt: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (InvalidInputError, ValidationError) as exc:
        print(f"sockopt: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RunCancelledError, KeyboardInterrupt) as exc:
        detail = f" ({exc})" if str(exc) else ""
        print(f"sockopt: {args.command} cancelled{detail}", file=sys.stderr)
        return EXIT_CANCELLED
    except Exception:
        logger.exception("sockopt %s failed", args.command)
        raise


if __name__ == "__main__":
    sys.exit(main())
