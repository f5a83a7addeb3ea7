"""Command-line interface: ``ruinprob {plan,bound,devylder,exact,simulate,table}``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from typing import Sequence

from . import closed_form, devylder, lundberg, montecarlo, report
from .config import ConfigError, ModelConfig, load_config
from .errors import RuinModelError
from .model import net_profit_margin

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INAPPLICABLE = 3


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _nonneg_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {text}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ruinprob",
        description="Ruin probabilities for a compound-Poisson risk model with additional funds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    model_opts = argparse.ArgumentParser(add_help=False)
    model_opts.add_argument("--config", required=True, help="model config (JSON)")
    model_opts.add_argument("--json", action="store_true", help="emit a JSON record")
    model_opts.add_argument(
        "--x", action="append", type=_nonneg_float, help="initial surplus (repeatable)"
    )

    mc_opts = argparse.ArgumentParser(add_help=False)
    mc_opts.add_argument("--paths", type=_positive_int, help="number of simulated paths")
    mc_opts.add_argument("--seed", type=_seed, help="64-bit seed")
    mc_opts.add_argument("--workers", type=_positive_int, help="worker processes (default: all CPUs)")
    mc_opts.add_argument("--output", choices=("csv", "markdown"), default="csv")

    p = sub.add_parser("plan", help="number of paths for a Hoeffding accuracy target")
    p.add_argument("--epsilon", type=_positive_float, default=0.001)
    p.add_argument("--delta", type=_positive_float, default=0.001)
    p.add_argument("--json", action="store_true")

    sub.add_parser("bound", parents=[model_opts], help="adjustment coefficient and exponential bound")
    sub.add_parser("devylder", parents=[model_opts], help="De Vylder-type approximation")
    sub.add_parser("exact", parents=[model_opts], help="exact ruin probability (exponential pair)")

    s = sub.add_parser("simulate", parents=[model_opts, mc_opts], help="Monte Carlo estimate")
    s.add_argument("--epsilon", type=_positive_float, help="plan paths from epsilon/delta")
    s.add_argument("--delta", type=_positive_float)

    t = sub.add_parser("table", parents=[model_opts, mc_opts], help="comparison table over x_grid")
    t.set_defaults(json=False)
    return parser


def _grid(args, cfg: ModelConfig) -> list[float]:
    return sorted(args.x) if args.x else list(cfg.x_grid)


def _emit(args, record: dict, text: str) -> None:
    if args.json:
        print(json.dumps(record, indent=2))
    else:
        print(text)


def cmd_plan(args) -> int:
    n = montecarlo.hoeffding_n(args.epsilon, args.delta)
    if args.json:
        print(json.dumps({"epsilon": args.epsilon, "delta": args.delta, "n_paths": n}))
    else:
        print(f"N = {n}")
    return EXIT_OK


def cmd_bound(args, cfg: ModelConfig) -> int:
    model = cfg.model
    xs = _grid(args, cfg)
    try:
        adj = lundberg.adjustment_coefficient(model)
    except RuinModelError as exc:
        record = {"error": str(exc), "margin": net_profit_margin(model)}
        if net_profit_margin(model) <= 0:
            record["psi"] = {str(x): 1.0 for x in xs}
        _emit(args, record, f"no exponential bound: {exc}")
        return EXIT_INAPPLICABLE
    values = {x: lundberg.lundberg_bound(adj.r_hat, x) for x in xs}
    record = {
        "r_hat": adj.r_hat,
        "bracket": list(adj.bracket),
        "residual": adj.residual,
        "iterations": adj.iterations,
        "bound": {str(x): v for x, v in values.items()},
    }
    text = [f"R_hat = {adj.r_hat:.6f}"]
    text.append(f"# bracket=({adj.bracket[0]:.6g}, {adj.bracket[1]:.6g}) "
                f"residual={adj.residual:.3g} iterations={adj.iterations}")
    text += [f"x = {x:g}: exp(-R_hat x) = {v:.6f}" for x, v in values.items()]
    _emit(args, record, "\n".join(text))
    return EXIT_OK


def cmd_devylder(args, cfg: ModelConfig) -> int:
    model = cfg.model
    xs = _grid(args, cfg)
    if net_profit_margin(model) <= 0:
        record = {"psi_dv": "1", "degenerate": True, "values": {str(x): 1.0 for x in xs}}
        _emit(args, record, "psi_DV(x) = 1  (net profit condition fails)")
        return EXIT_OK
    try:
        params = devylder.devylder_params(model)
    except RuinModelError as exc:
        _emit(args, {"error": str(exc), "gate": getattr(exc, "gate", None)},
              f"De Vylder approximation inapplicable: {exc}")
        return EXIT_INAPPLICABLE
    rf = devylder.devylder_psi(model)
    values = {x: rf(x) for x in xs}
    record = {
        "params": {
            "premium_rate": params.premium_rate,
            "claim_intensity": params.claim_intensity,
            "claim_mean": params.claim_mean,
            "funds_mean": params.funds_mean,
        },
        "coefficient": rf.coefficient,
        "rate": rf.rate,
        "values": {str(x): v for x, v in values.items()},
    }
    text = [f"psi_DV(x) = {rf.coefficient:.6f} * exp({rf.rate:.6f} x)"]
    text.append(
        f"# c~={params.premium_rate:.6f} lambda~={params.claim_intensity:.6f} "
        f"mu1~={params.claim_mean:.6f} mu2~={params.funds_mean:.6f}"
    )
    text += [f"x = {x:g}: psi_DV = {v:.6f}" for x, v in values.items()]
    _emit(args, record, "\n".join(text))
    return EXIT_OK


def cmd_exact(args, cfg: ModelConfig) -> int:
    model = cfg.model
    xs = _grid(args, cfg)
    try:
        rf = closed_form.exact_exponential_ruin(model)
    except RuinModelError as exc:
        _emit(args, {"error": str(exc)}, f"exact solution inapplicable: {exc}")
        return EXIT_INAPPLICABLE
    values = {x: rf(x) for x in xs}
    record = {
        "coefficient": rf.coefficient,
        "rate": rf.rate,
        "degenerate": rf.degenerate,
        "values": {str(x): v for x, v in values.items()},
    }
    text = [f"psi(x) = {rf}"] + [f"x = {x:g}: psi = {v:.6f}" for x, v in values.items()]
    _emit(args, record, "\n".join(text))
    return EXIT_OK


def cmd_simulate(args, cfg: ModelConfig) -> int:
    model = cfg.model
    xs = _grid(args, cfg)
    if args.paths is not None:
        n = args.paths
    elif args.epsilon is not None or args.delta is not None:
        n = max(1, montecarlo.hoeffding_n(args.epsilon or cfg.mc.epsilon, args.delta or cfg.mc.delta))
    else:
        n = cfg.mc.n_paths
    seed = cfg.mc.seed if args.seed is None else args.seed
    truncation = None if net_profit_margin(model) <= 0 else cfg.mc.truncation(model, xs[0])
    results = montecarlo.estimate_ruin_grid(model, xs, n, seed, truncation, workers=args.workers)
    delta = cfg.mc.delta if args.delta is None else args.delta
    if args.json:
        print(json.dumps({
            "seed": seed,
            "n_paths": n,
            "truncation": repr(truncation),
            "delta": delta,
            "results": [
                {"x": r.x, "psi_hat": r.psi_hat, "ruined": r.ruined, "n_paths": r.n_paths,
                 "truncated_paths": r.truncated_paths, "analytic": r.analytic,
                 "hoeffding_radius": r.hoeffding_radius(delta)}
                for r in results
            ],
        }, indent=2))
        return EXIT_OK
    cols = ["x", "psi_hat", "ruined", "n_paths", "truncated_paths", "hoeffding_radius"]
    print(f"# seed: {seed}")
    print(f"# truncation: {truncation!r}")
    print(f"# delta: {delta:g}")
    if args.output == "markdown":
        print("| " + " | ".join(cols) + " |")
        print("|" + "---|" * len(cols))
    else:
        print(",".join(cols))
    for r in results:
        cells = [f"{r.x:g}", f"{r.psi_hat:.6f}", str(r.ruined), str(r.n_paths),
                 str(r.truncated_paths), f"{r.hoeffding_radius(delta):.6f}"]
        print("| " + " | ".join(cells) + " |" if args.output == "markdown" else ",".join(cells))
    return EXIT_OK


def cmd_table(args, cfg: ModelConfig) -> int:
    if args.x:
        cfg = replace(cfg, x_grid=tuple(sorted(args.x)))
    table = report.build_table(cfg, n_paths=args.paths, seed=args.seed, workers=args.workers)
    if args.output == "markdown":
        sys.stdout.write(report.render_markdown(table))
    else:
        sys.stdout.write(report.render_csv(table))
    return EXIT_OK


_COMMANDS = {
    "bound": cmd_bound,
    "devylder": cmd_devylder,
    "exact": cmd_exact,
    "simulate": cmd_simulate,
    "table": cmd_table,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "plan":
        return cmd_plan(args)
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"ruinprob: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return _COMMANDS[args.command](args, cfg)


if __name__ == "__main__":
    sys.exit(main())
