"""Command-line surface: run experiments, reproduce the benchmark table,
and certify the exploration trade-off on paired simulations."""

from __future__ import annotations

import argparse
import json
import sys

from .analysis import alternative_problem, make_certificate
from .core import problem_from_dict
from .harness import (
    ExperimentConfig,
    derive_seed,
    paper_problem,
    policy_label,
    run_experiment,
    run_single,
    write_results,
)

_BENCHMARK_POLICIES = (
    {"kind": "ahb", "alpha": 0.5},
    {"kind": "ucb", "sigma": 0.01},
    {"kind": "ucb", "sigma": 1.0},
    {"kind": "ucb", "sigma": 10.0},
    {"kind": "range_ucb"},
    {"kind": "inflated_ucb"},
    {"kind": "ftl"},
    {"kind": "random"},
)


def _cmd_run(args) -> int:
    try:
        config = ExperimentConfig.from_json_file(args.config)
    except (OSError, ValueError, TypeError, KeyError) as exc:
        print(f"error: bad config {args.config}: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        config = ExperimentConfig.from_dict({**_config_dict(config), "base_seed": args.seed})
    out = args.out or config.out
    if not out:
        print("error: no output path (--out or config 'out')", file=sys.stderr)
        return 2
    table = run_experiment(config, workers=args.threads)
    write_results(table, out)
    for policy, scale, run_index, message in table.failures:
        print(f"run failed: {policy} scale={scale:g} run={run_index}: {message}",
              file=sys.stderr)
    print(f"wrote {len(table.rows)} rows to {out}")
    return 1 if table.failures else 0


def _config_dict(config: ExperimentConfig) -> dict:
    return {
        "policies": list(config.policies),
        "scales": list(config.scales),
        "horizon": config.horizon,
        "runs": config.runs,
        "base_seed": config.base_seed,
        "variance": config.variance,
        "problem": config.problem,
        "couple_scales": config.couple_scales,
        "out": config.out,
    }


def _cmd_paper_experiment(args) -> int:
    variance = 0.25 if args.variance == "high" else 0.01
    config = ExperimentConfig(
        policies=_BENCHMARK_POLICIES,
        scales=(0.01, 0.1, 1.0, 10.0),
        horizon=args.scale_T,
        runs=args.runs,
        base_seed=args.seed,
        variance=variance,
    )
    table = run_experiment(config, workers=args.threads)
    write_results(table, args.out)
    for policy, scale, run_index, message in table.failures:
        print(f"run failed: {policy} scale={scale:g} run={run_index}: {message}",
              file=sys.stderr)
    print(f"wrote {len(table.rows)} rows to {args.out}")
    return 1 if table.failures else 0


def _pull_fraction(policy_spec, problem, arm, horizon, seeds) -> float:
    total = 0
    for seed in seeds:
        record = run_single(policy_spec, problem, horizon, seed)
        total += int(record.counts[arm])
    return total / (len(seeds) * horizon)


def _cmd_certify(args) -> int:
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except (OSError, ValueError) as exc:
        print(f"error: bad config {args.config}: {exc}", file=sys.stderr)
        return 2

    problem = problem_from_dict(cfg["problem"]) if "problem" in cfg else paper_problem()
    arm = int(cfg.get("arm", 1))
    eps = float(cfg.get("eps", 0.1))
    policy_spec = cfg.get("policy", {"kind": "random"})
    horizon = int(cfg.get("horizon", 2000))
    runs = int(cfg.get("runs", 100))
    base_seed = int(cfg.get("base_seed", 0))

    try:
        perturbed = alternative_problem(problem, arm, eps)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    pid = policy_label(policy_spec)
    seeds = [derive_seed(base_seed, pid, 0, ri) for ri in range(runs)]
    frac_original = _pull_fraction(policy_spec, problem, arm, horizon, seeds)
    frac_alternative = _pull_fraction(policy_spec, perturbed, arm, horizon, seeds)
    cert = make_certificate(eps, frac_original, frac_alternative, frac_original * horizon)

    print(f"policy {pid}, arm {arm}, eps {eps:g}, T {horizon}, runs {runs}")
    print(f"pull fraction: original {frac_original:.6f}, alternative {frac_alternative:.6f}")
    verdict = "VALID" if cert.valid else "VIOLATED"
    print(f"lhs {cert.lhs:.6f} <= rhs {cert.rhs:.6f} + 1e-9: {verdict}")
    return 0 if cert.valid else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rangeband",
        description="Scale-free bandit experiments and diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment config to a CSV table")
    p_run.add_argument("--config", required=True, help="experiment config JSON")
    p_run.add_argument("--out", default=None, help="output CSV path")
    p_run.add_argument("--threads", type=int, default=1, help="worker processes")
    p_run.add_argument("--seed", type=int, default=None, help="override base seed")
    p_run.set_defaults(func=_cmd_run)

    p_paper = sub.add_parser(
        "paper-experiment", help="desk-scale truncated-Gaussian benchmark"
    )
    p_paper.add_argument("--variance", choices=("high", "low"), default="high",
                         help="V = 0.25 (high) or 0.01 (low)")
    p_paper.add_argument("--scale-T", dest="scale_T", type=int, default=20000,
                         help="horizon per run")
    p_paper.add_argument("--runs", type=int, default=50, help="runs per cell")
    p_paper.add_argument("--out", default="results.csv", help="output CSV path")
    p_paper.add_argument("--seed", type=int, default=0, help="base seed")
    p_paper.add_argument("--threads", type=int, default=1, help="worker processes")
    p_paper.set_defaults(func=_cmd_paper_experiment)

    p_cert = sub.add_parser(
        "certify-tradeoff",
        help="check the change-of-measure inequality on paired simulations",
    )
    p_cert.add_argument("--config", required=True, help="certificate config JSON")
    p_cert.set_defaults(func=_cmd_certify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
