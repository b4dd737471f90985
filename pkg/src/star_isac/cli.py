"""Command-line entry point: run / sweep / bench.

Exit codes: 0 success, 2 configuration error, 3 runtime error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .experiments import (ConfigError, ScenarioConfig, load_config,
                          measure_runtime, run_scenario, sweep)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="flat dotted-key config file")
    p.add_argument("--out", metavar="DIR", default="results", help="output directory")
    p.add_argument("--algo", choices=["ddpg", "sac"])
    p.add_argument("--protocol", choices=["es", "ts"])
    p.add_argument("--baseline", choices=["star", "spliced", "conventional"])
    p.add_argument("--seeds", help="comma-separated seed list")
    p.add_argument("--episodes", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="star-isac",
        description="STAR-RIS aided ISAC secure-communication experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="train one scenario")
    _add_common(run_p)

    sweep_p = sub.add_parser("sweep", help="sweep one config axis")
    _add_common(sweep_p)
    sweep_p.add_argument("--axis", required=True,
                         choices=["lr", "N", "P_0", "kappa_t", "algorithm",
                                  "protocol", "baseline"])
    sweep_p.add_argument("--values", required=True,
                         help="comma-separated axis values")

    bench_p = sub.add_parser("bench", help="measure per-episode runtime")
    _add_common(bench_p)
    return parser


def resolve_config(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else ScenarioConfig()
    updates = {}
    if args.algo:
        updates["algorithm"] = args.algo
    if args.protocol:
        updates["protocol"] = args.protocol
    if args.baseline:
        updates["baseline"] = args.baseline
    if args.seeds:
        updates["seeds"] = tuple(int(s) for s in args.seeds.split(","))
    if args.episodes is not None:
        updates["episodes"] = args.episodes
    return replace(cfg, **updates) if updates else cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "run":
            summary = run_scenario(cfg, args.out)
            print(f"scenario {summary['scenario_id']}: "
                  f"final return {summary['final_return_mean']:.4g} "
                  f"± {summary['final_return_std']:.4g}, "
                  f"secrecy {summary['final_secrecy_mean']:.4g} bps/Hz")
        elif args.command == "sweep":
            values = args.values.split(",")
            results = sweep(cfg, args.axis, values, args.out)
            for r in results:
                if r["seed"] == "mean":
                    print(f"{args.axis}={r['value']}: "
                          f"return {r['final_return']:.4g}, "
                          f"secrecy {r['final_secrecy']:.4g}")
        else:  # bench
            ms = measure_runtime(cfg)
            print(f"{cfg.algorithm}: {ms:.1f} ms/episode")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
