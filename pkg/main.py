#!/usr/bin/env python3
"""
Varnet

Variational neural networks, four uncertainty baselines and an exact
NNGP-posterior benchmark.

Usage:
    python main.py bench-uq [--config FILE] [--profile desk|paper] [--jobs N]
    python main.py classify [--config FILE]
    python main.py gp-check [--perturb-kernel]

Common flags: --config PATH (INI file or an earlier manifest.json),
--out DIR, --seed U64. Exit codes: 0 ok, 1 runtime or check failure,
2 configuration error or missing data.
"""
import argparse
import logging
import sys

import config
from cli import cmd_bench_uq, cmd_classify, cmd_gp_check
from errors import ConfigError, ParseError, VarnetError
from oracle.check import N_NETWORKS, N_PAIRS, WIDTH

logger = logging.getLogger(__name__)

COMMANDS = {
    "bench-uq": cmd_bench_uq,
    "classify": cmd_classify,
    "gp-check": cmd_gp_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI run configuration or manifest.json to replay")
    common.add_argument("--out", help=f"output directory (default {config.OUT_DIR}/<command>)")
    common.add_argument("--seed", type=int, help="master seed, unsigned 64-bit")

    parser = argparse.ArgumentParser(description="Varnet uncertainty experiments", usage=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench-uq", parents=[common], help="KL benchmark against the NNGP posterior")
    bench.add_argument("--jobs", type=int, default=1, help="parallel benchmark tasks")
    bench.add_argument("--profile", choices=sorted(config.PROFILES), help="grid profile, overrides the file grid")

    sub.add_parser("classify", parents=[common], help="MNIST classification grid")

    check = sub.add_parser("gp-check", parents=[common], help="oracle self-test")
    check.add_argument("--perturb-kernel", action="store_true", help="scale the reference kernel by 10%%")
    check.add_argument("--width", type=int, default=WIDTH, help=argparse.SUPPRESS)
    check.add_argument("--networks", type=int, default=N_NETWORKS, help=argparse.SUPPRESS)
    check.add_argument("--pairs", type=int, default=N_PAIRS, help=argparse.SUPPRESS)
    return parser


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2

    try:
        return COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"Config error: {e}", file=sys.stderr)
        return 2
    except (FileNotFoundError, ParseError) as e:
        print(f"Data error: {e}", file=sys.stderr)
        return 2
    except VarnetError as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"ERROR: {e}", file=sys.stderr)
        return 1


def main():
    logging.basicConfig(
        level=getattr(logging, config.LOG_LEVEL, logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    sys.exit(run())


if __name__ == "__main__":
    main()
