"""Command line entry point.

    magicspread <scenario> --config <file> [--out <dir>] [--workers N] [--seed S]

Exit codes: 0 success, 1 runtime failure (including a failed deterministic
check), 2 configuration error, 3 rejected-realization starvation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .harness import SCENARIOS, ConfigError, StarvationError, load_config, run_scenario


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magicspread",
        description="Simulate and analyze the spreading of one locally injected "
        "magic unit under Clifford brickwork dynamics.",
    )
    sub = parser.add_subparsers(dest="scenario", required=True, metavar="scenario")
    for name in sorted(SCENARIOS):
        sp = sub.add_parser(name, help=f"run the {name} scenario")
        sp.add_argument("--config", type=Path, default=None, help="flat key=value config file")
        sp.add_argument("--out", type=Path, default=Path("out"), help="output directory")
        sp.add_argument("--workers", type=int, default=1, help="parallel worker processes")
        sp.add_argument("--seed", type=int, default=None, help="override the config seed")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else {}
        code = run_scenario(
            args.scenario, cfg, args.out, workers=max(1, args.workers), seed=args.seed
        )
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except StarvationError as exc:
        print(f"starvation: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return code


if __name__ == "__main__":
    sys.exit(main())
