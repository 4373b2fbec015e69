"""Command line front end: ``conc-kit run`` and ``conc-kit check``.

Exit codes: 0 when every check holds, 1 on any violation, 2 for usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .config import SCENARIOS, ConfigError, parse_config
from .report import emit_report, report_json
from .scenarios import run_scenario

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conc-kit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"conc-kit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=Path, help="scenario config file")
        p.add_argument("--out", type=Path, help="output directory (default: JSON to stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--grid-n", type=int, dest="grid_n")
        p.add_argument("--seed", type=_u64)

    run = sub.add_parser("run", help="run one scenario")
    run.add_argument("--scenario", choices=SCENARIOS)
    common(run)
    check = sub.add_parser("check", help="run the full property suite")
    common(check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    scenario = "properties" if args.command == "check" else args.scenario
    if args.command == "run" and scenario is None and args.config is None:
        parser.error("run needs --scenario or a --config naming one")
    if args.format == "csv" and args.out is None:
        parser.error("--format csv needs --out")

    overrides = {"scenario": scenario, "grid_n": args.grid_n, "seed": args.seed}
    try:
        text = args.config.read_text(encoding="utf-8") if args.config else ""
        cfg = parse_config(text, overrides)
    except (ConfigError, OSError) as exc:
        print(f"conc-kit: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        report = run_scenario(cfg)
    except RuntimeError as exc:
        print(f"conc-kit: {exc}", file=sys.stderr)
        return EXIT_VIOLATION

    if args.out is None:
        sys.stdout.write(report_json(report))
    else:
        try:
            for path in emit_report(report, args.format, args.out):
                print(path, file=sys.stderr)
        except OSError as exc:
            print(f"conc-kit: {exc}", file=sys.stderr)
            return EXIT_USAGE
    for name, ok in report["checks"].items():
        if not ok:
            print(f"conc-kit: check failed: {name}", file=sys.stderr)
    return EXIT_OK if report["passed"] else EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
