"""Command-line front end.

Subcommands::

    singletbeam run <scenario>... --config <path> [--out <dir>] [--noise --seed <n>]
    singletbeam validate --config <path>

``run all`` expands to every scenario.  The output directory resolves as
--out flag, then the SINGLETBEAM_OUT environment variable, then the
[output] section of the config.  Exit code 0 iff every requested scenario
produced a report; failures print one ``error: ...`` line to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys

from .config import ConfigError, config_digest, load_config
from .scenarios import SCENARIOS, run_scenario, write_outputs

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="singletbeam",
        description="Two-photon singlet-beam interference bench",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run named scenarios and write CSV outputs")
    run.add_argument(
        "scenarios",
        nargs="+",
        metavar="scenario",
        help=f"scenario names ({', '.join(SCENARIOS)}) or 'all'",
    )
    run.add_argument("--config", required=True, help="bench description file")
    run.add_argument("--out", default=None, help="output directory")
    run.add_argument(
        "--noise",
        action="store_true",
        help="emit Poisson-sampled counts instead of expected rates",
    )
    run.add_argument("--seed", type=int, default=None, help="noise RNG seed")

    val = sub.add_parser("validate", help="parse and validate a config file")
    val.add_argument("--config", required=True, help="bench description file")
    return parser


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)

    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        return _fail(f"config: {exc}")
    except OSError as exc:
        return _fail(f"config: {exc}")

    if args.command == "validate":
        print(f"ok digest={config_digest(cfg)}")
        return 0

    names = list(args.scenarios)
    if "all" in names:
        names = list(SCENARIOS)
    unknown = [n for n in names if n not in SCENARIOS]
    if unknown:
        return _fail(
            f"unknown scenario(s): {', '.join(unknown)} "
            f"(known: {', '.join(SCENARIOS)})"
        )

    out_dir = args.out or os.environ.get("SINGLETBEAM_OUT") or cfg.output.directory

    reports = []
    for name in names:
        try:
            reports.append(run_scenario(cfg, name, noise=args.noise, seed=args.seed))
        except (ConfigError, ValueError) as exc:
            return _fail(f"scenario {name}: {exc}")
    try:
        paths = write_outputs(reports, out_dir)
    except OSError as exc:
        return _fail(f"output: {exc}")

    for report in reports:
        for curve in report.curves:
            print(
                f"{report.scenario} {curve.label}: "
                f"visibility={curve.scan.visibility:.4f} {curve.classification}"
            )
    print(f"wrote {len(paths)} files to {out_dir}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
