"""Command-line interface.

Subcommands: point, sweep, stability-map, reproduce-fig, calibrate-gab.
Exit codes: 0 success, 1 configuration error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .backend import backend_name
from .errors import (
    ConfigError, ConvergenceError, NumericalError, OmmsimError,
    SingularityError, SpecError, StabilityError,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ommsim",
        description="Steady-state entanglement of the six-mode "
                    "opto-magno-mechanical system.",
    )
    parser.add_argument("--version", action="version",
                        version=f"ommsim {__version__} ({backend_name()})")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write results to this path "
                                      "(default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="output format")
    common.add_argument("--threads", type=int, default=None,
                        help="cap on concurrent sweep workers")

    p = sub.add_parser("point", parents=[common],
                       help="evaluate one configuration")
    p.add_argument("--config", required=True, help="configuration file")
    p.add_argument("--pair", action="append", required=True,
                   metavar="S1,S2",
                   help="mode pair for entanglement (repeatable)")

    p = sub.add_parser("sweep", parents=[common],
                       help="run the sweep described by a config file")
    p.add_argument("--config", required=True,
                   help="configuration file with a [sweep] section")

    p = sub.add_parser("stability-map", parents=[common],
                       help="run a sweep evaluating only the stability gate")
    p.add_argument("--config", required=True,
                   help="configuration file with a [sweep] section")

    p = sub.add_parser("reproduce-fig", parents=[common],
                       help="run a committed figure preset")
    p.add_argument("preset", help="preset id, e.g. fig2c, fig4, fig9b")
    p.add_argument("--grid", type=int, default=None,
                   help="override the point count of dense axes")

    p = sub.add_parser("calibrate-gab", parents=[common],
                       help="rerun the microwave/mechanics coupling "
                            "calibration")
    return parser


def _parse_pairs(raw_pairs):
    pairs = []
    for raw in raw_pairs:
        parts = [s.strip() for s in raw.split(",")]
        if len(parts) != 2:
            raise ConfigError(f"--pair takes 'S1,S2', got {raw!r}")
        pairs.append((parts[0], parts[1]))
    return pairs


def _write(text: str, out_path):
    if out_path is None:
        sys.stdout.write(text)
        return
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _cmd_point(args) -> int:
    from . import model
    from .config import parse_config_file
    from .sweep import run_point

    cfg = parse_config_file(args.config)
    if not isinstance(cfg, model.SystemConfig):
        raise ConfigError("'point' expects a config without a [sweep] section")
    pairs = _parse_pairs(args.pair)
    point = run_point(cfg, pairs)
    if point.failed:
        raise NumericalError(point.error or "point evaluation failed")

    header = ["stable"]
    row = ["1" if point.stable else "0"]
    for pair in pairs:
        header.append(f"EN_{pair[0]}_{pair[1]}")
        row.append(repr(point.e_n[pair]) if point.stable else "")
    header += ["lyap_residual", "min_symplectic_eig"]
    if point.stable:
        row += [repr(point.diagnostics["lyap_residual"]),
                repr(point.diagnostics["min_symplectic_eig"])]
    else:
        row += ["", ""]
    if args.format == "json":
        import json
        doc = {
            "stable": point.stable,
            "e_n": ({f"{s1}:{s2}": v for (s1, s2), v in point.e_n.items()}
                    if point.e_n else None),
            "diagnostics": point.diagnostics,
        }
        _write(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    else:
        _write(",".join(header) + "\n" + ",".join(row) + "\n", args.out)
    return EXIT_OK


def _cmd_sweep(args, stability_only: bool) -> int:
    from . import tables
    from .config import parse_config_file
    from .sweep import SweepSpec, run_sweep

    spec = parse_config_file(args.config)
    if not isinstance(spec, SweepSpec):
        raise ConfigError(
            "this command expects a config with a [sweep] section")
    result = run_sweep(spec, threads=args.threads,
                       stability_only=stability_only)
    if args.out is None:
        tables.write_table(result, sys.stdout, fmt=args.format)
    else:
        tables.write_table(result, args.out, fmt=args.format)
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    from . import tables
    from .reproduce import DerivedTable, run_preset

    result = run_preset(args.preset, threads=args.threads, grid=args.grid)
    dest = sys.stdout if args.out is None else args.out
    if isinstance(result, DerivedTable):
        result.write(dest)
    else:
        tables.write_table(result, dest, fmt=args.format)
    return EXIT_OK


def _cmd_calibrate(args) -> int:
    from .calibrate import calibrate, calibration_report

    result = calibrate(threads=args.threads)
    _write(calibration_report(result) + "\n", args.out)
    return EXIT_OK if result.admissible() else EXIT_NUMERICAL


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for usage errors; usage errors are
        # configuration errors under this tool's exit-code contract
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG

    try:
        if args.command == "point":
            return _cmd_point(args)
        if args.command == "sweep":
            return _cmd_sweep(args, stability_only=False)
        if args.command == "stability-map":
            return _cmd_sweep(args, stability_only=True)
        if args.command == "reproduce-fig":
            return _cmd_reproduce(args)
        if args.command == "calibrate-gab":
            return _cmd_calibrate(args)
        parser.error(f"unknown command {args.command}")
    except (ConfigError, SpecError) as exc:
        print(f"ommsim: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"ommsim: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"ommsim: i/o error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, SingularityError, StabilityError,
            NumericalError) as exc:
        print(f"ommsim: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OmmsimError as exc:
        print(f"ommsim: error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
