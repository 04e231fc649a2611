"""Standalone rendering command: the plot specification comes in as flags."""

from __future__ import annotations

import argparse
import sys

from .render import PlotSpec, render
from .tables import TableError


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="ommfig",
        description="Render simulator result tables into figures.",
    )
    sub = parser.add_subparsers(dest="kind", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--table", required=True, help="input CSV table")
    common.add_argument("--out", required=True, help="output image path")
    common.add_argument("--x", required=True, help="x-axis column")
    common.add_argument("--x-label")
    common.add_argument("--y-label")
    common.add_argument("--title")
    common.add_argument("--value-label", default="E_N")

    p = sub.add_parser("heatmap", parents=[common],
                       help="2-D map, unstable cells white")
    p.add_argument("--y", required=True, help="y-axis column")
    p.add_argument("--value", required=True, help="color column")

    p = sub.add_parser("lines", parents=[common],
                       help="1-D scan, one curve per value column")
    p.add_argument("--values", required=True,
                   help="comma-separated value columns")
    p.add_argument("--group-by", help="split rows into one curve per value "
                                      "of this column")
    p.add_argument("--x-scale", choices=("linear", "log"), default="linear")
    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1

    if args.kind == "heatmap":
        spec = PlotSpec(
            table=args.table, kind="heatmap", x=args.x, y=args.y,
            values=(args.value,), x_label=args.x_label,
            y_label=args.y_label, value_label=args.value_label,
            title=args.title, out=args.out,
        )
    else:
        spec = PlotSpec(
            table=args.table, kind="lines", x=args.x,
            values=tuple(v.strip() for v in args.values.split(",")),
            group_by=args.group_by, x_label=args.x_label,
            y_label=args.y_label, value_label=args.value_label,
            x_scale=args.x_scale, title=args.title, out=args.out,
        )

    try:
        render(spec)
    except (TableError, FileNotFoundError) as exc:
        print(f"ommfig: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"ommfig: i/o error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
