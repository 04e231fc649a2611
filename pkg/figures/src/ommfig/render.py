"""Deterministic rendering of result tables.

Two plot kinds mirror the reference figures: masked heatmaps over a 2-D
parameter grid (unstable cells white, failed cells hatched white) and line
plots over a 1-D scan, optionally grouped into one curve per value of a
second coordinate.  Identical inputs produce identical pixels: the Agg
backend is forced, geometry and dpi are fixed, and no timestamps or
environment-dependent text reach the canvas.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg", force=True)

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402

from .tables import TableError, grid_axes, read_table, require_columns  # noqa: E402

FIGSIZE = (3.2, 2.6)
DPI = 100


@dataclass(frozen=True)
class PlotSpec:
    """What to render: table path, plot kind, columns, labels, output."""

    table: str
    kind: str                      # "heatmap" | "lines"
    x: str
    values: tuple[str, ...]        # value column(s)
    y: str | None = None           # heatmap second axis
    group_by: str | None = None    # lines: one curve per value of this column
    x_label: str | None = None
    y_label: str | None = None
    value_label: str = "E_N"
    x_scale: str = "linear"
    title: str | None = None
    out: str = "figure.png"

    def __post_init__(self):
        if self.kind not in ("heatmap", "lines"):
            raise TableError(f"unknown plot kind {self.kind!r}")
        if self.kind == "heatmap":
            if self.y is None:
                raise TableError("heatmap needs a y column")
            if len(self.values) != 1:
                raise TableError("heatmap takes exactly one value column")
        if not self.values:
            raise TableError("at least one value column is required")


def _new_axes(spec: PlotSpec):
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    ax.set_xlabel(spec.x_label or spec.x)
    if spec.title:
        ax.set_title(spec.title)
    return fig, ax


def _save(fig, spec: PlotSpec):
    # strip metadata that would make the bytes environment-dependent
    fig.savefig(spec.out, dpi=DPI, metadata={"Software": None})
    plt.close(fig)


def render_heatmap(spec: PlotSpec) -> str:
    """Render a 2-D grid table; returns the output path.

    Unstable cells are white; failed (unevaluated) cells are white with
    hatching so the two remain distinguishable.
    """
    table = read_table(spec.table)
    value = spec.values[0]
    require_columns(table, [spec.x, spec.y, value, "stable", "failed"])
    xs, ys, reshape = grid_axes(table, spec.x, spec.y)
    grid = reshape(table[value])
    stable = reshape(table["stable"]) > 0.5
    failed = reshape(table["failed"]) > 0.5

    masked = np.ma.masked_where(~stable, grid)
    cmap = plt.get_cmap("viridis").copy()
    cmap.set_bad("white")

    fig, ax = _new_axes(spec)
    extent = (xs[0], xs[-1], ys[0], ys[-1])
    im = ax.imshow(masked.T, origin="lower", extent=extent, aspect="auto",
                   cmap=cmap, interpolation="nearest")
    if failed.any():
        dx = (xs[-1] - xs[0]) / max(len(xs) - 1, 1)
        dy = (ys[-1] - ys[0]) / max(len(ys) - 1, 1)
        for i, j in zip(*np.nonzero(failed)):
            ax.add_patch(Rectangle(
                (xs[i] - dx / 2, ys[j] - dy / 2), dx, dy,
                facecolor="white", edgecolor="0.6", hatch="////",
                linewidth=0.0))
    ax.set_ylabel(spec.y_label or spec.y)
    fig.colorbar(im, ax=ax, label=spec.value_label)
    fig.tight_layout(pad=0.4)
    _save(fig, spec)
    return spec.out


def render_lines(spec: PlotSpec) -> str:
    """Render a 1-D scan table with one styled curve per value column
    (times one per group when ``group_by`` is set); returns the output path.
    """
    table = read_table(spec.table)
    require_columns(table, [spec.x, *spec.values])
    fig, ax = _new_axes(spec)

    if spec.group_by is not None:
        require_columns(table, [spec.group_by])
        groups = np.unique(table[spec.group_by])
    else:
        groups = [None]

    styles = ["-", "--", "-.", ":"]
    for v, value in enumerate(spec.values):
        for g, group in enumerate(groups):
            if group is None:
                sel = np.ones(len(table[spec.x]), dtype=bool)
                label = value
            else:
                sel = table[spec.group_by] == group
                label = f"{value} @ {spec.group_by}={group:.6g}" \
                    if len(spec.values) > 1 else f"{spec.group_by}={group:.6g}"
            x = table[spec.x][sel]
            y = table[value][sel]
            order = np.argsort(x, kind="stable")
            ax.plot(x[order], y[order], styles[(v + g) % len(styles)],
                    linewidth=1.2, label=label)

    if spec.x_scale == "log":
        ax.set_xscale("log")
    ax.set_ylabel(spec.y_label or spec.value_label)
    if len(spec.values) > 1 or len(groups) > 1:
        ax.legend(fontsize=6, frameon=False)
    fig.tight_layout(pad=0.4)
    _save(fig, spec)
    return spec.out


def render(spec: PlotSpec) -> str:
    if spec.kind == "heatmap":
        return render_heatmap(spec)
    return render_lines(spec)
