"""Reader for the simulator's CSV result tables.

The table format is the only interface to the simulator: a comma-separated
header line, one row per grid point, empty cells for masked values and
``#``-prefixed provenance comments.  This module never touches physics
configuration, so rendering cannot alter any numerical result.
"""

from __future__ import annotations

import numpy as np


class TableError(ValueError):
    """Malformed table or a request referencing absent columns."""


def read_table(path) -> dict[str, np.ndarray]:
    """Parse a result table into a column -> float-array mapping.

    Empty cells become NaN.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise TableError(f"{path}: empty table")
    header = lines[0].split(",")
    rows = []
    for ln in lines[1:]:
        cells = ln.split(",")
        if len(cells) != len(header):
            raise TableError(f"{path}: ragged row with {len(cells)} cells")
        rows.append([float(c) if c else np.nan for c in cells])
    data = np.asarray(rows)
    return {name: data[:, k] for k, name in enumerate(header)}


def require_columns(table: dict, names) -> None:
    missing = [n for n in names if n not in table]
    if missing:
        raise TableError(f"table lacks columns: {', '.join(missing)}")


def grid_axes(table: dict, x: str, y: str):
    """Recover the 2-D grid behind a row-major table.

    Returns (x_values, y_values, reshape) where ``reshape`` maps a flat
    column onto the (len(x), len(y)) grid.
    """
    require_columns(table, [x, y])
    xs = np.unique(table[x])
    ys = np.unique(table[y])
    n = len(table[x])
    if len(xs) * len(ys) != n:
        raise TableError(
            f"rows do not form a grid: {len(xs)} x {len(ys)} != {n}")
    order = np.lexsort((table[y], table[x]))

    def reshape(column):
        return np.asarray(column)[order].reshape(len(xs), len(ys))

    return xs, ys, reshape
