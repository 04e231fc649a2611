"""Result serialization.

Tables are comma-separated with one row per grid point, entanglement
columns named EN_<s1>_<s2>, and ``#``-prefixed provenance comment lines at
the end.  Numbers are written with shortest round-trip decimal formatting so
identical runs produce byte-identical files.  Cells that the stability mask
blanks out (pair values and diagnostics on unstable or failed points) are
empty.
"""

from __future__ import annotations

import io
import json

import numpy as np

from .sweep import SweepResult


def _num(x) -> str:
    return repr(float(x))


def header_for_spec(spec, stability_only: bool = False) -> list[str]:
    """Column names a sweep of this spec will produce."""
    cols = [ax.label for ax in spec.axes]
    cols += ["stable", "failed"]
    if not stability_only:
        cols += [f"EN_{s1}_{s2}" for s1, s2 in spec.pairs]
        cols += ["lyap_residual", "min_symplectic_eig"]
    cols += list(spec.extra_columns)
    return cols


def header_for(result: SweepResult) -> list[str]:
    return header_for_spec(result.spec, stability_only=result.en is None)


def provenance_lines(result: SweepResult) -> list[str]:
    prov = result.provenance
    return [
        f"# ommsim {prov.get('version', '?')}",
        f"# backend: {prov.get('backend', '?')}",
        f"# fingerprint: {prov.get('fingerprint', '?')}",
    ]


def format_table(result: SweepResult) -> str:
    """Render a sweep result as CSV text."""
    out = io.StringIO()
    out.write(",".join(header_for(result)) + "\n")
    n_axes = len(result.spec.axes)
    for i in range(len(result)):
        cells = [_num(result.coords[i, k]) for k in range(n_axes)]
        stable = bool(result.stable[i])
        cells.append("1" if stable else "0")
        cells.append("1" if result.fail_code[i] else "0")
        if result.en is not None:
            for k in range(len(result.spec.pairs)):
                cells.append(_num(result.en[i, k]) if stable else "")
            cells.append(_num(result.lyap_residual[i]) if stable else "")
            cells.append(_num(result.min_symplectic_eig[i]) if stable else "")
        for col in result.spec.extra_columns:
            cells.append(_num(result.extras[col][i]))
        out.write(",".join(cells) + "\n")
    for line in provenance_lines(result):
        out.write(line + "\n")
    return out.getvalue()


def format_json(result: SweepResult) -> str:
    """Hierarchical JSON rendering of a sweep result."""
    points = []
    for i in range(len(result)):
        pt = result.point(i)
        points.append({
            "coordinates": list(pt.coordinates),
            "stable": pt.stable,
            "failed": pt.failed,
            "error": pt.error,
            "e_n": ({f"{s1}:{s2}": v for (s1, s2), v in pt.e_n.items()}
                    if pt.e_n is not None else None),
            "diagnostics": pt.diagnostics,
            "extras": {
                col: float(result.extras[col][i])
                for col in result.spec.extra_columns
            } or None,
        })
    doc = {
        "provenance": result.provenance,
        "axes": [
            {
                "parameters": list(ax.targets),
                "start": ax.start, "stop": ax.stop,
                "count": ax.count, "scale": ax.scale,
            }
            for ax in result.spec.axes
        ],
        "pairs": [f"{s1}:{s2}" for s1, s2 in result.spec.pairs],
        "points": points,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_table(result: SweepResult, destination, fmt: str = "csv") -> None:
    """Serialize ``result`` to a path or file-like destination."""
    text = format_json(result) if fmt == "json" else format_table(result)
    if hasattr(destination, "write"):
        destination.write(text)
        return
    with open(destination, "w", encoding="utf-8") as fh:
        fh.write(text)


def write_rows(header, rows, provenance, destination) -> None:
    """Generic CSV writer for derived (non-grid) tables."""
    out = io.StringIO()
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(
            cell if isinstance(cell, str) else _num(cell) for cell in row
        ) + "\n")
    for line in provenance:
        out.write(line + "\n")
    text = out.getvalue()
    if hasattr(destination, "write"):
        destination.write(text)
        return
    with open(destination, "w", encoding="utf-8") as fh:
        fh.write(text)


def read_table(source) -> tuple[list[str], np.ndarray]:
    """Read a CSV table back; empty cells become NaN.

    Returns (header, data) with data shaped (rows, columns).
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    header = lines[0].split(",")
    data = np.array([
        [float(cell) if cell else np.nan for cell in ln.split(",")]
        for ln in lines[1:]
    ])
    return header, data
