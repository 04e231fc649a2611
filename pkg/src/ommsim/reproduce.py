"""Committed figure presets and the derived strip-width scan.

Each panel of the reference figures ships as a data file under presets/;
``run_preset`` loads and evaluates one.  The strip-width panel (fig2e) is a
derived quantity, produced here by scanning the optomechanical coupling and
measuring the unstable band on a reduced stability grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

import numpy as np

from . import __version__, model, tables
from .backend import backend_name
from .config import parse_config
from .errors import SpecError
from .sweep import (
    SweepAxis, SweepSpec, SweepResult, run_point, run_sweep,
    unstable_strip_width,
)

#: presets evaluated directly as sweeps
SWEEP_PRESETS = (
    "fig2a", "fig2b", "fig2c", "fig2d",
    "fig3", "fig4",
    "fig5a", "fig5b", "fig5c", "fig5d",
    "fig6a", "fig6b",
    "fig7a", "fig7b", "fig7c", "fig7d", "fig7e", "fig7f",
    "fig8a", "fig8b",
    "fig9a", "fig9b",
)

#: derived presets with special handling
DERIVED_PRESETS = ("fig2e",)

PRESETS = SWEEP_PRESETS + DERIVED_PRESETS

# fig2e scan parameters: coupling multipliers and the stability grid used
# to measure the strip
FIG2E_MULTIPLIERS = np.linspace(0.5, 1.5, 21)
FIG2E_GRID = 200


def preset_text(name: str) -> str:
    ref = resources.files("ommsim") / "presets" / f"{name}.cfg"
    if not ref.is_file():
        raise SpecError(f"unknown preset {name!r}")
    return ref.read_text(encoding="utf-8")


def load_preset(name: str) -> SweepSpec:
    if name not in SWEEP_PRESETS:
        raise SpecError(f"unknown sweep preset {name!r}")
    spec = parse_config(preset_text(name))
    if not isinstance(spec, SweepSpec):
        raise SpecError(f"preset {name!r} has no [sweep] section")
    return spec


def default_config_text() -> str:
    return preset_text("default")


def _override_grid(spec: SweepSpec, grid: int) -> SweepSpec:
    """Coarsen dense axes for quick looks; small categorical axes keep
    their count."""
    axes = tuple(
        SweepAxis(ax.parameter, ax.start, ax.stop,
                  grid if ax.count >= 16 else ax.count, ax.scale)
        for ax in spec.axes
    )
    return SweepSpec(base=spec.base, axes=axes, pairs=spec.pairs,
                     extra_columns=spec.extra_columns)


@dataclass
class DerivedTable:
    """A non-grid result table (header, rows, provenance lines)."""

    header: list
    rows: list
    provenance: list

    def write(self, destination):
        tables.write_rows(self.header, self.rows, self.provenance, destination)


def _fig2e_scan(threads) -> DerivedTable:
    base = parse_config(default_config_text())
    w_b = base.modes["b"].eigenfrequency
    kappa_b = base.modes["b"].decay
    rows = []
    for mult in FIG2E_MULTIPLIERS:
        cfg = model.replace_params(base, g_ab=float(mult) * kappa_b)
        # narrow band around zero microwave detuning; the unstable strip is
        # vertical, so two rows suffice to measure its width
        spec = SweepSpec(
            base=cfg,
            axes=(
                SweepAxis("drives.detuning_a", 0.005 * w_b, 2.0 * w_b,
                          FIG2E_GRID),
                SweepAxis(
                    ("drives.detuning_A1", "drives.detuning_A2",
                     "drives.detuning_m1", "drives.detuning_m2"),
                    0.0, 0.02 * w_b, 2),
            ),
            pairs=(("m1", "m2"),),
        )
        res = run_sweep(spec, threads=threads, stability_only=True)
        width = unstable_strip_width(res, axis=0)
        point = run_point(model.replace_params(cfg, det_a=w_b), [("m1", "m2")])
        en = point.e_n[("m1", "m2")] if point.stable else float("nan")
        rows.append((float(mult) * kappa_b, width, en))
    return DerivedTable(
        header=["g_ab", "strip_width", "EN_m1_m2"],
        rows=rows,
        provenance=[
            f"# ommsim {__version__}",
            f"# backend: {backend_name()}",
            "# derived: unstable strip width and EN(m1,m2) at the "
            "red-sideband point vs g_ab",
        ],
    )


def run_preset(name: str, threads: int | None = None,
               grid: int | None = None) -> SweepResult | DerivedTable:
    """Evaluate a committed preset by name."""
    if name in DERIVED_PRESETS:
        return _fig2e_scan(threads)
    spec = load_preset(name)
    if grid is not None:
        spec = _override_grid(spec, grid)
    return run_sweep(spec, threads=threads)
