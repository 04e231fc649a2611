"""Figure rendering for simulator result tables."""

__version__ = "0.1.0"

from .render import PlotSpec, render, render_heatmap, render_lines  # noqa: F401
from .tables import TableError, read_table  # noqa: F401
