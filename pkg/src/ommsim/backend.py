"""Numerical backend selection.

The compiled extension (ommsim._core) is preferred when it imported cleanly;
otherwise the pure numpy/scipy implementation is used.  The environment
variable OMMSIM_BACKEND forces the choice ("compiled" or "python").
"""

import os

from . import _core_py

_forced = os.environ.get("OMMSIM_BACKEND")

_compiled = None
if _forced != "python":
    try:
        from . import _core as _compiled
    except ImportError:
        _compiled = None
        if _forced == "compiled":
            raise ImportError(
                "OMMSIM_BACKEND=compiled but the ommsim._core extension "
                "is not built"
            )

impl = _compiled if _compiled is not None else _core_py


def backend_name() -> str:
    """Name of the active backend ("compiled" or "python")."""
    return "compiled" if impl is not _core_py else "python"


def available_backends() -> dict:
    """All importable backends keyed by name."""
    out = {"python": _core_py}
    if _compiled is not None:
        out["compiled"] = _compiled
    return out
