"""Grid evaluation of the full pipeline.

A sweep takes a base configuration, one or two axes (each axis may drive
several parameters in lockstep, e.g. tying both magnon detunings together),
and a list of mode pairs.  Every grid point is an isolated pure computation:
steady state, drift/diffusion, stability gate, stationary covariance and the
requested pair entanglements.  Points are stored in row-major axis order and
results are bitwise independent of how the evaluation was scheduled.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import __version__
from . import gaussian, model
from .backend import backend_name, impl
from .errors import DomainError, SpecError
from .model import MODES, MODE_INDEX, DetuningConvention, SystemConfig

# user-facing parameter paths -> flat parameter names
PARAMETER_PATHS: dict[str, str] = {}
for _m in MODES:
    PARAMETER_PATHS[f"modes.{_m}.eigenfrequency"] = f"omega_{_m}"
    PARAMETER_PATHS[f"modes.{_m}.decay"] = f"kappa_{_m}"
for _d in ("a", "m1", "m2"):
    PARAMETER_PATHS[f"drives.rabi_{_d}"] = f"rabi_{_d}"
for _d in ("a", "A1", "A2", "m1", "m2"):
    PARAMETER_PATHS[f"drives.detuning_{_d}"] = f"det_{_d}"
for _c in ("g_ab", "g_A1b", "g_A2b", "g_1", "g_2"):
    PARAMETER_PATHS[f"couplings.{_c}"] = _c
PARAMETER_PATHS["temperature"] = "temperature"
# flat names are accepted verbatim as well
for _f in model.FLAT_PARAMS:
    PARAMETER_PATHS.setdefault(_f, _f)

# failure codes stored per point
FAIL_NONE = 0
FAIL_STEADY_STATE = 1
FAIL_SINGULAR = 2
FAIL_NUMERICAL = 3
FAIL_MESSAGES = {
    FAIL_STEADY_STATE: "steady-state fixed point did not converge",
    FAIL_SINGULAR: "singular steady-state denominator",
    FAIL_NUMERICAL: "numerical failure in the covariance solve",
}


def resolve_parameter(path: str) -> str:
    """Translate a parameter path into its flat name, or raise SpecError."""
    try:
        return PARAMETER_PATHS[path]
    except KeyError:
        raise SpecError(f"unknown parameter path {path!r}") from None


def _as_pair(pair) -> tuple[str, str]:
    s1, s2 = pair
    for s in (s1, s2):
        if s not in MODE_INDEX:
            raise SpecError(f"unknown mode identity {s!r}")
    if s1 == s2:
        raise SpecError("entanglement pairs must name two distinct modes")
    return (s1, s2)


@dataclass(frozen=True)
class SweepAxis:
    """One grid axis; ``parameter`` may be a single path or several joined
    paths that all receive the same value at each grid point."""

    parameter: str | tuple[str, ...]
    start: float
    stop: float
    count: int
    scale: str = "linear"

    def __post_init__(self):
        if self.count < 2:
            raise SpecError("axis count must be at least 2")
        if self.start == self.stop:
            raise SpecError("axis start and stop must differ")
        if self.scale not in ("linear", "log"):
            raise SpecError(f"unknown axis scale {self.scale!r}")
        if self.scale == "log" and (self.start <= 0 or self.stop <= 0):
            raise SpecError("log axes require positive endpoints")

    @property
    def targets(self) -> tuple[str, ...]:
        if isinstance(self.parameter, str):
            return (self.parameter,)
        return tuple(self.parameter)

    def flat_targets(self) -> tuple[str, ...]:
        return tuple(resolve_parameter(t) for t in self.targets)

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)

    @property
    def label(self) -> str:
        """Column label: the last segment of the first target path."""
        return self.targets[0].rsplit(".", 1)[-1]


@dataclass(frozen=True)
class SweepSpec:
    """Base configuration plus grid axes and requested mode pairs."""

    base: SystemConfig
    axes: tuple[SweepAxis, ...]
    pairs: tuple[tuple[str, str], ...]
    extra_columns: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        object.__setattr__(
            self, "pairs", tuple(_as_pair(p) for p in self.pairs))
        object.__setattr__(self, "extra_columns", tuple(self.extra_columns))
        if not 1 <= len(self.axes) <= 2:
            raise SpecError("a sweep needs one or two axes")
        if not self.pairs:
            raise SpecError("at least one mode pair is required")
        flat = [t for ax in self.axes for t in ax.flat_targets()]
        if len(set(flat)) != len(flat):
            raise SpecError("axis parameters must be distinct")
        for col in self.extra_columns:
            if not (col.startswith("amp_") and col[4:] in MODE_INDEX):
                raise SpecError(f"unknown extra column {col!r}")

    def fingerprint(self) -> str:
        """Deterministic digest of the physics content of this spec."""
        h = hashlib.sha256()
        p = model.config_to_params(self.base)
        for k in sorted(p):
            h.update(f"{k}={p[k]!r};".encode())
        h.update(self.base.detuning_convention.value.encode())
        for ax in self.axes:
            h.update(
                f"axis:{','.join(ax.targets)}:{ax.start!r}:{ax.stop!r}"
                f":{ax.count}:{ax.scale};".encode())
        for s1, s2 in self.pairs:
            h.update(f"pair:{s1}:{s2};".encode())
        for col in self.extra_columns:
            h.update(f"extra:{col};".encode())
        return h.hexdigest()


@dataclass(frozen=True)
class PointResult:
    """Outcome of the pipeline at one parameter point.

    ``e_n`` is present exactly when the point is stable; a point that could
    not be evaluated at all is ``failed`` (with a reason), distinct from a
    well-evaluated unstable point.
    """

    coordinates: tuple[float, ...]
    stable: bool
    failed: bool = False
    error: str | None = None
    e_n: dict[tuple[str, str], float] | None = None
    diagnostics: dict[str, float] | None = None


@dataclass
class SweepResult:
    """Dense row-major grid of point outcomes plus provenance."""

    spec: SweepSpec
    axis_values: tuple[np.ndarray, ...]
    coords: np.ndarray          # (N, n_axes)
    stable: np.ndarray          # (N,) bool
    fail_code: np.ndarray       # (N,) int8
    en: np.ndarray | None       # (N, P) float, NaN where masked
    lyap_residual: np.ndarray   # (N,)
    min_symplectic_eig: np.ndarray  # (N,)
    extras: dict[str, np.ndarray] = field(default_factory=dict)
    provenance: dict[str, str] = field(default_factory=dict)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(v) for v in self.axis_values)

    @property
    def failed(self) -> np.ndarray:
        return self.fail_code != FAIL_NONE

    def __len__(self) -> int:
        return self.coords.shape[0]

    def point(self, i: int) -> PointResult:
        stable = bool(self.stable[i])
        code = int(self.fail_code[i])
        e_n = None
        diagnostics = None
        if stable and self.en is not None:
            e_n = {
                pair: float(self.en[i, k])
                for k, pair in enumerate(self.spec.pairs)
            }
            diagnostics = {
                "lyap_residual": float(self.lyap_residual[i]),
                "min_symplectic_eig": float(self.min_symplectic_eig[i]),
            }
        return PointResult(
            coordinates=tuple(self.coords[i]),
            stable=stable,
            failed=code != FAIL_NONE,
            error=FAIL_MESSAGES.get(code),
            e_n=e_n,
            diagnostics=diagnostics,
        )

    def points(self) -> Iterator[PointResult]:
        for i in range(len(self)):
            yield self.point(i)

    def en_grid(self, pair) -> np.ndarray:
        """E_N of one pair reshaped to the grid shape."""
        k = self.spec.pairs.index(_as_pair(pair))
        return self.en[:, k].reshape(self.shape)


def _evaluate_rows(A_stack, d_stack, pairs_idx, ss_failed, out, lo, hi):
    """Evaluate grid rows [lo, hi); writes into preallocated output arrays."""
    stable, fail_code, en, resid, min_nu = out
    for i in range(lo, hi):
        if ss_failed[i]:
            fail_code[i] = (
                FAIL_SINGULAR if np.isnan(resid[i]) else FAIL_STEADY_STATE)
            continue
        status, en_i, r, nu = impl.evaluate_point(
            A_stack[i], d_stack[i], pairs_idx,
            gaussian.STABILITY_MARGIN_FACTOR,
            gaussian.LYAP_RESIDUAL_TOL,
            gaussian.LYAP_REFINE_TARGET,
            gaussian.LYAP_MAX_REFINE,
        )
        if status == 0:
            stable[i] = True
            en[i] = en_i
            resid[i] = r
            min_nu[i] = nu
        elif status == 1:
            resid[i] = np.nan
        else:
            fail_code[i] = FAIL_NUMERICAL
            resid[i] = np.nan


def _run_grid(spec: SweepSpec, p_grid, coords, threads, stability_only):
    convention = spec.base.detuning_convention
    ss = model.steady_state_arrays(p_grid, convention)
    ss_failed = np.asarray(ss["failed"]).ravel()
    ss_resid = np.asarray(ss["residual"]).ravel()
    n = coords.shape[0]

    A_stack = model.drift_stack(p_grid, ss).reshape(n, 12, 12)
    d_stack = model.diffusion_stack(p_grid).reshape(n, 12)

    pairs_idx = np.array(
        [[MODE_INDEX[s1], MODE_INDEX[s2]] for s1, s2 in spec.pairs],
        dtype=np.int64,
    )

    stable = np.zeros(n, dtype=bool)
    fail_code = np.zeros(n, dtype=np.int8)
    en = np.full((n, len(spec.pairs)), np.nan)
    # seed the residual slot with the steady-state residual so the failure
    # kind (singular -> NaN vs non-convergence -> finite) survives into
    # _evaluate_rows; stable points overwrite it with the solve residual
    resid = np.full(n, np.nan)
    resid[~ss_failed] = 0.0
    resid[ss_failed] = ss_resid[ss_failed]
    min_nu = np.full(n, np.nan)

    if stability_only:
        margin = gaussian.STABILITY_MARGIN_FACTOR
        for i in range(n):
            if ss_failed[i]:
                fail_code[i] = (
                    FAIL_SINGULAR if np.isnan(resid[i]) else FAIL_STEADY_STATE)
                continue
            eps = margin * np.linalg.norm(A_stack[i])
            stable[i] = impl.spectral_abscissa(A_stack[i]) < -eps
        en_out = None
    else:
        out = (stable, fail_code, en, resid, min_nu)
        if threads is None or threads <= 1 or n < 4:
            _evaluate_rows(A_stack, d_stack, pairs_idx, ss_failed, out, 0, n)
        else:
            chunk = max(16, -(-n // (threads * 8)))
            bounds = [(lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]
            with ThreadPoolExecutor(max_workers=threads) as pool:
                futures = [
                    pool.submit(_evaluate_rows, A_stack, d_stack, pairs_idx,
                                ss_failed, out, lo, hi)
                    for lo, hi in bounds
                ]
                for f in futures:
                    f.result()
        en_out = en

    extras = {}
    for col in spec.extra_columns:
        mode = col[4:]
        extras[col] = np.abs(np.asarray(ss[mode])).ravel()

    # masked diagnostics: residual/min_nu only meaningful on stable points
    resid = np.where(stable, resid, np.nan)
    min_nu = np.where(stable, min_nu, np.nan)
    if en_out is not None:
        en_out[~stable] = np.nan

    return stable, fail_code, en_out, resid, min_nu, extras


def run_sweep(spec: SweepSpec, threads: int | None = None,
              stability_only: bool = False) -> SweepResult:
    """Evaluate the full grid of a sweep specification.

    ``threads`` caps the number of concurrent point workers; the result is
    bitwise identical for any thread count.  With ``stability_only`` the
    covariance solve is skipped and only the stability mask is produced.
    """
    axis_values = tuple(ax.values() for ax in spec.axes)
    flat_targets = [ax.flat_targets() for ax in spec.axes]

    grids = np.meshgrid(*axis_values, indexing="ij")
    coords = np.stack([g.ravel() for g in grids], axis=1)

    p = model.config_to_params(spec.base)
    for targets, grid in zip(flat_targets, grids):
        for t in targets:
            p[t] = grid.ravel()

    stable, fail_code, en, resid, min_nu, extras = _run_grid(
        spec, p, coords, threads, stability_only)

    return SweepResult(
        spec=spec,
        axis_values=axis_values,
        coords=coords,
        stable=stable,
        fail_code=fail_code,
        en=en,
        lyap_residual=resid,
        min_symplectic_eig=min_nu,
        extras=extras,
        provenance={
            "version": __version__,
            "backend": backend_name(),
            "fingerprint": spec.fingerprint(),
        },
    )


def run_point(config: SystemConfig, pairs) -> PointResult:
    """Evaluate the pipeline at a single configuration."""
    pairs = tuple(_as_pair(pr) for pr in pairs)
    if not pairs:
        raise SpecError("at least one mode pair is required")
    p = model.config_to_params(config)
    ss = model.steady_state_arrays(p, config.detuning_convention)
    if bool(np.asarray(ss["failed"])):
        code = (FAIL_SINGULAR if np.isnan(float(np.asarray(ss["residual"])))
                else FAIL_STEADY_STATE)
        return PointResult(
            coordinates=(), stable=False, failed=True,
            error=FAIL_MESSAGES[code],
        )
    A = model.drift_stack(p, ss).reshape(12, 12)
    d = model.diffusion_stack(p).reshape(12)
    pairs_idx = np.array(
        [[MODE_INDEX[s1], MODE_INDEX[s2]] for s1, s2 in pairs], dtype=np.int64)
    status, en, resid, min_nu = impl.evaluate_point(
        A, d, pairs_idx,
        gaussian.STABILITY_MARGIN_FACTOR,
        gaussian.LYAP_RESIDUAL_TOL,
        gaussian.LYAP_REFINE_TARGET,
        gaussian.LYAP_MAX_REFINE,
    )
    if status == 2:
        return PointResult(
            coordinates=(), stable=False, failed=True,
            error=FAIL_MESSAGES[FAIL_NUMERICAL],
        )
    if status == 1:
        return PointResult(coordinates=(), stable=False)
    return PointResult(
        coordinates=(),
        stable=True,
        e_n={pair: float(en[k]) for k, pair in enumerate(pairs)},
        diagnostics={
            "lyap_residual": float(resid),
            "min_symplectic_eig": float(min_nu),
        },
    )


def unstable_strip_width(result: SweepResult, axis: int) -> float:
    """Width of the unstable strip running across the grid along one axis.

    A position along ``axis`` belongs to the strip when the system is
    unstable there at every value of the other coordinate; the width is the
    longest contiguous run of such positions times the uniform cell size.
    Scattered unstable cells that do not span the transverse axis therefore
    do not register, matching the visual notion of a band crossing the map.
    Returns 0.0 when no strip exists.
    """
    if len(result.axis_values) != 2:
        raise DomainError("strip width requires a two-axis sweep result")
    if axis not in (0, 1):
        raise DomainError("axis must be 0 or 1")
    ax = result.spec.axes[axis]
    if ax.scale != "linear":
        raise DomainError("strip width is defined for linear axes")
    unstable = (~result.stable & ~result.failed).reshape(result.shape)
    in_strip = unstable.all(axis=1 - axis)
    best = run = 0
    for cell in in_strip:
        run = run + 1 if cell else 0
        best = max(best, run)
    values = result.axis_values[axis]
    cell_size = abs(values[1] - values[0])
    return best * cell_size
