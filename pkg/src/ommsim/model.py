"""Physical model of the driven six-mode opto-magno-mechanical system.

One optical cavity (a) and two microwave cavities (A1, A2) share a common
mechanical resonator (b) through radiation-pressure coupling; each microwave
cavity hosts a magnon mode (m1, m2) coupled by magnetic-dipole interaction.
This module owns the parameterization of that system and produces, from it,
the semiclassical steady state, the effective (amplitude-dressed) coupling
rates, the 12x12 drift matrix of the linearized quadrature fluctuations and
the matching diagonal diffusion matrix.

All frequencies, decay rates, couplings and drive strengths are angular
quantities (rad/s).  The quadrature convention is X = (o + o*)/sqrt(2),
Y = (o - o*)/(i sqrt(2)), which puts the vacuum variance at 1/2.

Every function here is pure; the vectorized internals accept numpy arrays in
place of scalars so a whole parameter grid can be evaluated in one call.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Mapping

import numpy as np
import scipy.constants as sc

from .errors import ConvergenceError, DomainError, SingularityError

TWO_PI = 2.0 * np.pi

# gyromagnetic ratio of the ferrimagnetic resonance, 2*pi*28 GHz/T
GYROMAGNETIC_RATIO = TWO_PI * 28.0e9

#: Mode identities in quadrature order: mode k owns rows/cols (2k, 2k+1).
MODES = ("a", "b", "A1", "m1", "A2", "m2")
MODE_INDEX = {name: k for k, name in enumerate(MODES)}

#: Quadrature labels in the fixed 12-component ordering.
QUADRATURE_ORDER = tuple(
    f"{xy}_{m}" for m in MODES for xy in ("X", "Y")
)

#: Flat scalar parameter names understood by the vectorized solvers.
FLAT_PARAMS = (
    "omega_a", "omega_b", "omega_A1", "omega_m1", "omega_A2", "omega_m2",
    "kappa_a", "kappa_b", "kappa_A1", "kappa_m1", "kappa_A2", "kappa_m2",
    "rabi_a", "rabi_m1", "rabi_m2",
    "det_a", "det_A1", "det_A2", "det_m1", "det_m2",
    "g_ab", "g_A1b", "g_A2b", "g_1", "g_2",
    "temperature",
)

# Fixed-point iteration policy for the bare-detuning solve.
PICARD_DAMPING = 0.5
PICARD_TOL = 1e-12
PICARD_MAX_ITER = 10_000

#: Microwave-cavity/mechanics coupling (rad/s) frozen by the committed
#: calibration run (see calibrate.py and the ommsim calibrate-gab command).
CALIBRATED_G_AB_MW = 0.134


class DetuningConvention(enum.Enum):
    """Whether stored cavity detunings are amplitude-dressed or bare."""

    EFFECTIVE = "effective"
    BARE = "bare"


@dataclass(frozen=True)
class ModeParams:
    """Eigenfrequency and energy decay rate of one bosonic mode (rad/s)."""

    eigenfrequency: float
    decay: float

    def __post_init__(self):
        if self.eigenfrequency <= 0:
            raise DomainError("mode eigenfrequency must be positive")
        if self.decay <= 0:
            raise DomainError("mode decay rate must be positive")


@dataclass(frozen=True)
class DriveParams:
    """Strength and detuning of one coherent drive (rad/s)."""

    rabi: float
    detuning_mode: DetuningConvention
    detuning: float

    def __post_init__(self):
        if self.rabi < 0:
            raise DomainError("drive strength must be non-negative")


@dataclass(frozen=True)
class MicrowaveDrive:
    """A drive addressing one magnon mode and, jointly, its host cavity.

    The drive tone detunes both the cavity and the magnon; the two detunings
    are independent because the magnon frequency is tuned by its bias field.
    ``cavity_detuning`` follows ``detuning_mode``; ``magnon_detuning`` is
    always bare (the magnon carries no mechanical frequency shift).
    """

    rabi: float
    detuning_mode: DetuningConvention
    cavity_detuning: float
    magnon_detuning: float

    def __post_init__(self):
        if self.rabi < 0:
            raise DomainError("drive strength must be non-negative")


@dataclass(frozen=True)
class CouplingParams:
    """Bare interaction rates between the modes (rad/s)."""

    g_ab: float    # optical cavity -- mechanics, single photon
    g_A1b: float   # microwave cavity 1 -- mechanics
    g_A2b: float   # microwave cavity 2 -- mechanics
    g_1: float     # cavity 1 -- magnon 1 magnetic dipole
    g_2: float     # cavity 2 -- magnon 2 magnetic dipole

    def __post_init__(self):
        for name in ("g_ab", "g_A1b", "g_A2b", "g_1", "g_2"):
            if getattr(self, name) < 0:
                raise DomainError(f"coupling {name} must be non-negative")


@dataclass(frozen=True)
class SystemConfig:
    """Complete physical parameter set of the six-mode system."""

    modes: Mapping[str, ModeParams]
    optical_drive: DriveParams
    mw_drive_1: MicrowaveDrive
    mw_drive_2: MicrowaveDrive
    couplings: CouplingParams
    temperature: float  # kelvin

    def __post_init__(self):
        missing = set(MODES) - set(self.modes)
        if missing:
            raise DomainError(f"missing mode parameters: {sorted(missing)}")
        extra = set(self.modes) - set(MODES)
        if extra:
            raise DomainError(f"unknown mode identities: {sorted(extra)}")
        if self.temperature < 0:
            raise DomainError("temperature must be non-negative")
        conventions = {
            self.optical_drive.detuning_mode,
            self.mw_drive_1.detuning_mode,
            self.mw_drive_2.detuning_mode,
        }
        if len(conventions) != 1:
            raise DomainError(
                "effective and bare detunings must not be mixed in one config"
            )

    @property
    def detuning_convention(self) -> DetuningConvention:
        return self.optical_drive.detuning_mode


@dataclass(frozen=True)
class SteadyState:
    """Semiclassical amplitudes and the detunings they imply.

    ``eff_detuning_X = bare_detuning_X - 2 g_Xb Re<b>`` for each of the three
    mechanically shifted cavities X in {a, A1, A2}.
    """

    amp_a: complex
    amp_b: complex
    amp_A1: complex
    amp_m1: complex
    amp_A2: complex
    amp_m2: complex
    eff_detuning_a: float
    eff_detuning_A1: float
    eff_detuning_A2: float
    bare_detuning_a: float
    bare_detuning_A1: float
    bare_detuning_A2: float

    def amplitudes(self) -> dict[str, complex]:
        return {
            "a": self.amp_a, "b": self.amp_b,
            "A1": self.amp_A1, "m1": self.amp_m1,
            "A2": self.amp_A2, "m2": self.amp_m2,
        }


@dataclass(frozen=True)
class EffectiveCouplings:
    """Amplitude-dressed coupling rates, split into real/imaginary parts."""

    GR_ab: float
    GI_ab: float
    GR_A1b: float
    GI_A1b: float
    GR_A2b: float
    GI_A2b: float


@dataclass(frozen=True)
class LinearizedSystem:
    """Drift and diffusion matrices of the quadrature fluctuations."""

    drift: np.ndarray      # (12, 12) real
    diffusion: np.ndarray  # (12, 12) real diagonal
    ordering: tuple = field(default=QUADRATURE_ORDER)


# ---------------------------------------------------------------------------
# elementary closed-form operations
# ---------------------------------------------------------------------------

def bose_einstein(omega, temperature):
    """Thermal occupation 1/(exp(hbar w / kB T) - 1) of a mode at ``omega``.

    Returns exactly 0 at zero temperature.  Accepts arrays in either slot.
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise DomainError("bose_einstein requires omega > 0")
    temperature = np.asarray(temperature, dtype=float)
    if np.any(temperature < 0):
        raise DomainError("bose_einstein requires temperature >= 0")
    with np.errstate(divide="ignore", over="ignore"):
        x = np.where(temperature > 0, sc.hbar * omega / (sc.k * np.where(
            temperature > 0, temperature, 1.0)), np.inf)
        # exp(x) overflows near x ~ 710; occupation is zero to double precision
        # long before that, so clamp instead of warning.
        n = np.where(x > 700.0, 0.0, 1.0 / np.expm1(np.minimum(x, 700.0)))
    if n.ndim == 0:
        return float(n)
    return n


def magnon_frequency_from_field(field_tesla):
    """Ferromagnetic resonance frequency for a given bias field (rad/s)."""
    if field_tesla < 0:
        raise DomainError("bias field must be non-negative")
    return GYROMAGNETIC_RATIO * field_tesla


def vacuum_optomech_coupling(omega_cav, x_zpf, length):
    """Single-photon optomechanical rate omega_cav * x_zpf / L (rad/s).

    ``x_zpf = 0`` is allowed as a degenerate boundary (returns 0); the cavity
    frequency and length must be strictly positive.
    """
    if omega_cav <= 0:
        raise DomainError("cavity frequency must be positive")
    if length <= 0:
        raise DomainError("cavity length must be positive")
    if x_zpf < 0:
        raise DomainError("zero-point amplitude must be non-negative")
    return omega_cav * x_zpf / length


def supermode_frequencies(omega, g):
    """Hybridized eigenfrequencies (omega + g, omega - g) of a resonant pair."""
    if omega <= 0:
        raise DomainError("mode frequency must be positive")
    if g < 0:
        raise DomainError("coupling must be non-negative")
    return (omega + g, omega - g)


# ---------------------------------------------------------------------------
# vectorized steady-state solver
# ---------------------------------------------------------------------------

def config_to_params(config: SystemConfig) -> dict[str, float]:
    """Flatten a SystemConfig into the scalar map used by the array solvers."""
    m = config.modes
    c = config.couplings
    return {
        "omega_a": m["a"].eigenfrequency, "omega_b": m["b"].eigenfrequency,
        "omega_A1": m["A1"].eigenfrequency, "omega_m1": m["m1"].eigenfrequency,
        "omega_A2": m["A2"].eigenfrequency, "omega_m2": m["m2"].eigenfrequency,
        "kappa_a": m["a"].decay, "kappa_b": m["b"].decay,
        "kappa_A1": m["A1"].decay, "kappa_m1": m["m1"].decay,
        "kappa_A2": m["A2"].decay, "kappa_m2": m["m2"].decay,
        "rabi_a": config.optical_drive.rabi,
        "rabi_m1": config.mw_drive_1.rabi,
        "rabi_m2": config.mw_drive_2.rabi,
        "det_a": config.optical_drive.detuning,
        "det_A1": config.mw_drive_1.cavity_detuning,
        "det_A2": config.mw_drive_2.cavity_detuning,
        "det_m1": config.mw_drive_1.magnon_detuning,
        "det_m2": config.mw_drive_2.magnon_detuning,
        "g_ab": c.g_ab, "g_A1b": c.g_A1b, "g_A2b": c.g_A2b,
        "g_1": c.g_1, "g_2": c.g_2,
        "temperature": config.temperature,
    }


def _broadcast(p):
    """Broadcast the flat parameter map to a common shape of float arrays."""
    arrays = {k: np.asarray(v, dtype=float) for k, v in p.items()}
    shape = np.broadcast_shapes(*(a.shape for a in arrays.values()))
    return {k: np.broadcast_to(a, shape) for k, a in arrays.items()}, shape


def _closed_form_amplitudes(p, det_a_eff, det_A1_eff, det_A2_eff):
    """Amplitudes from the closed-form fixed-point expressions.

    The cavity detunings passed in are the effective (dressed) ones; the
    magnon detunings come straight from ``p``.  Exact zero denominators are
    reported through the returned ``singular`` mask rather than raised, so
    grid evaluation can mark individual points as failed.
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        den_a = 1j * det_a_eff + p["kappa_a"]
        a = p["rabi_a"] / den_a

        den_c1 = 1j * det_A1_eff + p["kappa_A1"]
        den_c2 = 1j * det_A2_eff + p["kappa_A2"]
        den_m1 = p["g_1"] ** 2 + (1j * p["det_m1"] + p["kappa_m1"]) * den_c1
        den_m2 = p["g_2"] ** 2 + (1j * p["det_m2"] + p["kappa_m2"]) * den_c2
        m1 = den_c1 * p["rabi_m1"] / den_m1
        m2 = den_c2 * p["rabi_m2"] / den_m2

        den_A1 = -det_A1_eff + 1j * p["kappa_A1"]
        den_A2 = -det_A2_eff + 1j * p["kappa_A2"]
        A1 = p["g_1"] * m1 / den_A1
        A2 = p["g_2"] * m2 / den_A2

        den_b = p["omega_b"] - 1j * p["kappa_b"]
        b = (p["g_ab"] * np.abs(a) ** 2
             + p["g_A1b"] * np.abs(A1) ** 2
             + p["g_A2b"] * np.abs(A2) ** 2) / den_b

    singular = np.zeros(np.shape(a), dtype=bool)
    for den in (den_a, den_m1, den_A1, den_m2, den_A2, den_b):
        singular |= np.abs(den) == 0.0
    return (a, b, A1, m1, A2, m2), singular


def _rel_change(new, old):
    diff = np.abs(new - old)
    scale = np.maximum(np.abs(new), np.abs(old))
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(scale > 0, diff / np.where(scale > 0, scale, 1.0), 0.0)
    return r


def steady_state_arrays(p, convention: DetuningConvention):
    """Solve the semiclassical steady state over a parameter grid.

    Parameters are the flat map from :data:`FLAT_PARAMS`; each entry may be a
    scalar or an array (all arrays broadcast together).  Returns a dict with
    complex amplitude arrays ``a, b, A1, m1, A2, m2``, effective and bare
    cavity detunings, a boolean ``failed`` mask and a float ``residual``
    array (last relative change of the fixed point; 0 for the closed form).
    """
    p, shape = _broadcast(p)

    if convention is DetuningConvention.EFFECTIVE:
        eff_a, eff_A1, eff_A2 = p["det_a"], p["det_A1"], p["det_A2"]
        amps, singular = _closed_form_amplitudes(p, eff_a, eff_A1, eff_A2)
        a, b, A1, m1, A2, m2 = amps
        shift = 2.0 * b.real
        failed = singular.copy()
        for arr in amps:
            failed |= ~np.isfinite(arr)
        return {
            "a": a, "b": b, "A1": A1, "m1": m1, "A2": A2, "m2": m2,
            "eff_det_a": np.broadcast_to(eff_a, shape),
            "eff_det_A1": np.broadcast_to(eff_A1, shape),
            "eff_det_A2": np.broadcast_to(eff_A2, shape),
            "bare_det_a": eff_a + p["g_ab"] * shift,
            "bare_det_A1": eff_A1 + p["g_A1b"] * shift,
            "bare_det_A2": eff_A2 + p["g_A2b"] * shift,
            "residual": np.where(failed, np.nan, 0.0),
            "failed": failed,
        }

    # Bare convention: the dressed detunings depend on <b>, solved by a
    # damped fixed-point iteration seeded with zero mechanical shift.
    amps, singular = _closed_form_amplitudes(p, p["det_a"], p["det_A1"], p["det_A2"])
    state = [np.array(x, dtype=complex, copy=True) for x in amps]
    active = ~singular
    last_change = np.where(active, np.inf, np.nan)

    for _ in range(PICARD_MAX_ITER):
        if not np.any(active):
            break
        shift = 2.0 * state[1].real
        eff_a = p["det_a"] - p["g_ab"] * shift
        eff_A1 = p["det_A1"] - p["g_A1b"] * shift
        eff_A2 = p["det_A2"] - p["g_A2b"] * shift
        proposal, singular_now = _closed_form_amplitudes(p, eff_a, eff_A1, eff_A2)
        change = np.zeros(shape)
        for s, q in zip(state, proposal):
            change = np.maximum(change, _rel_change(q, s))
        newly_bad = active & (singular_now | ~np.isfinite(change))
        active &= ~newly_bad
        last_change = np.where(active, change, last_change)
        last_change = np.where(newly_bad, np.nan, last_change)
        update = active  # converged lanes are frozen
        for k in range(6):
            mixed = (1.0 - PICARD_DAMPING) * state[k] + PICARD_DAMPING * proposal[k]
            state[k] = np.where(update, mixed, state[k])
        active = active & (change > PICARD_TOL)

    a, b, A1, m1, A2, m2 = state
    shift = 2.0 * b.real
    failed = singular | active | ~np.isfinite(last_change)
    for arr in state:
        failed |= ~np.isfinite(arr)
    return {
        "a": a, "b": b, "A1": A1, "m1": m1, "A2": A2, "m2": m2,
        "eff_det_a": p["det_a"] - p["g_ab"] * shift,
        "eff_det_A1": p["det_A1"] - p["g_A1b"] * shift,
        "eff_det_A2": p["det_A2"] - p["g_A2b"] * shift,
        "bare_det_a": np.broadcast_to(p["det_a"], shape),
        "bare_det_A1": np.broadcast_to(p["det_A1"], shape),
        "bare_det_A2": np.broadcast_to(p["det_A2"], shape),
        "failed": failed,
        "residual": last_change,
    }


def solve_steady_state(config: SystemConfig) -> SteadyState:
    """Semiclassical steady state of one configuration.

    Raises :class:`SingularityError` on an exact zero denominator and
    :class:`ConvergenceError` when the bare-detuning fixed point does not
    settle within its iteration budget.
    """
    p = config_to_params(config)
    out = steady_state_arrays(p, config.detuning_convention)
    if bool(out["failed"]):
        residual = float(out["residual"])
        if np.isnan(residual):
            raise SingularityError(
                "zero denominator in steady-state expressions "
                "(exact resonance with zero decay)"
            )
        raise ConvergenceError(
            f"steady-state fixed point did not converge within "
            f"{PICARD_MAX_ITER} iterations (last relative change {residual:.3e})",
            residual=residual,
        )
    return SteadyState(
        amp_a=complex(out["a"]), amp_b=complex(out["b"]),
        amp_A1=complex(out["A1"]), amp_m1=complex(out["m1"]),
        amp_A2=complex(out["A2"]), amp_m2=complex(out["m2"]),
        eff_detuning_a=float(out["eff_det_a"]),
        eff_detuning_A1=float(out["eff_det_A1"]),
        eff_detuning_A2=float(out["eff_det_A2"]),
        bare_detuning_a=float(out["bare_det_a"]),
        bare_detuning_A1=float(out["bare_det_A1"]),
        bare_detuning_A2=float(out["bare_det_A2"]),
    )


def steady_state_residuals(config: SystemConfig, ss: SteadyState) -> np.ndarray:
    """Relative residuals of the six steady-state equations.

    Each residual is |amp - rhs(amp)| normalized by the larger of the two
    magnitudes, so an exactly consistent amplitude gives 0 and an undriven
    mode (both sides zero) gives 0 as well.
    """
    p = config_to_params(config)
    k = {name: p["kappa_" + name] for name in ("a", "b", "A1", "m1", "A2", "m2")}
    amps = ss.amplitudes()

    rhs_a = p["rabi_a"] / (1j * ss.eff_detuning_a + k["a"])
    den_c1 = 1j * ss.eff_detuning_A1 + k["A1"]
    den_c2 = 1j * ss.eff_detuning_A2 + k["A2"]
    rhs_m1 = den_c1 * p["rabi_m1"] / (
        p["g_1"] ** 2 + (1j * p["det_m1"] + k["m1"]) * den_c1)
    rhs_m2 = den_c2 * p["rabi_m2"] / (
        p["g_2"] ** 2 + (1j * p["det_m2"] + k["m2"]) * den_c2)
    rhs_A1 = p["g_1"] * amps["m1"] / (-ss.eff_detuning_A1 + 1j * k["A1"])
    rhs_A2 = p["g_2"] * amps["m2"] / (-ss.eff_detuning_A2 + 1j * k["A2"])
    rhs_b = (p["g_ab"] * abs(amps["a"]) ** 2
             + p["g_A1b"] * abs(amps["A1"]) ** 2
             + p["g_A2b"] * abs(amps["A2"]) ** 2) / (p["omega_b"] - 1j * k["b"])

    pairs = [
        (amps["a"], rhs_a), (amps["m1"], rhs_m1), (amps["A1"], rhs_A1),
        (amps["m2"], rhs_m2), (amps["A2"], rhs_A2), (amps["b"], rhs_b),
    ]
    res = []
    for lhs, rhs in pairs:
        scale = max(abs(lhs), abs(rhs))
        res.append(abs(lhs - rhs) / scale if scale > 0 else 0.0)
    return np.array(res)


# ---------------------------------------------------------------------------
# linearized fluctuation dynamics
# ---------------------------------------------------------------------------

def effective_couplings(config: SystemConfig, ss: SteadyState) -> EffectiveCouplings:
    """Amplitude-dressed coupling rates g * Re<.> and g * Im<.>."""
    c = config.couplings
    return EffectiveCouplings(
        GR_ab=c.g_ab * ss.amp_a.real, GI_ab=c.g_ab * ss.amp_a.imag,
        GR_A1b=c.g_A1b * ss.amp_A1.real, GI_A1b=c.g_A1b * ss.amp_A1.imag,
        GR_A2b=c.g_A2b * ss.amp_A2.real, GI_A2b=c.g_A2b * ss.amp_A2.imag,
    )


def drift_stack(p, ss_arrays) -> np.ndarray:
    """Drift matrices of the linearized dynamics over a parameter grid.

    Returns an array of shape ``grid_shape + (12, 12)``.
    """
    p, shape = _broadcast(p)
    shape = np.broadcast_shapes(
        shape, *(np.shape(v) for v in ss_arrays.values()))
    p = {k: np.broadcast_to(v, shape) for k, v in p.items()}
    ss_arrays = {k: np.broadcast_to(v, shape) for k, v in ss_arrays.items()}
    A = np.zeros(shape + (12, 12))

    GR_ab = p["g_ab"] * ss_arrays["a"].real
    GI_ab = p["g_ab"] * ss_arrays["a"].imag
    GR_1 = p["g_A1b"] * ss_arrays["A1"].real
    GI_1 = p["g_A1b"] * ss_arrays["A1"].imag
    GR_2 = p["g_A2b"] * ss_arrays["A2"].real
    GI_2 = p["g_A2b"] * ss_arrays["A2"].imag
    det_a = ss_arrays["eff_det_a"]
    det_A1 = ss_arrays["eff_det_A1"]
    det_A2 = ss_arrays["eff_det_A2"]

    # optical cavity quadratures
    A[..., 0, 0] = -p["kappa_a"]; A[..., 0, 1] = det_a
    A[..., 0, 2] = -2.0 * GI_ab
    A[..., 1, 0] = -det_a; A[..., 1, 1] = -p["kappa_a"]
    A[..., 1, 2] = 2.0 * GR_ab
    # mechanical resonator
    A[..., 2, 2] = -p["kappa_b"]; A[..., 2, 3] = p["omega_b"]
    A[..., 3, 0] = 2.0 * GR_ab; A[..., 3, 1] = 2.0 * GI_ab
    A[..., 3, 2] = -p["omega_b"]; A[..., 3, 3] = -p["kappa_b"]
    A[..., 3, 4] = 2.0 * GR_1; A[..., 3, 5] = 2.0 * GI_1
    A[..., 3, 8] = 2.0 * GR_2; A[..., 3, 9] = 2.0 * GI_2
    # microwave cavity 1
    A[..., 4, 2] = -2.0 * GI_1
    A[..., 4, 4] = -p["kappa_A1"]; A[..., 4, 5] = det_A1
    A[..., 4, 7] = p["g_1"]
    A[..., 5, 2] = 2.0 * GR_1
    A[..., 5, 4] = -det_A1; A[..., 5, 5] = -p["kappa_A1"]
    A[..., 5, 6] = -p["g_1"]
    # magnon 1
    A[..., 6, 5] = p["g_1"]
    A[..., 6, 6] = -p["kappa_m1"]; A[..., 6, 7] = p["det_m1"]
    A[..., 7, 4] = -p["g_1"]
    A[..., 7, 6] = -p["det_m1"]; A[..., 7, 7] = -p["kappa_m1"]
    # microwave cavity 2
    A[..., 8, 2] = -2.0 * GI_2
    A[..., 8, 8] = -p["kappa_A2"]; A[..., 8, 9] = det_A2
    A[..., 8, 11] = p["g_2"]
    A[..., 9, 2] = 2.0 * GR_2
    A[..., 9, 8] = -det_A2; A[..., 9, 9] = -p["kappa_A2"]
    A[..., 9, 10] = -p["g_2"]
    # magnon 2
    A[..., 10, 9] = p["g_2"]
    A[..., 10, 10] = -p["kappa_m2"]; A[..., 10, 11] = p["det_m2"]
    A[..., 11, 8] = -p["g_2"]
    A[..., 11, 10] = -p["det_m2"]; A[..., 11, 11] = -p["kappa_m2"]
    return A


def diffusion_stack(p) -> np.ndarray:
    """Diagonals of the diffusion matrix over a parameter grid.

    Entry pairs are kappa * (2 N + 1) with N the thermal occupation at each
    mode's eigenfrequency; shape is ``grid_shape + (12,)``.
    """
    p, shape = _broadcast(p)
    diag = np.empty(shape + (12,))
    for k, mode in enumerate(MODES):
        n = bose_einstein(p["omega_" + mode], p["temperature"])
        val = p["kappa_" + mode] * (2.0 * np.asarray(n) + 1.0)
        diag[..., 2 * k] = val
        diag[..., 2 * k + 1] = val
    return diag


def build_drift(config: SystemConfig, ss: SteadyState) -> np.ndarray:
    """The 12x12 drift matrix at one steady state."""
    p = config_to_params(config)
    arrays = {
        "a": np.asarray(ss.amp_a), "A1": np.asarray(ss.amp_A1),
        "A2": np.asarray(ss.amp_A2),
        "eff_det_a": np.asarray(ss.eff_detuning_a),
        "eff_det_A1": np.asarray(ss.eff_detuning_A1),
        "eff_det_A2": np.asarray(ss.eff_detuning_A2),
    }
    return drift_stack(p, arrays)


def build_diffusion(config: SystemConfig) -> np.ndarray:
    """The 12x12 diagonal diffusion matrix for one configuration."""
    return np.diag(diffusion_stack(config_to_params(config)))


def linearize(config: SystemConfig, ss: SteadyState | None = None) -> LinearizedSystem:
    """Drift and diffusion of the fluctuation dynamics in one object."""
    if ss is None:
        ss = solve_steady_state(config)
    return LinearizedSystem(
        drift=build_drift(config, ss),
        diffusion=build_diffusion(config),
    )


# ---------------------------------------------------------------------------
# default parameter set
# ---------------------------------------------------------------------------

def default_config(
    detuning_a: float | None = None,
    convention: DetuningConvention = DetuningConvention.EFFECTIVE,
) -> SystemConfig:
    """The experimentally feasible operating point used throughout.

    Optical drive detuned to the red mechanical sideband (one mechanical
    frequency above resonance), microwave drives on resonance, 10 mK bath.
    """
    omega_b = TWO_PI * 10e6
    if detuning_a is None:
        detuning_a = omega_b
    modes = {
        "a": ModeParams(TWO_PI * 370e12, 0.4 * omega_b),
        "b": ModeParams(omega_b, TWO_PI * 100.0),
        "A1": ModeParams(TWO_PI * 10e9, 0.1 * omega_b),
        "m1": ModeParams(TWO_PI * 10e9, 0.1 * omega_b),
        "A2": ModeParams(TWO_PI * 10e9, 0.1 * omega_b),
        "m2": ModeParams(TWO_PI * 10e9, 0.1 * omega_b),
    }
    couplings = CouplingParams(
        g_ab=1.2 * TWO_PI * 100.0,
        g_A1b=CALIBRATED_G_AB_MW,
        g_A2b=CALIBRATED_G_AB_MW,
        g_1=TWO_PI * 1.7e6,
        g_2=TWO_PI * 1.7e6,
    )
    return SystemConfig(
        modes=modes,
        optical_drive=DriveParams(1.43e12, convention, detuning_a),
        mw_drive_1=MicrowaveDrive(7.13e14, convention, 0.0, 0.0),
        mw_drive_2=MicrowaveDrive(7.13e14, convention, 0.0, 0.0),
        couplings=couplings,
        temperature=0.010,
    )


def replace_params(config: SystemConfig, **flat_updates) -> SystemConfig:
    """Return a copy of ``config`` with flat parameters replaced.

    Keys follow :data:`FLAT_PARAMS`, e.g. ``det_a=...`` or ``kappa_A1=...``.
    """
    unknown = set(flat_updates) - set(FLAT_PARAMS)
    if unknown:
        raise KeyError(f"unknown parameters: {sorted(unknown)}")
    p = config_to_params(config)
    p.update(flat_updates)
    conv = config.detuning_convention
    modes = {
        name: ModeParams(p["omega_" + name], p["kappa_" + name])
        for name in MODES
    }
    return SystemConfig(
        modes=modes,
        optical_drive=DriveParams(p["rabi_a"], conv, p["det_a"]),
        mw_drive_1=MicrowaveDrive(p["rabi_m1"], conv, p["det_A1"], p["det_m1"]),
        mw_drive_2=MicrowaveDrive(p["rabi_m2"], conv, p["det_A2"], p["det_m2"]),
        couplings=CouplingParams(
            g_ab=p["g_ab"], g_A1b=p["g_A1b"], g_A2b=p["g_A2b"],
            g_1=p["g_1"], g_2=p["g_2"],
        ),
        temperature=p["temperature"],
    )
