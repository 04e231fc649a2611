"""Gaussian-state machinery for the linearized steady state.

Stability testing, the stationary Lyapunov solve, covariance-block
extraction, symplectic spectra and logarithmic negativity, all in the
quadrature convention with vacuum variance 1/2.  The symplectic form is the
direct sum of 2x2 blocks [[0, 1], [-1, 0]], one per mode.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .backend import impl
from .errors import DomainError, NumericalError, PhysicalityWarning, StabilityError
from .model import MODE_INDEX

# Stability margin is scale-relative: unstable when the spectral abscissa of
# the drift matrix exceeds -STABILITY_MARGIN_FACTOR * ||A||_F.
STABILITY_MARGIN_FACTOR = 1e-9

# Residual contract for the Lyapunov solve, relative to ||D||_F, plus the
# tighter internal target the iterative refinement aims for.
LYAP_RESIDUAL_TOL = 1e-10
LYAP_REFINE_TARGET = 1e-13
LYAP_MAX_REFINE = 3

# Uncertainty bound: symplectic eigenvalues of a physical covariance matrix
# are >= 1/2 up to this slack.
PHYSICALITY_SLACK = 1e-9

_J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
PARTIAL_TRANSPOSE = np.diag([1.0, -1.0, 1.0, 1.0])


def symplectic_form(n_modes: int) -> np.ndarray:
    """Direct sum of n_modes copies of [[0, 1], [-1, 0]]."""
    out = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        out[2 * k: 2 * k + 2, 2 * k: 2 * k + 2] = _J2
    return out


@dataclass(frozen=True)
class EntanglementResult:
    """Smallest partial-transpose symplectic eigenvalue and E_N."""

    nu_min: float
    e_n: float


def spectral_abscissa(A) -> float:
    """Largest real part over the eigenvalues of ``A``."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError("spectral_abscissa requires a square matrix")
    return impl.spectral_abscissa(np.ascontiguousarray(A))


def is_stable(A) -> bool:
    """Whether every eigenvalue real part clears the scale-relative margin."""
    A = np.asarray(A, dtype=float)
    margin = STABILITY_MARGIN_FACTOR * np.linalg.norm(A)
    return spectral_abscissa(A) < -margin


def solve_lyapunov(A, D) -> np.ndarray:
    """Stationary covariance V solving A V + V A^T = -D.

    Refuses unstable drift matrices (no pseudo-solution is ever returned)
    and enforces the relative residual contract on the result.
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    if A.shape != D.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError("drift and diffusion must be square and same shape")
    if not np.allclose(D, D.T, rtol=0.0, atol=1e-12 * max(1.0, np.linalg.norm(D))):
        raise DomainError("diffusion matrix must be symmetric")
    if not is_stable(A):
        raise StabilityError("drift matrix is not stable; no stationary state")
    V, resid = impl.lyap_solve(
        np.ascontiguousarray(A), np.ascontiguousarray(D),
        LYAP_REFINE_TARGET, LYAP_MAX_REFINE,
    )
    if not np.isfinite(resid) or resid > LYAP_RESIDUAL_TOL:
        raise NumericalError(
            f"Lyapunov residual {resid:.3e} misses the "
            f"{LYAP_RESIDUAL_TOL:.0e} contract"
        )
    return V


def _mode_index(s) -> int:
    if isinstance(s, str):
        try:
            return MODE_INDEX[s]
        except KeyError:
            raise DomainError(f"unknown mode identity {s!r}") from None
    s = int(s)
    if not 0 <= s < len(MODE_INDEX):
        raise DomainError(f"mode index {s} out of range")
    return s


def bipartite_cm(V, s1, s2) -> np.ndarray:
    """4x4 covariance block of the ordered mode pair (s1, s2)."""
    i, j = _mode_index(s1), _mode_index(s2)
    if i == j:
        raise DomainError("bipartite_cm requires two distinct modes")
    V = np.asarray(V, dtype=float)
    idx = np.array([2 * i, 2 * i + 1, 2 * j, 2 * j + 1])
    return V[np.ix_(idx, idx)]


def min_symplectic_eig(C, partial_transpose: bool) -> float:
    """Smallest modulus eigenvalue of J C~, C~ the (transposed) block.

    With ``partial_transpose`` the momentum of the first mode is flipped
    before forming the spectrum.  A block whose plain symplectic spectrum
    dips below the vacuum bound triggers a PhysicalityWarning; the value is
    still returned.
    """
    C = np.asarray(C, dtype=float)
    if C.shape != (4, 4):
        raise DomainError("expected a two-mode (4x4) covariance block")
    plain = impl.min_abs_eig_J(np.ascontiguousarray(C))
    if plain < 0.5 - PHYSICALITY_SLACK:
        warnings.warn(
            f"covariance block violates the uncertainty bound "
            f"(nu_min = {plain:.6g} < 1/2)",
            PhysicalityWarning,
            stacklevel=2,
        )
    if not partial_transpose:
        return plain
    s = np.diag(PARTIAL_TRANSPOSE)
    Ct = C * np.outer(s, s)  # exact sign flips, no matmul rounding
    return impl.min_abs_eig_J(np.ascontiguousarray(Ct))


def min_symplectic_eig_closed(C, partial_transpose: bool) -> float:
    """Closed-form route to the same quantity via the two-mode invariants.

    Kept separate from the eigenvalue route so the two can cross-check each
    other.
    """
    C = np.asarray(C, dtype=float)
    alpha = C[:2, :2]
    beta = C[2:, 2:]
    gamma = C[:2, 2:]
    det_g = np.linalg.det(gamma)
    if partial_transpose:
        det_g = -det_g
    delta = np.linalg.det(alpha) + np.linalg.det(beta) + 2.0 * det_g
    disc = delta * delta - 4.0 * np.linalg.det(C)
    nu_sq = 0.5 * (delta - np.sqrt(max(disc, 0.0)))
    return float(np.sqrt(max(nu_sq, 0.0)))


def log_negativity(C) -> EntanglementResult:
    """Logarithmic negativity of a two-mode covariance block."""
    nu = min_symplectic_eig(C, partial_transpose=True)
    return EntanglementResult(nu_min=nu, e_n=max(0.0, -np.log(2.0 * nu)))


def symplectic_eigenvalues(V) -> np.ndarray:
    """The n Williamson eigenvalues of a 2n x 2n covariance matrix."""
    V = np.asarray(V, dtype=float)
    mods = np.sort(impl.abs_eigs_J(np.ascontiguousarray(V)))
    # moduli come in degenerate pairs (+/- i nu); keep one per pair
    return mods[::2]


def check_physicality(V) -> bool:
    """Whether every symplectic eigenvalue respects the vacuum bound."""
    return bool(np.min(symplectic_eigenvalues(V)) >= 0.5 - PHYSICALITY_SLACK)


def hurwitz_stable(A) -> bool:
    """Routh-Hurwitz determinant test, exposed for small (n <= 4) matrices.

    The determinant chain is numerically ill-conditioned at the 12x12 size
    of the full drift matrix; this exists as an independent cross-check of
    the eigenvalue criterion on small test systems only.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if n > 4:
        raise DomainError("hurwitz_stable is limited to n <= 4")
    coeffs = np.poly(A)  # leading coefficient 1
    if np.any(coeffs <= 0):
        # a necessary condition: all characteristic coefficients positive
        return False
    # Hurwitz matrix H[i, j] = a_{2j - i + 1} with a_k = coeffs[k]
    H = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            k = 2 * (j + 1) - (i + 1)
            if 0 <= k <= n:
                H[i, j] = coeffs[k]
    minors = [np.linalg.det(H[: k + 1, : k + 1]) for k in range(n)]
    return all(m > 0 for m in minors)
