"""Pure numpy/scipy implementation of the numerical kernels.

This is the fallback backend; ommsim._core (compiled) implements the same
contract.  Both must produce results agreeing to tight tolerances, which is
enforced by the cross-backend tests.
"""

import numpy as np
import scipy.linalg as sla

name = "python"

_J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])

# point status codes shared with the compiled backend
STATUS_STABLE = 0
STATUS_UNSTABLE = 1
STATUS_NUMFAIL = 2


def _symplectic_form(n_quads):
    return sla.block_diag(*([_J2] * (n_quads // 2)))


def spectral_abscissa(A):
    """Largest real part over the eigenvalues of ``A``."""
    return float(np.max(np.linalg.eigvals(np.asarray(A, dtype=float)).real))


def lyap_solve(A, D, refine_target=1e-13, max_refine=3):
    """Solve A V + V A^T = -D, iteratively refined on the residual.

    Returns ``(V, relative_residual)``; V is exactly symmetric.  Stability of
    ``A`` is the caller's responsibility.
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    norm_d = np.linalg.norm(D)
    if norm_d == 0.0:
        return np.zeros_like(D), 0.0
    V = sla.solve_continuous_lyapunov(A, -D)
    V = 0.5 * (V + V.T)
    R = A @ V + V @ A.T + D
    resid = np.linalg.norm(R)
    for _ in range(max_refine):
        if resid <= refine_target * norm_d:
            break
        dV = sla.solve_continuous_lyapunov(A, -R)
        V = V + 0.5 * (dV + dV.T)
        R = A @ V + V @ A.T + D
        resid = np.linalg.norm(R)
    return V, float(resid / norm_d)


def abs_eigs_J(M):
    """Moduli of the eigenvalues of (J M), J the symplectic form."""
    M = np.asarray(M, dtype=float)
    J = _symplectic_form(M.shape[0])
    return np.abs(np.linalg.eigvals(J @ M))


def min_abs_eig_J(M):
    return float(np.min(abs_eigs_J(M)))


def _pair_block(V, i, j, transpose):
    idx = np.array([2 * i, 2 * i + 1, 2 * j, 2 * j + 1])
    C = V[np.ix_(idx, idx)]
    if transpose:
        s = np.array([1.0, -1.0, 1.0, 1.0])
        C = C * np.outer(s, s)
    return C


def evaluate_point(A, ddiag, pairs, stab_eps_factor, resid_tol,
                   refine_target, max_refine):
    """Stability gate, stationary covariance and pair entanglement.

    Parameters are one drift matrix (12x12), the diffusion diagonal (12,),
    and an integer array of mode-index pairs with shape (P, 2).  Returns
    ``(status, en, resid, min_nu)`` where ``en`` has one entry per pair and
    the diagnostics are NaN unless the point is stable.
    """
    A = np.asarray(A, dtype=float)
    ddiag = np.asarray(ddiag, dtype=float)
    pairs = np.asarray(pairs, dtype=np.int64)
    n_pairs = pairs.shape[0]
    en = np.full(n_pairs, np.nan)

    if not np.all(np.isfinite(A)) or not np.all(np.isfinite(ddiag)):
        return STATUS_NUMFAIL, en, np.nan, np.nan

    margin = stab_eps_factor * np.linalg.norm(A)
    if spectral_abscissa(A) >= -margin:
        return STATUS_UNSTABLE, en, np.nan, np.nan

    D = np.diag(ddiag)
    try:
        V, resid = lyap_solve(A, D, refine_target, max_refine)
    except np.linalg.LinAlgError:
        return STATUS_NUMFAIL, en, np.nan, np.nan
    if not np.isfinite(resid) or resid > resid_tol:
        return STATUS_NUMFAIL, en, resid, np.nan

    min_nu = min_abs_eig_J(V)
    for k in range(n_pairs):
        C = _pair_block(V, pairs[k, 0], pairs[k, 1], transpose=True)
        nu = min_abs_eig_J(C)
        en[k] = max(0.0, -np.log(2.0 * nu))
    return STATUS_STABLE, en, resid, min_nu
