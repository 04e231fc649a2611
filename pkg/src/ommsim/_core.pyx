# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels.

Same contract as ommsim._core_py, with the per-point pipeline done in one
call through direct LAPACK bindings: eigenvalue stability gate, Schur-based
Lyapunov solve with residual refinement (the Schur factorization is reused
across refinement steps), and symplectic spectra for the entanglement
measure.  The heavy section runs without the GIL so sweep workers scale
across threads.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, log, sqrt
from libc.stdlib cimport free, malloc
from libc.string cimport memcpy, memset

from scipy.linalg.cython_blas cimport dgemm
from scipy.linalg.cython_lapack cimport dgees, dgeev, dselect2, dtrsyl

cnp.import_array()

name = "compiled"

cdef enum:
    _STABLE = 0
    _UNSTABLE = 1
    _NUMFAIL = 2

STATUS_STABLE = _STABLE
STATUS_UNSTABLE = _UNSTABLE
STATUS_NUMFAIL = _NUMFAIL

DEF NMAX = 12          # pipeline dimension (six modes, two quadratures)
DEF LWORK = 1024


cdef bint _no_sort(double *a, double *b) noexcept nogil:
    return 0


cdef double _frob(const double *m, int n) noexcept nogil:
    cdef double acc = 0.0
    cdef int i
    for i in range(n * n):
        acc += m[i] * m[i]
    return sqrt(acc)


cdef int _eigvals(double *a, int n, double *wr, double *wi,
                  double *work, int lwork) noexcept nogil:
    """Eigenvalues of the matrix in ``a`` (destroyed). Storage order is
    irrelevant: the transpose has the same spectrum."""
    cdef int info = 0, lda = n, one = 1
    cdef char jobn = b'N'
    dgeev(&jobn, &jobn, &n, a, &lda, wr, wi, NULL, &one, NULL, &one,
          work, &lwork, &info)
    return info


cdef double _max_real_part(double *a, int n, double *work, int lwork,
                           int *info) noexcept nogil:
    cdef double wr[NMAX]
    cdef double wi[NMAX]
    cdef double best
    cdef int i
    info[0] = _eigvals(a, n, wr, wi, work, lwork)
    if info[0] != 0:
        return 0.0
    best = wr[0]
    for i in range(1, n):
        if wr[i] > best:
            best = wr[i]
    return best


cdef double _min_abs_eig_j(const double *m, int n, double *scratch,
                           double *work, int lwork, int *info) noexcept nogil:
    """min |eig(J m)| with J the block-diagonal symplectic form.

    Row 2k of (J m) is row 2k+1 of m; row 2k+1 is minus row 2k.  ``m`` is
    read as row-major; the eigenvalue call is storage-order agnostic.
    """
    cdef int k, j, i
    cdef double wr[NMAX]
    cdef double wi[NMAX]
    cdef double best, mod
    for k in range(n // 2):
        for j in range(n):
            scratch[(2 * k) * n + j] = m[(2 * k + 1) * n + j]
            scratch[(2 * k + 1) * n + j] = -m[(2 * k) * n + j]
    info[0] = _eigvals(scratch, n, wr, wi, work, lwork)
    if info[0] != 0:
        return 0.0
    best = -1.0
    for i in range(n):
        mod = sqrt(wr[i] * wr[i] + wi[i] * wi[i])
        if best < 0.0 or mod < best:
            best = mod
    return best


cdef void _gemm(char ta, char tb, int n, double alpha, const double *a,
                const double *b, double beta, double *c) noexcept nogil:
    # column-major n x n products
    dgemm(&ta, &tb, &n, &n, &n, &alpha, <double *> a, &n, <double *> b, &n,
          &beta, c, &n)


cdef int _lyap_core(const double *a_row, const double *d_sym, int n,
                    double resid_target, int max_refine,
                    double *v_out, double *resid_out,
                    double *arena, double *work, int lwork) noexcept nogil:
    """Solve a V + V a^T = -d and refine on the residual.

    ``a_row`` is row-major; handing that buffer to LAPACK yields the Schur
    form of a^T, turning the problem into T^T X + X T = -Q^T d Q with
    X = Q^T V Q, which dtrsyl solves directly.  ``d_sym`` must be symmetric
    so its storage order does not matter.  The arena must hold 6 n*n slots.
    Returns 0 on success.
    """
    cdef double *t = arena
    cdef double *q = arena + n * n
    cdef double *tmp = arena + 2 * n * n
    cdef double *c = arena + 3 * n * n
    cdef double *v = arena + 4 * n * n
    cdef double *r = arena + 5 * n * n
    cdef int info = 0, sdim = 0, lda = n, i, j, step
    cdef char jobv = b'V', sortn = b'N', transt = b'T', transn = b'N'
    cdef int isgn = 1
    cdef double scale = 1.0, norm_d, resid
    cdef double wr[NMAX]
    cdef double wi[NMAX]

    norm_d = _frob(d_sym, n)
    if norm_d == 0.0:
        memset(v_out, 0, n * n * sizeof(double))
        resid_out[0] = 0.0
        return 0

    memcpy(t, a_row, n * n * sizeof(double))
    dgees(&jobv, &sortn, <dselect2 *> _no_sort, &n, t, &lda, &sdim, wr, wi,
          q, &lda, work, &lwork, NULL, &info)
    if info != 0:
        return 1

    # first solve against -d
    memcpy(r, d_sym, n * n * sizeof(double))
    for i in range(n * n):
        r[i] = -r[i]
    memset(v, 0, n * n * sizeof(double))

    for step in range(max_refine + 1):
        # c = q^T r q ; dtrsyl overwrites c with x
        _gemm(b'T', b'N', n, 1.0, q, r, 0.0, tmp)
        _gemm(b'N', b'N', n, 1.0, tmp, q, 0.0, c)
        scale = 1.0
        dtrsyl(&transt, &transn, &isgn, &n, &n, t, &lda, t, &lda, c, &lda,
               &scale, &info)
        if info < 0 or scale == 0.0:
            return 1
        # correction = q x q^T / scale, symmetrized into v
        _gemm(b'N', b'N', n, 1.0 / scale, q, c, 0.0, tmp)
        _gemm(b'N', b'T', n, 1.0, tmp, q, 0.0, c)
        for i in range(n):
            for j in range(n):
                v[i * n + j] += 0.5 * (c[i * n + j] + c[j * n + i])

        # residual r = a v + v a^T + d = m^T v + (m^T v)^T + d with
        # m = a^T (the row-major buffer read column-major); v symmetric
        _gemm(b'T', b'N', n, 1.0, a_row, v, 0.0, tmp)
        for i in range(n):
            for j in range(n):
                r[i * n + j] = tmp[i * n + j] + tmp[j * n + i] \
                    + d_sym[i * n + j]
        resid = _frob(r, n)
        resid_out[0] = resid / norm_d
        if resid <= resid_target * norm_d:
            break
        # next round solves a dV + dV a^T = -r
        for i in range(n * n):
            r[i] = -r[i]

    # caller judges the final residual against its contract
    memcpy(v_out, v, n * n * sizeof(double))
    return 0


def spectral_abscissa(double[:, ::1] A):
    """Largest real part over the eigenvalues of ``A``."""
    cdef int n = A.shape[0]
    cdef double *buf = <double *> malloc(n * n * sizeof(double))
    cdef double *work = <double *> malloc(16 * n * sizeof(double))
    cdef double out
    cdef int info = 0
    if buf == NULL or work == NULL:
        free(buf); free(work)
        raise MemoryError
    try:
        memcpy(buf, &A[0, 0], n * n * sizeof(double))
        with nogil:
            out = _max_real_part(buf, n, work, 16 * n, &info)
        if info != 0:
            raise np.linalg.LinAlgError("eigenvalue computation failed")
        return float(out)
    finally:
        free(buf); free(work)


def abs_eigs_J(double[:, ::1] M):
    """Moduli of the eigenvalues of (J M)."""
    cdef int n = M.shape[0]
    if n % 2 or n > NMAX:
        return np.abs(np.linalg.eigvals(_j_mat(n) @ np.asarray(M)))
    cdef double scratch[NMAX * NMAX]
    cdef double work[LWORK]
    cdef double wr[NMAX]
    cdef double wi[NMAX]
    cdef int info = 0, k, j, i
    cdef const double *m = &M[0, 0]
    with nogil:
        for k in range(n // 2):
            for j in range(n):
                scratch[(2 * k) * n + j] = m[(2 * k + 1) * n + j]
                scratch[(2 * k + 1) * n + j] = -m[(2 * k) * n + j]
        info = _eigvals(scratch, n, wr, wi, work, LWORK)
    if info != 0:
        raise np.linalg.LinAlgError("eigenvalue computation failed")
    out = np.empty(n)
    for i in range(n):
        out[i] = sqrt(wr[i] * wr[i] + wi[i] * wi[i])
    return out


def _j_mat(n):
    j2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
    out = np.zeros((n, n))
    for k in range(n // 2):
        out[2 * k: 2 * k + 2, 2 * k: 2 * k + 2] = j2
    return out


def min_abs_eig_J(double[:, ::1] M):
    return float(np.min(abs_eigs_J(M)))


def lyap_solve(double[:, ::1] A, double[:, ::1] D,
               double refine_target=1e-13, int max_refine=3):
    """Solve A V + V A^T = -D; returns (V, relative_residual)."""
    cdef int n = A.shape[0]
    if D.shape[0] != n or D.shape[1] != n or A.shape[1] != n:
        raise ValueError("drift and diffusion must be square and same shape")
    if n > NMAX:
        raise ValueError(f"compiled kernel supports n <= {NMAX}")
    cdef cnp.ndarray[cnp.float64_t, ndim=2] V = np.empty((n, n))
    cdef double arena[6 * NMAX * NMAX]
    cdef double work[LWORK]
    cdef double resid = 0.0
    cdef int rc
    with nogil:
        rc = _lyap_core(&A[0, 0], &D[0, 0], n, refine_target, max_refine,
                        <double *> V.data, &resid, arena, work, LWORK)
    if rc != 0:
        raise np.linalg.LinAlgError("Schur/Sylvester solve failed")
    return V, float(resid)


def evaluate_point(double[:, ::1] A, double[::1] ddiag,
                   cnp.int64_t[:, ::1] pairs,
                   double stab_eps_factor, double resid_tol,
                   double refine_target, int max_refine):
    """Stability gate, stationary covariance and pair entanglement.

    Mirrors the pure backend: returns (status, en, resid, min_nu).
    """
    cdef int n = A.shape[0]
    if n != NMAX or ddiag.shape[0] != NMAX:
        raise ValueError("evaluate_point expects the 12-dimensional system")
    cdef int n_pairs = pairs.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] en = np.full(n_pairs, np.nan)
    cdef double *en_data = <double *> en.data

    cdef double buf[NMAX * NMAX]
    cdef double dmat[NMAX * NMAX]
    cdef double v[NMAX * NMAX]
    cdef double arena[6 * NMAX * NMAX]
    cdef double work[LWORK]
    cdef double scratch[NMAX * NMAX]
    cdef double c4[16]
    cdef double sc4[16]
    cdef double sgn[4]
    cdef int idx[4]
    cdef int info = 0, rc = 0, status = _STABLE
    cdef int i, j, k, p2
    cdef double norm_a, abscissa, resid = 0.0, min_nu = 0.0, nu
    cdef const double *a = &A[0, 0]

    sgn[0] = 1.0; sgn[1] = -1.0; sgn[2] = 1.0; sgn[3] = 1.0

    for i in range(n * n):
        if not (A[i // n, i % n] == A[i // n, i % n]):
            return _NUMFAIL, en, np.nan, np.nan
    for i in range(n):
        if not (ddiag[i] == ddiag[i]):
            return _NUMFAIL, en, np.nan, np.nan

    with nogil:
        norm_a = _frob(a, n)
        memcpy(buf, a, n * n * sizeof(double))
        abscissa = _max_real_part(buf, n, work, LWORK, &info)
        if info != 0:
            status = _NUMFAIL
        elif abscissa >= -stab_eps_factor * norm_a:
            status = _UNSTABLE
        else:
            memset(dmat, 0, n * n * sizeof(double))
            for i in range(n):
                dmat[i * n + i] = ddiag[i]
            rc = _lyap_core(a, dmat, n, refine_target, max_refine,
                            v, &resid, arena, work, LWORK)
            if rc != 0 or resid != resid or resid > resid_tol:
                status = _NUMFAIL
            else:
                min_nu = _min_abs_eig_j(v, n, scratch, work, LWORK, &info)
                if info != 0:
                    status = _NUMFAIL
            if status == _STABLE:
                for k in range(n_pairs):
                    idx[0] = 2 * <int> pairs[k, 0]
                    idx[1] = idx[0] + 1
                    idx[2] = 2 * <int> pairs[k, 1]
                    idx[3] = idx[2] + 1
                    for i in range(4):
                        for j in range(4):
                            c4[i * 4 + j] = sgn[i] * sgn[j] \
                                * v[idx[i] * n + idx[j]]
                    nu = _min_abs_eig_j(c4, 4, sc4, work, LWORK, &info)
                    if info != 0:
                        status = _NUMFAIL
                        break
                    en_data[k] = -log(2.0 * nu)
                    if en_data[k] < 0.0:
                        en_data[k] = 0.0

    if status == _UNSTABLE:
        return _UNSTABLE, en, np.nan, np.nan
    if status == _NUMFAIL:
        en[:] = np.nan
        return _NUMFAIL, en, (float(resid) if resid == resid else np.nan), np.nan
    return _STABLE, en, float(resid), float(min_nu)
