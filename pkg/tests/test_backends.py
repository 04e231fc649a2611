"""Cross-agreement between the compiled kernels and the pure fallback."""

import numpy as np
import pytest

from ommsim import model
from ommsim.backend import available_backends

from conftest import sample_config

BACKENDS = available_backends()
HAVE_COMPILED = "compiled" in BACKENDS

pytestmark = pytest.mark.skipif(
    not HAVE_COMPILED, reason="compiled backend not built")


def _system(rng):
    cfg = sample_config(rng)
    ss = model.solve_steady_state(cfg)
    return model.build_drift(cfg, ss), model.build_diffusion(cfg)


def test_spectral_abscissa_agreement(rng):
    py, cy = BACKENDS["python"], BACKENDS["compiled"]
    for _ in range(20):
        A, _ = _system(rng)
        a, b = py.spectral_abscissa(A), cy.spectral_abscissa(A)
        assert abs(a - b) <= 1e-9 * np.linalg.norm(A)


def test_lyapunov_agreement(rng):
    py, cy = BACKENDS["python"], BACKENDS["compiled"]
    for _ in range(20):
        A, D = _system(rng)
        if py.spectral_abscissa(A) >= 0:
            continue
        V1, r1 = py.lyap_solve(A, D)
        V2, r2 = cy.lyap_solve(A, D)
        assert r1 <= 1e-12 and r2 <= 1e-12
        scale = np.max(np.abs(V1))
        assert np.max(np.abs(V1 - V2)) <= 1e-9 * scale


def test_symplectic_moduli_agreement(rng):
    py, cy = BACKENDS["python"], BACKENDS["compiled"]
    for _ in range(20):
        M = rng.normal(size=(4, 4))
        M = M @ M.T + 0.5 * np.eye(4)
        a = np.sort(py.abs_eigs_J(M))
        b = np.sort(cy.abs_eigs_J(M))
        assert np.allclose(a, b, rtol=1e-10, atol=1e-12)


def test_evaluate_point_agreement(rng):
    py, cy = BACKENDS["python"], BACKENDS["compiled"]
    pairs = np.array([[3, 5], [0, 1], [2, 1], [2, 4]], dtype=np.int64)
    args = (1e-9, 1e-10, 1e-13, 3)
    n_stable = 0
    for _ in range(30):
        A, D = _system(rng)
        d = np.ascontiguousarray(np.diag(D))
        s1, en1, r1, nu1 = py.evaluate_point(A, d, pairs, *args)
        s2, en2, r2, nu2 = cy.evaluate_point(A, d, pairs, *args)
        assert s1 == s2
        if s1 == 0:
            n_stable += 1
            assert np.max(np.abs(en1 - en2)) <= 1e-9
            assert abs(nu1 - nu2) <= 1e-9
            assert r1 <= 1e-10 and r2 <= 1e-10
    assert n_stable >= 5


def test_unstable_and_nan_paths_agree():
    py, cy = BACKENDS["python"], BACKENDS["compiled"]
    pairs = np.array([[0, 1]], dtype=np.int64)
    args = (1e-9, 1e-10, 1e-13, 3)
    A = np.diag([1.0] + [-1.0] * 11).copy()
    d = np.ones(12)
    assert py.evaluate_point(A, d, pairs, *args)[0] == 1
    assert cy.evaluate_point(A, d, pairs, *args)[0] == 1
    A_bad = A.copy()
    A_bad[0, 0] = np.nan
    assert py.evaluate_point(A_bad, d, pairs, *args)[0] == 2
    assert cy.evaluate_point(A_bad, d, pairs, *args)[0] == 2
