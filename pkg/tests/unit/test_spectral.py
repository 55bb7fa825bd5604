import math

import numpy as np
import pytest

from mfc.core.energy import quadratic
from mfc.core.errors import ConvergenceError, InfiniteEntryError, NotSymmetricError
from mfc.core.models import KernelMatrix
from mfc.core.spectral import (
    balanced_basis,
    balanced_pd_test,
    balanced_spectrum,
    pd_test,
    reduced_form,
    symmetric_eigen,
    witness_direction,
)

SQUARED_DISTANCE = KernelMatrix([[0.0, 1.0], [1.0, 0.0]])
SHIFTED = KernelMatrix([[4.0, 3.0, 0.0], [3.0, 4.0, 3.0], [0.0, 3.0, 4.0]])
R = 1 / math.sqrt(2)


def test_symmetric_eigen_matches_known_spectrum():
    eig = symmetric_eigen(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert eig.eigenvalues.tolist() == pytest.approx([1.0, 3.0], abs=1e-12)
    # columns, canonical sign: first nonzero entry positive
    assert eig.eigenvectors[:, 0].tolist() == pytest.approx([R, -R], abs=1e-12)
    assert eig.eigenvectors[:, 1].tolist() == pytest.approx([R, R], abs=1e-12)


def test_symmetric_eigen_reconstructs(rng):
    a = rng.standard_normal((7, 7))
    a = a + a.T
    eig = symmetric_eigen(a)
    v, lam = eig.eigenvectors, eig.eigenvalues
    assert np.allclose(v @ np.diag(lam) @ v.T, a, atol=1e-10)
    assert np.allclose(v.T @ v, np.eye(7), atol=1e-10)
    assert np.all(np.diff(lam) >= 0)
    assert eig.sweeps <= 100


def test_symmetric_eigen_rejects_bad_input():
    with pytest.raises(NotSymmetricError):
        symmetric_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(InfiniteEntryError):
        symmetric_eigen(np.array([[math.inf, 0.0], [0.0, 1.0]]))


def test_symmetric_eigen_sweep_cap(monkeypatch):
    import mfc.core.spectral as spectral

    monkeypatch.setattr(spectral, "MAX_SWEEPS", 0)
    with pytest.raises(ConvergenceError):
        symmetric_eigen(np.array([[2.0, 1.0], [1.0, 2.0]]))


def test_squared_distance_kernel_is_not_positive_anywhere():
    full = pd_test(SQUARED_DISTANCE)
    assert full.verdict == "not_positive"
    assert full.min_eigenvalue == pytest.approx(-1.0)
    assert full.witness.tolist() == pytest.approx([R, -R])

    balanced = balanced_pd_test(SQUARED_DISTANCE)
    assert balanced.mode == "balanced"
    assert balanced.verdict == "not_positive"
    assert balanced.min_eigenvalue == pytest.approx(-1.0)
    assert balanced.witness.tolist() == pytest.approx([R, -R])
    assert not balanced.is_positive


def test_identity_and_gaussian_are_positive_definite():
    for c in (KernelMatrix(np.eye(2)), KernelMatrix([[1.0, math.exp(-1)], [math.exp(-1), 1.0]])):
        assert pd_test(c).verdict == "positive_definite"
        assert balanced_pd_test(c).verdict == "positive_definite"
        assert balanced_pd_test(c).witness is None


def test_shifted_kernel_balanced_semidefinite_but_not_positive():
    assert pd_test(SHIFTED).verdict == "not_positive"
    assert pd_test(SHIFTED).min_eigenvalue == pytest.approx(4 - 3 * math.sqrt(2))
    report = balanced_pd_test(SHIFTED)
    assert report.verdict == "positive_semidefinite"
    assert report.witness is None

    spec = balanced_spectrum(SHIFTED)
    assert spec.eigenvalues.tolist() == pytest.approx([0.0, 4.0], abs=1e-10)
    zero_dir = spec.eigenvectors[:, 0]
    expected = np.array([1.0, -2.0, 1.0]) / math.sqrt(6)
    assert abs(abs(zero_dir @ expected) - 1.0) < 1e-10


def test_balanced_spectrum_agrees_with_direct_quadratic_form():
    # independent check: evaluate the quadratic form on each Helmert basis vector
    b = balanced_basis(3)
    direct = np.array([[quadratic(SHIFTED, b[:, i] + b[:, j]) - quadratic(SHIFTED, b[:, i]) - quadratic(SHIFTED, b[:, j])
                        for j in range(2)] for i in range(2)]) / 2.0
    assert np.allclose(direct, reduced_form(SHIFTED), atol=1e-12)


def test_helmert_basis_is_orthonormal_and_zero_sum():
    for m in (1, 2, 5, 9):
        b = balanced_basis(m)
        assert b.shape == (m, m - 1)
        assert np.allclose(b.T @ b, np.eye(m - 1))
        assert np.allclose(b.sum(axis=0), 0.0)


def test_single_point_is_vacuously_balanced_pd():
    report = balanced_pd_test(KernelMatrix([[3.0]]))
    assert report.verdict == "positive_definite"
    assert math.isinf(report.min_eigenvalue)
    assert witness_direction(KernelMatrix([[3.0]])) is None


def test_all_zero_kernel_is_semidefinite():
    c = KernelMatrix(np.zeros((3, 3)))
    assert pd_test(c).verdict == "positive_semidefinite"
    assert balanced_pd_test(c).verdict == "positive_semidefinite"


def test_witness_direction_is_unit_and_zero_sum():
    d = witness_direction(SQUARED_DISTANCE)
    assert abs(d.sum()) < 1e-12
    assert np.linalg.norm(d) == pytest.approx(1.0)
    assert quadratic(SQUARED_DISTANCE, d) < 0


def test_balanced_verdict_matches_sampled_zero_sum_minimum(rng):
    # 4x4 nonnegative kernels: the sampled minimum over unit zero-sum vectors tracks the verdict
    samples = rng.standard_normal((100_000, 4))
    zero_sum = samples - samples.mean(axis=1, keepdims=True)
    zero_sum /= np.linalg.norm(zero_sum, axis=1, keepdims=True)
    unit = samples / np.linalg.norm(samples, axis=1, keepdims=True)

    checked = 0
    for _ in range(200):
        if checked >= 50:
            break
        a = rng.random((4, 4))
        c = KernelMatrix(a + a.T)
        q_bal = np.einsum("ij,jk,ik->i", zero_sum, c.entries, zero_sum).min()
        q_full = np.einsum("ij,jk,ik->i", unit, c.entries, unit).min()

        bal = balanced_pd_test(c)
        full = pd_test(c)
        # Rayleigh quotients never undercut the smallest eigenvalue
        assert q_bal >= bal.min_eigenvalue - 1e-9
        assert q_full >= full.min_eigenvalue - 1e-9
        if abs(bal.min_eigenvalue) > 1e-2:
            assert (q_bal < 0) == (bal.verdict == "not_positive")
            checked += 1
        if abs(full.min_eigenvalue) > 5e-2:
            assert (q_full < 0) == (full.verdict == "not_positive")
    assert checked >= 50
