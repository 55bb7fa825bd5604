"""Symmetric eigendecomposition and the full / balanced positivity tests."""

import logging
from typing import Optional, Union

import numpy as np

from mfc.core.errors import ConvergenceError, DimensionMismatchError, InfiniteEntryError, NotSymmetricError
from mfc.core.models import EigenResult, KernelMatrix, PDReport, frozen_array

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
MAX_SWEEPS = 100

MatrixLike = Union[KernelMatrix, np.ndarray]


def _finite_square(c: MatrixLike) -> np.ndarray:
    arr = np.array(c.entries if isinstance(c, KernelMatrix) else c, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InfiniteEntryError("matrix has infinite entries; cannot classify")
    return arr


def effective_tol(c: np.ndarray, tol: float) -> float:
    """Absolute threshold: tol relative to the largest entry."""
    return tol * (1.0 + (float(np.max(np.abs(c))) if c.size else 0.0))


def canonical_sign(v: np.ndarray) -> np.ndarray:
    nz = np.nonzero(np.abs(v) > 1e-12)[0]
    if nz.size and v[nz[0]] < 0:
        return -v
    return v


def symmetric_eigen(m: MatrixLike) -> EigenResult:
    """Cyclic Jacobi eigensolver; eigenvalues ascending, eigenvectors as columns."""
    a = _finite_square(m)
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    if np.any(np.abs(a - a.T) > 1e-12 * (1.0 + scale)):
        raise NotSymmetricError("symmetric_eigen needs a symmetric matrix")
    a = 0.5 * (a + a.T)
    k = a.shape[0]
    v = np.eye(k)
    threshold = 1e-12 * float(np.linalg.norm(a))

    sweeps = 0
    while True:
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= threshold:
            break
        if sweeps >= MAX_SWEEPS:
            raise ConvergenceError(f"Jacobi did not converge in {MAX_SWEEPS} sweeps (off-diagonal norm {off:g})")
        sweeps += 1
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                cos = 1.0 / np.sqrt(t * t + 1.0)
                sin = t * cos

                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = cos * col_p - sin * col_q
                a[:, q] = sin * col_p + cos * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = cos * row_p - sin * row_q
                a[q, :] = sin * row_p + cos * row_q
                a[p, q] = a[q, p] = 0.0

                vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = cos * vec_p - sin * vec_q
                v[:, q] = sin * vec_p + cos * vec_q

    logger.debug("Jacobi converged on %dx%d after %d sweeps", k, k, sweeps)
    evals = np.diag(a).copy()
    order = np.argsort(evals, kind="stable")
    vecs = np.column_stack([canonical_sign(v[:, i]) for i in order]) if k else v
    return EigenResult(eigenvalues=frozen_array(evals[order]), eigenvectors=frozen_array(vecs), sweeps=sweeps)


def verdict_for(min_eig: float, eff_tol: float) -> str:
    """Three-way verdict from the smallest eigenvalue and an effective tolerance."""
    if min_eig > eff_tol:
        return "positive_definite"
    if min_eig >= -eff_tol:
        return "positive_semidefinite"
    return "not_positive"


def _classify(mode: str, min_eig: float, eff_tol: float, witness: Optional[np.ndarray], tol: float) -> PDReport:
    verdict = verdict_for(min_eig, eff_tol)
    return PDReport(
        mode=mode,
        min_eigenvalue=float(min_eig),
        verdict=verdict,
        witness=frozen_array(witness) if verdict == "not_positive" else None,
        tol=tol,
    )


def pd_test(c: MatrixLike, tol: float = DEFAULT_TOL) -> PDReport:
    """Positive definiteness on the whole space (convexity of K on finite measures)."""
    arr = _finite_square(c)
    eig = symmetric_eigen(arr)
    return _classify("full", float(eig.eigenvalues[0]), effective_tol(arr, tol), eig.eigenvectors[:, 0], tol)


def balanced_basis(m: int) -> np.ndarray:
    """Helmert basis of {a : sum(a) = 0}, shape m x (m - 1), orthonormal columns."""
    b = np.zeros((m, max(m - 1, 0)))
    for k in range(1, m):
        norm = np.sqrt(k * (k + 1.0))
        b[:k, k - 1] = 1.0 / norm
        b[k, k - 1] = -k / norm
    return b


def reduced_form(c: MatrixLike) -> np.ndarray:
    arr = _finite_square(c)
    b = balanced_basis(arr.shape[0])
    r = b.T @ arr @ b
    return 0.5 * (r + r.T)


def unit_zero_sum(d: np.ndarray) -> np.ndarray:
    d = d - np.mean(d)
    return d / np.linalg.norm(d)


def balanced_pd_test(c: MatrixLike, tol: float = DEFAULT_TOL) -> PDReport:
    """Positive definiteness restricted to zero-sum coefficient vectors (convexity of K on P(X))."""
    arr = _finite_square(c)
    m = arr.shape[0]
    if m == 1:
        # no nonzero zero-sum vector exists
        return PDReport(mode="balanced", min_eigenvalue=float("inf"), verdict="positive_definite", witness=None, tol=tol)
    b = balanced_basis(m)
    eig = symmetric_eigen(reduced_form(arr))
    witness = canonical_sign(unit_zero_sum(b @ eig.eigenvectors[:, 0]))
    return _classify("balanced", float(eig.eigenvalues[0]), effective_tol(arr, tol), witness, tol)


def balanced_spectrum(c: MatrixLike) -> EigenResult:
    """Eigen-decomposition of the reduced form with eigenvectors mapped back to length m."""
    arr = _finite_square(c)
    m = arr.shape[0]
    if m == 1:
        return EigenResult(eigenvalues=frozen_array(np.zeros(0)), eigenvectors=frozen_array(np.zeros((1, 0))))
    eig = symmetric_eigen(reduced_form(arr))
    vecs = balanced_basis(m) @ eig.eigenvectors
    return EigenResult(eigenvalues=eig.eigenvalues, eigenvectors=frozen_array(vecs), sweeps=eig.sweeps)


def witness_direction(c: MatrixLike, tol: float = DEFAULT_TOL) -> Optional[np.ndarray]:
    report = balanced_pd_test(c, tol)
    if report.witness is None:
        return None
    return np.array(report.witness)
