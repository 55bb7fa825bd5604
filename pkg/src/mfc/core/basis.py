"""Ultraspherical expansions on the sphere and the cyclic DFT criterion.

Polynomials use the standard Gegenbauer normalization C_n^lam. Coefficients against any other
positive normalization have the same signs, which is all the positivity criterion looks at.
"""

import logging
import math
from typing import Optional, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.special import gammaln, roots_jacobi

from mfc.core.errors import KernelSpecError, QuadratureError
from mfc.core.models import ExpansionReport, SphereCheck, SphericalProfile, frozen_array
from mfc.core.spectral import pd_test

logger = logging.getLogger(__name__)

DEFAULT_QUADRATURE_ORDER = 128
DEFAULT_N_MAX = 16
RECONSTRUCTION_TOL = 1e-6

ArrayLike = Union[float, np.ndarray]


def _check_lambda(lam: float) -> None:
    if not (lam > 0 and math.isfinite(lam)):
        raise KernelSpecError(f"lambda must be positive, got {lam!r}")


def gegenbauer_table(lam: float, n_max: int, t: ArrayLike) -> np.ndarray:
    """Rows C_0^lam(t) .. C_{n_max}^lam(t) by the three-term recurrence."""
    _check_lambda(lam)
    if n_max < 0:
        raise KernelSpecError("polynomial degree must be >= 0")
    x = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(np.abs(x) > 1.0 + 1e-12):
        raise KernelSpecError("Gegenbauer arguments must lie in [-1, 1]")
    table = np.empty((n_max + 1, x.size))
    table[0] = 1.0
    if n_max >= 1:
        table[1] = 2.0 * lam * x
    for n in range(2, n_max + 1):
        table[n] = (2.0 * (n + lam - 1.0) * x * table[n - 1] - (n + 2.0 * lam - 2.0) * table[n - 2]) / n
    return table


def gegenbauer_eval(lam: float, n: int, t: ArrayLike) -> ArrayLike:
    values = gegenbauer_table(lam, n, t)[n]
    return float(values[0]) if np.ndim(t) == 0 else values


def rodrigues_eval(lam: float, n: int, t: ArrayLike) -> ArrayLike:
    """Ultraspherical polynomial from the Rodrigues formula, for lam - 1/2 a nonnegative integer.

    const * (1 - t^2)^(1/2 - lam) * d^n/dt^n (1 - t^2)^(n + lam - 1/2) with
    const = (-2)^n Gamma(n + lam) Gamma(n + 2 lam) / (n! Gamma(lam) Gamma(2n + 2 lam)).
    """
    _check_lambda(lam)
    k = lam - 0.5
    if abs(k - round(k)) > 1e-12 or k < -1e-12:
        raise KernelSpecError("Rodrigues evaluation needs lam - 1/2 to be a nonnegative integer")
    k = int(round(k))
    log_const = gammaln(n + lam) + gammaln(n + 2 * lam) - gammaln(n + 1) - gammaln(lam) - gammaln(2 * n + 2 * lam)
    const = (-1) ** n * 2.0**n * math.exp(log_const)

    one_minus = np.array([1.0, 0.0, -1.0])
    poly = P.polyder(P.polypow(one_minus, n + k), n) if n else P.polypow(one_minus, n + k)
    quotient, remainder = P.polydiv(poly, P.polypow(one_minus, k))
    if np.any(np.abs(remainder) > 1e-9 * (1.0 + np.max(np.abs(poly)))):
        raise QuadratureError("Rodrigues derivative is not divisible by the weight")
    values = const * P.polyval(np.asarray(t, dtype=float), quotient)
    return float(values) if np.ndim(t) == 0 else values


def evaluate_profile(profile: SphericalProfile, t: ArrayLike) -> np.ndarray:
    x = np.asarray(t, dtype=float)
    if profile.poly is not None:
        return P.polyval(x, profile.poly)
    if profile.nodes is not None:
        if profile.nodes[0] > -1.0 + 1e-12 or profile.nodes[-1] < 1.0 - 1e-12:
            raise KernelSpecError("profile table must cover [-1, 1] to be evaluated")
        return np.interp(x, profile.nodes, profile.values)
    return np.asarray(profile.func(x), dtype=float).reshape(x.shape)


def quadrature(lam: float, order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss nodes and weights for the weight (1 - t^2)^(lam - 1/2) on [-1, 1]."""
    _check_lambda(lam)
    if order < 1:
        raise QuadratureError("quadrature order must be >= 1")
    alpha = lam - 0.5
    nodes, weights = roots_jacobi(order, alpha, alpha)
    return np.asarray(nodes, dtype=float), np.asarray(weights, dtype=float)


def _classify(coeffs: np.ndarray, tol: float) -> Tuple[str, Optional[int]]:
    negative = np.nonzero(coeffs < -tol)[0]
    if negative.size:
        return "not_PD", int(negative[0])
    if np.all(coeffs > tol):
        return "strictly_PD_up_to_truncation", None
    return "PD_up_to_truncation", None


def expand_profile(
    profile: SphericalProfile,
    n_max: int = DEFAULT_N_MAX,
    quadrature_order: int = DEFAULT_QUADRATURE_ORDER,
    tol: float = 1e-9,
) -> ExpansionReport:
    """Coefficients a_n of l = sum_n a_n C_n^lam up to n_max, and the sign classification."""
    lam = profile.lam
    # Gauss with q nodes integrates degree 2q - 1 exactly; the norms need degree 2 n_max
    if quadrature_order <= n_max:
        raise QuadratureError(f"quadrature order {quadrature_order} cannot resolve degree {n_max}")
    nodes, weights = quadrature(lam, quadrature_order)
    ell = evaluate_profile(profile, nodes)
    table = gegenbauer_table(lam, n_max, nodes)
    norms = table**2 @ weights
    if np.any(norms <= 0):
        raise QuadratureError(f"quadrature order {quadrature_order} cannot resolve degree {n_max}")
    coeffs = (table * ell) @ weights / norms

    residual = None
    degree = profile.degree
    if degree is not None and degree <= n_max:
        residual = float(np.max(np.abs(coeffs @ table - ell)))
        logger.debug("reconstruction residual %.3g at order %d", residual, quadrature_order)
        if residual > RECONSTRUCTION_TOL:
            raise QuadratureError(
                f"quadrature order {quadrature_order} too low: reconstruction misses by {residual:.3g}"
            )

    scaled_tol = tol * (1.0 + float(np.max(np.abs(coeffs))))
    classification, first_negative = _classify(coeffs, scaled_tol)
    return ExpansionReport(
        coefficients=frozen_array(coeffs),
        n_max=n_max,
        classification=classification,
        first_negative=first_negative,
        lam=lam,
        quadrature_order=quadrature_order,
        tol=tol,
        reconstruction_residual=residual,
    )


def circulant_spectrum(profile) -> np.ndarray:
    """Real DFT l_hat_k = sum_j l_j cos(2 pi j k / n): the eigenvalues of the circulant kernel."""
    ell = np.atleast_1d(np.asarray(profile, dtype=float))
    n = ell.size
    if n < 1:
        raise KernelSpecError("circulant profile must be non-empty")
    if np.any(np.abs(ell[1:] - ell[1:][::-1]) > 1e-12):
        raise KernelSpecError("circulant profile is not symmetric (l_j != l_{n-j})")
    jk = np.outer(np.arange(n), np.arange(n)) % n
    return np.cos(2.0 * np.pi * jk / n) @ ell


def sphere_dimension(lam: float) -> int:
    """Ambient dimension d + 1 of the sphere S^d with lam = (d - 1) / 2."""
    d = 2.0 * lam + 1.0
    if abs(d - round(d)) > 1e-12:
        raise KernelSpecError(f"lambda={lam!r} does not correspond to a sphere S^d")
    return int(round(d)) + 1


def sample_sphere(count: int, dimension: int, rng: np.random.Generator) -> np.ndarray:
    x = rng.standard_normal((count, dimension))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def gram_matrix(points: np.ndarray, profile: SphericalProfile) -> np.ndarray:
    g = np.clip(points @ points.T, -1.0, 1.0)
    out = evaluate_profile(profile, g)
    return 0.5 * (out + out.T)


def sphere_check(
    profile: SphericalProfile, samples: int = 200, points: int = 40, seed: int = 0, tol: float = 1e-7
) -> SphereCheck:
    """Run pd_test on Gram matrices of the profile over seeded random point sets."""
    dim = sphere_dimension(profile.lam)
    rng = np.random.default_rng(seed)
    worst = math.inf
    failures = 0
    for _ in range(samples):
        report = pd_test(gram_matrix(sample_sphere(points, dim, rng), profile), tol)
        worst = min(worst, report.min_eigenvalue)
        failures += report.verdict == "not_positive"
    return SphereCheck(samples=samples, points=points, dimension=dim, seed=seed, min_eigenvalue=worst, failures=failures)
