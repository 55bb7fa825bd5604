"""The quadratic energy K(Q) = sum_ij c_ij Q_i Q_j, its bilinear form and mixture identities.

Extended arithmetic follows Lebesgue integration of a nonnegative cost: inf * 0 = 0.
"""

import logging
import math
from typing import Union

import numpy as np

from mfc.core.errors import DimensionMismatchError, InfiniteEnergyError
from mfc.core.models import KernelMatrix, Mixture, ProbVector

logger = logging.getLogger(__name__)

INF = float("inf")

MatrixLike = Union[KernelMatrix, np.ndarray]


def _entries(c: MatrixLike) -> np.ndarray:
    return c.entries if isinstance(c, KernelMatrix) else np.asarray(c, dtype=float)


def _pair_weights(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Symmetrized weights w_ij = u_i v_j + u_j v_i on the strict upper triangle, u_i v_i on the diagonal."""
    outer = np.outer(u, v)
    w = np.triu(outer + outer.T, 1)
    w[np.diag_indices_from(w)] = np.diag(outer)
    return w


def accumulate_upper(c: np.ndarray, w: np.ndarray) -> float:
    """sum of w_ij c_ij over the upper triangle, with inf * 0 = 0."""
    upper = np.triu(np.ones_like(c, dtype=bool))
    active = upper & (w != 0)
    inf_hits = active & np.isinf(c)
    if inf_hits.any():
        signs = np.sign(w[inf_hits])
        if np.all(signs > 0):
            return INF
        raise InfiniteEnergyError("signed combination meets an infinite cost entry")
    # upper triangle, row-major order, compensated
    return math.fsum((w[active] * c[active]).tolist())


def quadratic(c: MatrixLike, v) -> float:
    """K evaluated on an arbitrary real vector."""
    arr = _entries(c)
    vec = np.asarray(v, dtype=float)
    if vec.shape != (arr.shape[0],):
        raise DimensionMismatchError(f"vector of length {vec.size} does not match kernel size {arr.shape[0]}")
    return accumulate_upper(arr, _pair_weights(vec, vec))


def cross(c: MatrixLike, u, v) -> float:
    """E(u, v) = sum_ij c_ij u_i v_j on arbitrary real vectors."""
    arr = _entries(c)
    a = np.asarray(u, dtype=float)
    b = np.asarray(v, dtype=float)
    if a.shape != (arr.shape[0],) or b.shape != (arr.shape[0],):
        raise DimensionMismatchError("vector lengths do not match the kernel size")
    return accumulate_upper(arr, _pair_weights(a, b))


def _check(c: KernelMatrix, q: ProbVector) -> None:
    if c.m != q.m:
        raise DimensionMismatchError(f"measure on {q.m} points does not match kernel size {c.m}")


def energy(c: KernelMatrix, q: ProbVector) -> float:
    _check(c, q)
    return quadratic(c, q.weights)


def bilinear(c: KernelMatrix, q: ProbVector, r: ProbVector) -> float:
    _check(c, q)
    _check(c, r)
    return cross(c, q.weights, r.weights)


def mixture_energy(c: KernelMatrix, nu: Mixture) -> float:
    """sum_k nu_k K(Q_k): the infinite-body energy of the mixture of product states."""
    values = [energy(c, atom.q) for atom in nu.atoms]
    if any(math.isinf(v) for v in values):
        return INF
    return math.fsum(atom.weight * v for atom, v in zip(nu.atoms, values))


def barycenter(nu: Mixture) -> ProbVector:
    acc = np.zeros(nu.m)
    for atom in nu.atoms:
        acc += atom.weight * atom.q.weights
    acc = np.clip(acc, 0.0, None)
    return ProbVector(acc / acc.sum())


def convexity_gap(c: KernelMatrix, nu: Mixture) -> float:
    """Jensen gap: mixture energy minus the energy of the barycenter."""
    total = mixture_energy(c, nu)
    if math.isinf(total):
        raise InfiniteEnergyError("convexity gap needs a finite mixture energy")
    center = energy(c, barycenter(nu))
    if math.isinf(center):
        return -INF
    return total - center


def pairwise_gap(c: KernelMatrix, nu: Mixture) -> float:
    """Polarized Jensen gap 1/2 sum_kl nu_k nu_l K(Q_k - Q_l), equal to `convexity_gap`."""
    total = mixture_energy(c, nu)
    if math.isinf(total):
        raise InfiniteEnergyError("pairwise gap needs a finite mixture energy")
    if math.isinf(energy(c, barycenter(nu))):
        return -INF
    # every atom lives on supp(mu), where the kernel is finite
    terms = [a.weight * b.weight * quadratic(c, a.q.weights - b.q.weights) for a in nu.atoms for b in nu.atoms]
    return 0.5 * math.fsum(terms)
