"""Discrete kernels: construction from recipes, Schur products, symmetrization and shifts."""

import logging
from typing import Optional, Union

import numpy as np

from mfc.core.basis import evaluate_profile
from mfc.core.errors import DimensionMismatchError, InfiniteEntryError, KernelSpecError, NegativeEntryError
from mfc.core.models import (
    Circulant,
    DiscreteSpace,
    Expansion,
    Explicit,
    Gaussian,
    InnerProduct,
    KernelMatrix,
    KernelSpec,
    LogKernel,
    PowerLaw,
    Radial,
)

logger = logging.getLogger(__name__)

MatrixLike = Union[KernelMatrix, np.ndarray]


def circulant_space(n: int) -> DiscreteSpace:
    """The cyclic group Z_n as points 0..n-1 on the line."""
    return DiscreteSpace(np.arange(n, dtype=float).reshape(-1, 1))


def build_kernel(space: DiscreteSpace, spec: KernelSpec) -> KernelMatrix:
    m = space.m
    off = ~np.eye(m, dtype=bool)

    if isinstance(spec, PowerLaw):
        dist = space.distances()
        c = np.full((m, m), spec.diag.diagonal())
        c[off] = dist[off] ** (-spec.s)
    elif isinstance(spec, LogKernel):
        dist = space.distances()
        c = np.full((m, m), spec.diag.diagonal())
        c[off] = np.abs(np.log(dist[off]))
    elif isinstance(spec, Gaussian):
        dist = space.distances()
        c = np.exp(-(dist / spec.width) ** 2)
    elif isinstance(spec, Radial):
        c = _radial_lookup(space.distances(), spec)
    elif isinstance(spec, Circulant):
        c = _circulant(space, spec)
    elif isinstance(spec, Expansion):
        c = _mercer(space, spec)
    elif isinstance(spec, InnerProduct):
        c = _inner_product(space, spec)
    elif isinstance(spec, Explicit):
        c = np.array(spec.matrix, dtype=float)
        if c.shape != (m, m):
            raise DimensionMismatchError(f"explicit kernel has shape {c.shape}, space has {m} points")
    else:
        raise KernelSpecError(f"unknown kernel recipe: {type(spec).__name__}")

    logger.debug("built %s kernel on %d points", type(spec).__name__, m)
    return KernelMatrix(c)


def _radial_lookup(dist: np.ndarray, spec: Radial) -> np.ndarray:
    if not spec.profile:
        raise KernelSpecError("radial profile is empty")
    keys = np.array(sorted(spec.profile), dtype=float)
    vals = np.array([spec.profile[k] for k in sorted(spec.profile)], dtype=float)
    out = np.empty_like(dist)
    for idx, r in np.ndenumerate(dist):
        hit = np.nonzero(np.isclose(keys, r, rtol=1e-12, atol=1e-12))[0]
        if hit.size == 0:
            raise KernelSpecError(f"radial profile has no value at distance {r!r}")
        out[idx] = vals[hit[0]]
    return out


def _circulant(space: DiscreteSpace, spec: Circulant) -> np.ndarray:
    n = len(spec.profile)
    if space.m != n:
        raise DimensionMismatchError(f"circulant profile has length {n}, space has {space.m} points")
    if space.d != 1 or not np.array_equal(space.points[:, 0], np.arange(n, dtype=float)):
        raise KernelSpecError("circulant kernels need the points 0..n-1 of the cyclic group")
    prof = np.array(spec.profile)
    idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    return prof[idx]


def _mercer(space: DiscreteSpace, spec: Expansion) -> np.ndarray:
    psi = spec.basis
    if psi.shape[1] != space.m:
        raise DimensionMismatchError(f"basis functions have {psi.shape[1]} values, space has {space.m} points")
    c = psi.T @ (spec.coeffs[:, None] * psi)
    c = 0.5 * (c + c.T)
    # rounding may push zero entries slightly negative
    scale = 1.0 + float(np.max(np.abs(c)))
    c[(c < 0) & (c > -1e-12 * scale)] = 0.0
    return c


def _inner_product(space: DiscreteSpace, spec: InnerProduct) -> np.ndarray:
    norms = np.linalg.norm(space.points, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-9):
        raise KernelSpecError("inner-product kernels need unit-norm points")
    gram = np.clip(space.points @ space.points.T, -1.0, 1.0)
    return evaluate_profile(spec.profile, gram)


def schur_product(a: KernelMatrix, b: KernelMatrix) -> KernelMatrix:
    if a.m != b.m:
        raise DimensionMismatchError(f"cannot multiply kernels of sizes {a.m} and {b.m}")
    if not (a.is_finite and b.is_finite):
        raise InfiniteEntryError("Schur products need finite kernels")
    return KernelMatrix(a.entries * b.entries)


def symmetrize(c: MatrixLike) -> KernelMatrix:
    """(C + C^T) / 2 for a square nonnegative cost matrix."""
    arr = np.array(c.entries if isinstance(c, KernelMatrix) else c, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatchError(f"symmetrize needs a square matrix, got shape {arr.shape}")
    if np.any(arr < 0):
        raise NegativeEntryError("symmetrize needs nonnegative entries")
    return KernelMatrix(0.5 * (arr + arr.T))


def shift_kernel(c: MatrixLike, gamma: Optional[float] = None) -> KernelMatrix:
    """Add gamma times the all-ones matrix.

    Without gamma, the smallest shift making every entry nonnegative is used, which turns a cost
    bounded below into an admissible one with the same balanced quadratic form.
    """
    arr = np.array(c.entries if isinstance(c, KernelMatrix) else c, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatchError(f"shift_kernel needs a square matrix, got shape {arr.shape}")
    if np.any(arr == -np.inf) or np.any(np.isnan(arr)):
        raise KernelSpecError("costs must be bounded below")
    finite = np.isfinite(arr)
    if gamma is None:
        low = float(np.min(arr[finite])) if finite.any() else 0.0
        gamma = max(0.0, -low)
    out = arr.copy()
    out[finite] = arr[finite] + gamma
    if np.any(out < 0):
        raise NegativeEntryError(f"shift by {gamma!r} leaves negative entries")
    return KernelMatrix(out)
