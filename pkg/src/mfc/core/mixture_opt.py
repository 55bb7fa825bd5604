"""The de Finetti-reduced infinite-body problem.

Minimize sum_k nu_k K(Q_k) over mixtures nu of probability vectors with barycenter mu. The
product state is nu = delta_mu; it is optimal for every mu exactly when K is convex on the
simplex, i.e. when the kernel is balanced positive definite.
"""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from mfc.core.energy import energy, mixture_energy
from mfc.core.errors import (
    DimensionMismatchError,
    InfiniteEnergyError,
    LpFailureError,
    OffGridError,
    WitnessError,
)
from mfc.core.lp_core import solve_lp
from mfc.core.models import KernelMatrix, LinearProgram, Mixture, MixtureAtom, ProbVector, Verdict
from mfc.core.nbody import multiset_states
from mfc.core.spectral import (
    DEFAULT_TOL,
    balanced_basis,
    canonical_sign,
    effective_tol,
    reduced_form,
    symmetric_eigen,
    unit_zero_sum,
)

logger = logging.getLogger(__name__)

GRID_CAP = 1_000_000
DEFAULT_RESOLUTION = 8
SUPPORT_TOL = 1e-12


def simplex_grid(m: int, r: int, cap: int = GRID_CAP) -> List[ProbVector]:
    """Probability vectors with entries in {0, 1/r, ..., 1}, descending lexicographic order."""
    if m < 1 or r < 1:
        raise DimensionMismatchError("need m >= 1 and r >= 1")
    return [ProbVector(k / r) for k in multiset_states(m, r, cap).astype(float)]


def check_on_grid(mu: ProbVector, r: int) -> None:
    scaled = mu.weights * r
    if np.any(np.abs(scaled - np.round(scaled)) > 1e-9):
        raise OffGridError(f"marginal {mu.weights.tolist()} is not on the 1/{r} grid")


def solve_mixture_lp(
    c: KernelMatrix, mu: ProbVector, r: int = DEFAULT_RESOLUTION, cap: int = GRID_CAP
) -> Tuple[Mixture, float]:
    if c.m != mu.m:
        raise DimensionMismatchError(f"marginal on {mu.m} points does not match kernel size {c.m}")
    check_on_grid(mu, r)
    if math.isinf(energy(c, mu)):
        raise InfiniteEnergyError("K(mu) is infinite")

    grid = simplex_grid(c.m, r, cap)
    values = np.array([energy(c, q) for q in grid])
    usable = np.nonzero(np.isfinite(values))[0]
    logger.debug("grid m=%d r=%d: %d atoms, %d with finite energy", c.m, r, len(grid), usable.size)

    atoms = np.array([grid[i].weights for i in usable])
    a = np.vstack([atoms.T, np.ones((1, usable.size))])
    b = np.append(mu.weights, 1.0)
    sol = solve_lp(LinearProgram(cost=values[usable], eq_matrix=a, eq_rhs=b))
    if not sol.is_optimal:
        # delta_mu is always feasible, so anything else is a solver failure
        raise LpFailureError(f"mixture LP ended with status '{sol.status}'")

    support = np.nonzero(sol.x > SUPPORT_TOL)[0]
    total = float(sol.x[support].sum())
    nu = Mixture(tuple(MixtureAtom(float(sol.x[i]) / total, grid[usable[i]]) for i in support))
    return nu, sol.objective


def max_feasible_eps(mu: ProbVector, d: np.ndarray) -> float:
    moving = np.abs(d) > 1e-15
    if not moving.any():
        return 0.0
    return float(np.min(mu.weights[moving] / np.abs(d[moving])))


def two_point_witness(
    c: KernelMatrix, mu: ProbVector, d, eps: Optional[float] = None, shrink: bool = False
) -> Mixture:
    """1/2 delta_{mu + eps d} + 1/2 delta_{mu - eps d}; its convexity gap is eps^2 d^T C d.

    With `eps` omitted the largest feasible step is used; `shrink` clips an oversized step to it.
    """
    direction = np.asarray(d, dtype=float)
    if direction.shape != (c.m,) or mu.m != c.m:
        raise DimensionMismatchError("direction, marginal and kernel sizes differ")
    if abs(direction.sum()) > 1e-10 * (1.0 + np.abs(direction).sum()):
        raise WitnessError("witness direction must sum to zero")
    direction = direction - direction.mean()

    limit = max_feasible_eps(mu, direction)
    if limit <= 0.0:
        raise WitnessError("no feasible step: mu sits on a face the direction leaves")
    if eps is None:
        eps = limit
    elif eps <= 0:
        raise WitnessError("eps must be positive")
    elif eps > limit * (1.0 + 1e-12):
        if not shrink:
            raise WitnessError(f"eps={eps!r} leaves the simplex; largest feasible value is {limit!r}")
        eps = limit

    plus = mu.weights + eps * direction
    minus = mu.weights - eps * direction
    plus[(plus < 0) & (plus > -1e-12)] = 0.0
    minus[(minus < 0) & (minus > -1e-12)] = 0.0
    return Mixture((MixtureAtom(0.5, ProbVector(plus)), MixtureAtom(0.5, ProbVector(minus))))


def support_spectrum(c: KernelMatrix, mu: ProbVector) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Balanced spectrum of the kernel restricted to supp(mu): the directions mu can move along."""
    support = np.nonzero(mu.weights > 0)[0]
    sub = c.entries[np.ix_(support, support)]
    if support.size < 2:
        return support, np.zeros(0), np.zeros((c.m, 0))
    eig = symmetric_eigen(reduced_form(sub))
    vecs = np.zeros((c.m, support.size - 1))
    vecs[support, :] = balanced_basis(support.size) @ eig.eigenvectors
    return support, np.array(eig.eigenvalues), vecs


def decorrelation_verdict(
    c: KernelMatrix,
    mu: ProbVector,
    r: int = DEFAULT_RESOLUTION,
    tol: float = DEFAULT_TOL,
    cap: int = GRID_CAP,
) -> Verdict:
    product = energy(c, mu)
    if math.isinf(product):
        raise InfiniteEnergyError("K(mu) is infinite; the product state has infinite energy")
    lp_mix, lp_value = solve_mixture_lp(c, mu, r, cap)
    finite_entries = c.entries[np.isfinite(c.entries)]
    eff = effective_tol(finite_entries, tol)

    witness: Optional[Mixture] = None
    unique_flag = "undetermined"
    if c.is_finite:
        full = symmetric_eigen(reduced_form(c)).eigenvalues if c.m > 1 else np.zeros(0)
        _, local, directions = support_spectrum(c, mu)
        if local.size and local[0] < -eff:
            d = canonical_sign(unit_zero_sum(directions[:, 0]))
            candidate = two_point_witness(c, mu, d)
            if mixture_energy(c, candidate) < product - eff:
                witness = candidate
        if full.size == 0 or full[0] > eff:
            unique_flag = "unique"
        elif np.any(np.abs(local) <= eff):
            unique_flag = "non_unique"
    else:
        logger.info("kernel has infinite entries; verdict relies on the grid LP only")

    if witness is None and lp_value < product - eff:
        witness = lp_mix

    best = lp_value
    if witness is not None:
        best = min(best, mixture_energy(c, witness))
    verdict = Verdict(
        decorrelated=witness is None,
        optimal_value=best,
        product_value=product,
        gap=best - product,
        witness=witness,
        unique_flag=unique_flag,
        lp_value=lp_value,
        resolution=r,
        tol=tol,
        lp_mixture=lp_mix,
    )
    logger.debug("verdict: decorrelated=%s gap=%.3g unique=%s", verdict.decorrelated, verdict.gap, unique_flag)
    return verdict
