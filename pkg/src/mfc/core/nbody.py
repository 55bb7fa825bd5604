"""Finite-N exchangeable couplings in orbit form.

A symmetric N-body state on m points is a distribution over count vectors k (k_a bodies at
point a, sum k_a = N); the full m^N tensor is never formed.
"""

import logging
import math
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from mfc.core.energy import accumulate_upper, energy, mixture_energy
from mfc.core.errors import CapOverflowError, DimensionMismatchError, InfiniteEnergyError, LpFailureError
from mfc.core.lp_core import solve_lp
from mfc.core.models import KernelMatrix, LinearProgram, Mixture, ProbVector, SymmetricCoupling

logger = logging.getLogger(__name__)

STATE_CAP = 1_000_000
N_CAP = 12


def _compositions(m: int, total: int) -> Iterator[Tuple[int, ...]]:
    if m == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(m - 1, total - first):
            yield (first,) + rest


def multiset_states(m: int, n: int, cap: int = STATE_CAP) -> np.ndarray:
    """All count vectors of length m summing to n, in descending lexicographic order."""
    if m < 1 or n < 0:
        raise DimensionMismatchError("need m >= 1 and n >= 0")
    count = math.comb(m + n - 1, n)
    if count > cap:
        raise CapOverflowError(f"{count} states for m={m}, N={n} exceed the cap of {cap}")
    return np.array(list(_compositions(m, n)), dtype=np.int64).reshape(count, m)


def _multinomial(n: int, k: Sequence[int]) -> int:
    out = math.factorial(n)
    for part in k:
        out //= math.factorial(part)
    return out


def product_coupling(q: ProbVector, n: int, cap: int = STATE_CAP) -> SymmetricCoupling:
    """Q^{(x)N} in orbit form: weight(k) = multinomial(N; k) prod_a Q_a^k_a."""
    if n < 1:
        raise DimensionMismatchError("N must be at least 1")
    states = multiset_states(q.m, n, cap)
    w = np.array(
        [_multinomial(n, k) * math.prod(float(qa) ** int(ka) for qa, ka in zip(q.weights, k)) for k in states.tolist()]
    )
    return SymmetricCoupling(N=n, m=q.m, states=states, weights=w)


def mixture_coupling(nu: Mixture, n: int, cap: int = STATE_CAP) -> SymmetricCoupling:
    """sum_k nu_k Q_k^{(x)N}: the N-body projection of a de Finetti state."""
    parts = [product_coupling(atom.q, n, cap) for atom in nu.atoms]
    w = sum(atom.weight * part.weights for atom, part in zip(nu.atoms, parts))
    return SymmetricCoupling(N=n, m=nu.m, states=parts[0].states, weights=w)


def marginal(gamma: SymmetricCoupling) -> ProbVector:
    mu = gamma.states.T.astype(float) @ gamma.weights / gamma.N
    mu = np.clip(mu, 0.0, None)
    return ProbVector(mu / mu.sum())


def reduce_coupling(gamma: SymmetricCoupling) -> SymmetricCoupling:
    """Law of the first N - 1 bodies: remove one body uniformly at random."""
    if gamma.N < 2:
        raise DimensionMismatchError("cannot reduce a one-body coupling")
    target = multiset_states(gamma.m, gamma.N - 1, cap=len(gamma.states))
    index: Dict[Tuple[int, ...], int] = {tuple(k): i for i, k in enumerate(target.tolist())}
    w = np.zeros(len(target))
    for k, weight in zip(gamma.states.tolist(), gamma.weights):
        for a, ka in enumerate(k):
            if ka:
                smaller = list(k)
                smaller[a] -= 1
                w[index[tuple(smaller)]] += weight * ka / gamma.N
    return SymmetricCoupling(N=gamma.N - 1, m=gamma.m, states=target, weights=w)


def state_energies(c: KernelMatrix, states: np.ndarray) -> np.ndarray:
    """Average pair cost over the N(N-1) ordered pairs of distinct bodies, per state."""
    n = int(states[0].sum())
    if n < 2:
        raise DimensionMismatchError("pair energies need N >= 2")
    out = np.empty(len(states))
    for i, k in enumerate(states.astype(float)):
        w = np.triu(2.0 * np.outer(k, k), 1)
        w[np.diag_indices_from(w)] = k * (k - 1.0)
        out[i] = accumulate_upper(c.entries, w) / (n * (n - 1))
    return out


def pair_energy(c: KernelMatrix, gamma: SymmetricCoupling) -> float:
    if gamma.N < 2:
        raise DimensionMismatchError("pair energies need N >= 2")
    if c.m != gamma.m:
        raise DimensionMismatchError(f"coupling on {gamma.m} points does not match kernel size {c.m}")
    e = state_energies(c, gamma.states)
    active = gamma.weights > 0
    if np.any(np.isinf(e[active])):
        return float("inf")
    return math.fsum((gamma.weights[active] * e[active]).tolist())


def solve_nbody_lp(
    c: KernelMatrix, mu: ProbVector, n: int, cap: int = STATE_CAP, n_cap: int = N_CAP
) -> Tuple[SymmetricCoupling, float]:
    """Minimize the N-body pair energy over symmetric couplings with one-body marginal mu."""
    if c.m != mu.m:
        raise DimensionMismatchError(f"marginal on {mu.m} points does not match kernel size {c.m}")
    if n < 2:
        raise DimensionMismatchError("the N-body problem needs N >= 2")
    if n > n_cap:
        raise CapOverflowError(f"N={n} exceeds the body cap of {n_cap}")
    if math.isinf(energy(c, mu)):
        raise InfiniteEnergyError("K(mu) is infinite; the product state has infinite energy")
    states = multiset_states(c.m, n, cap)
    e = state_energies(c, states)
    usable = np.isfinite(e)
    logger.debug("N=%d: %d states, %d with finite energy", n, len(states), int(usable.sum()))

    a = np.vstack([states[usable].T / n, np.ones((1, int(usable.sum())))])
    b = np.append(mu.weights, 1.0)
    sol = solve_lp(LinearProgram(cost=e[usable], eq_matrix=a, eq_rhs=b))
    if not sol.is_optimal:
        raise LpFailureError(f"N-body LP ended with status '{sol.status}' for N={n}")

    w = np.zeros(len(states))
    w[usable] = sol.x
    w = np.clip(w, 0.0, None)
    gamma = SymmetricCoupling(N=n, m=c.m, states=states, weights=w / w.sum())
    return gamma, sol.objective


def nbody_hierarchy(
    c: KernelMatrix, mu: ProbVector, bodies: Sequence[int], cap: int = STATE_CAP, n_cap: int = N_CAP
) -> List[Tuple[int, float]]:
    rows = []
    for n in bodies:
        _, value = solve_nbody_lp(c, mu, n, cap, n_cap)
        rows.append((n, value))
        logger.debug("N=%d value=%.17g", n, value)
    return rows


def mixture_consistency(c: KernelMatrix, nu: Mixture, n: int) -> float:
    """|pair_energy(mixture coupling) - mixture_energy|; zero for every N on de Finetti states."""
    return abs(pair_energy(c, mixture_coupling(nu, n)) - mixture_energy(c, nu))
