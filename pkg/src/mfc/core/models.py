"""Immutable domain types shared by every core module.

Arrays stored on these dataclasses are private copies with the writeable flag cleared,
so instances can be handed between threads freely.
"""

from dataclasses import dataclass, field
from math import comb, isfinite
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from mfc.core.errors import (
    DimensionMismatchError,
    InvalidMeasureError,
    KernelSpecError,
    NegativeEntryError,
    NotSymmetricError,
)

SUM_TOL = 1e-12


def frozen_array(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.flags.writeable = False
    return arr


# ---------------------------------------------------------------------------
# Spaces and kernels
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DiscreteSpace:
    """m distinct points in R^d."""
    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DimensionMismatchError("a space needs at least one point with at least one coordinate")
        if not np.all(np.isfinite(pts)):
            raise KernelSpecError("point coordinates must be finite")
        if len({tuple(p) for p in pts.tolist()}) != pts.shape[0]:
            raise KernelSpecError("points must be pairwise distinct")
        object.__setattr__(self, "points", frozen_array(pts))

    @property
    def m(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def distances(self) -> np.ndarray:
        diff = self.points[:, None, :] - self.points[None, :, :]
        return np.sqrt(np.sum(diff * diff, axis=-1))


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """Symmetric m x m pair costs in [0, +inf].

    The stored matrix is rebuilt from its upper triangle, so it is bitwise symmetric.
    """
    entries: np.ndarray

    def __post_init__(self) -> None:
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise DimensionMismatchError(f"kernel must be a non-empty square matrix, got shape {a.shape}")
        if np.any(np.isnan(a)):
            raise KernelSpecError("kernel entries must not be NaN")
        if np.any(a < 0):
            raise NegativeEntryError("kernel entries must be nonnegative")
        both_inf = np.isinf(a) & np.isinf(a.T)
        finite = np.isfinite(a) & np.isfinite(a.T)
        scale = 1.0 + (float(np.max(a[finite])) if finite.any() else 0.0)
        diff = np.zeros_like(a)
        np.subtract(a, a.T, out=diff, where=finite)
        if np.any(~(both_inf | finite)) or np.any(np.abs(diff) > 1e-12 * scale):
            raise NotSymmetricError("kernel matrix is not symmetric")
        upper = np.triu(a)
        sym = upper + np.triu(a, 1).T
        object.__setattr__(self, "entries", frozen_array(sym))

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.entries)))

    def max_abs(self) -> float:
        finite = self.entries[np.isfinite(self.entries)]
        return float(np.max(np.abs(finite))) if finite.size else 0.0


@dataclass(frozen=True)
class DiagPolicy:
    """Diagonal value of singular kernels: a finite cap, or +inf when `value` is None."""
    value: Optional[float] = None

    def __post_init__(self) -> None:
        if self.value is not None and (not isfinite(self.value) or self.value < 0):
            raise KernelSpecError("diagonal cap must be finite and >= 0")

    @classmethod
    def cap(cls, value: float) -> "DiagPolicy":
        return cls(float(value))

    @classmethod
    def infinite(cls) -> "DiagPolicy":
        return cls(None)

    def diagonal(self) -> float:
        return float("inf") if self.value is None else self.value


@dataclass(frozen=True)
class KernelSpec:
    """Base for kernel recipes understood by `space_kernel.build_kernel`."""
    pass


@dataclass(frozen=True)
class PowerLaw(KernelSpec):
    s: float
    diag: DiagPolicy = field(default_factory=DiagPolicy.infinite)

    def __post_init__(self) -> None:
        if not (self.s > 0 and isfinite(self.s)):
            raise KernelSpecError("power-law exponent s must be a positive real")


@dataclass(frozen=True)
class LogKernel(KernelSpec):
    diag: DiagPolicy = field(default_factory=DiagPolicy.infinite)


@dataclass(frozen=True)
class Radial(KernelSpec):
    # distance -> value, exact-match lookup only
    profile: Dict[float, float] = field(default_factory=dict)


@dataclass(frozen=True)
class Circulant(KernelSpec):
    profile: Tuple[float, ...] = ()

    def __post_init__(self) -> None:
        prof = tuple(float(v) for v in self.profile)
        n = len(prof)
        if n < 1:
            raise KernelSpecError("circulant profile must be non-empty")
        for j in range(1, n):
            if abs(prof[j] - prof[n - j]) > 1e-12:
                raise KernelSpecError(f"circulant profile is not symmetric: l[{j}] != l[{n - j}]")
        object.__setattr__(self, "profile", prof)


@dataclass(frozen=True, eq=False)
class Expansion(KernelSpec):
    """Mercer form sum_n a_n psi_n(x) psi_n(y); `basis` rows are the psi_n on the points."""
    basis: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        psi = np.atleast_2d(np.array(self.basis, dtype=float))
        a = np.atleast_1d(np.array(self.coeffs, dtype=float))
        if a.ndim != 1 or psi.shape[0] != a.shape[0]:
            raise KernelSpecError("expansion coefficient count must equal the number of basis rows")
        if np.any(a < 0):
            raise KernelSpecError("expansion coefficients must be nonnegative")
        object.__setattr__(self, "basis", frozen_array(psi))
        object.__setattr__(self, "coeffs", frozen_array(a))


@dataclass(frozen=True, eq=False)
class Explicit(KernelSpec):
    matrix: np.ndarray


@dataclass(frozen=True)
class Gaussian(KernelSpec):
    width: float = 1.0

    def __post_init__(self) -> None:
        if not (self.width > 0 and isfinite(self.width)):
            raise KernelSpecError("gaussian width must be a positive real")


@dataclass(frozen=True)
class InnerProduct(KernelSpec):
    """c(x, y) = l(<x, y>) for points on a sphere."""
    profile: "SphericalProfile"


# ---------------------------------------------------------------------------
# Spectral results
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EigenResult:
    eigenvalues: np.ndarray
    # columns are the eigenvectors
    eigenvectors: np.ndarray
    sweeps: int = 0


@dataclass(frozen=True, eq=False)
class PDReport:
    mode: str  # "full" | "balanced"
    min_eigenvalue: float
    verdict: str  # "positive_definite" | "positive_semidefinite" | "not_positive"
    witness: Optional[np.ndarray]
    tol: float

    @property
    def is_positive(self) -> bool:
        return self.verdict != "not_positive"


# ---------------------------------------------------------------------------
# Measures
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ProbVector:
    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.atleast_1d(np.array(self.weights, dtype=float))
        if w.ndim != 1 or w.size < 1:
            raise InvalidMeasureError("a probability vector needs at least one entry")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise InvalidMeasureError("probability weights must be finite and nonnegative")
        if abs(float(np.sum(w)) - 1.0) > SUM_TOL:
            raise InvalidMeasureError(f"probability weights sum to {float(np.sum(w))!r}, expected 1")
        object.__setattr__(self, "weights", frozen_array(w))

    @property
    def m(self) -> int:
        return self.weights.size

    @classmethod
    def dirac(cls, m: int, i: int) -> "ProbVector":
        w = np.zeros(m)
        w[i] = 1.0
        return cls(w)

    @classmethod
    def uniform(cls, m: int) -> "ProbVector":
        return cls(np.full(m, 1.0 / m))


@dataclass(frozen=True, eq=False)
class MixtureAtom:
    weight: float
    q: ProbVector


@dataclass(frozen=True, eq=False)
class Mixture:
    """Finitely supported probability measure over probability vectors."""
    atoms: Tuple[MixtureAtom, ...]

    def __post_init__(self) -> None:
        atoms = tuple(self.atoms)
        if not atoms:
            raise InvalidMeasureError("a mixture needs at least one atom")
        sizes = {a.q.m for a in atoms}
        if len(sizes) != 1:
            raise DimensionMismatchError("all mixture atoms must share the same size")
        if any(not (a.weight > 0 and isfinite(a.weight)) for a in atoms):
            raise InvalidMeasureError("mixture weights must be positive")
        total = sum(a.weight for a in atoms)
        if abs(total - 1.0) > SUM_TOL:
            raise InvalidMeasureError(f"mixture weights sum to {total!r}, expected 1")
        object.__setattr__(self, "atoms", atoms)

    @property
    def m(self) -> int:
        return self.atoms[0].q.m

    @classmethod
    def dirac(cls, q: ProbVector) -> "Mixture":
        return cls((MixtureAtom(1.0, q),))

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[float, Sequence[float]]]) -> "Mixture":
        return cls(tuple(MixtureAtom(float(w), q if isinstance(q, ProbVector) else ProbVector(q)) for w, q in pairs))


# ---------------------------------------------------------------------------
# Optimization
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LinearProgram:
    """minimize cost @ x  s.t.  eq_matrix @ x = eq_rhs,  x >= 0."""
    cost: np.ndarray
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray

    def __post_init__(self) -> None:
        c = np.atleast_1d(np.array(self.cost, dtype=float))
        a = np.array(self.eq_matrix, dtype=float)
        if a.ndim == 1:
            a = a.reshape(1, -1)
        b = np.atleast_1d(np.array(self.eq_rhs, dtype=float))
        if c.ndim != 1 or a.ndim != 2 or a.shape[1] != c.size or a.shape[0] != b.size:
            raise DimensionMismatchError(
                f"inconsistent LP dimensions: cost {c.shape}, matrix {a.shape}, rhs {b.shape}"
            )
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise DimensionMismatchError("LP data must be finite")
        object.__setattr__(self, "cost", frozen_array(c))
        object.__setattr__(self, "eq_matrix", frozen_array(a))
        object.__setattr__(self, "eq_rhs", frozen_array(b))

    @property
    def n(self) -> int:
        return self.cost.size

    @property
    def p(self) -> int:
        return self.eq_rhs.size


@dataclass(frozen=True, eq=False)
class LpSolution:
    status: str  # "optimal" | "infeasible" | "unbounded" | "stalled"
    x: np.ndarray
    objective: float
    iterations: int = 0

    @property
    def is_optimal(self) -> bool:
        return self.status == "optimal"


@dataclass(frozen=True, eq=False)
class Verdict:
    decorrelated: bool
    optimal_value: float
    product_value: float
    gap: float
    witness: Optional[Mixture]
    unique_flag: str  # "unique" | "non_unique" | "undetermined"
    lp_value: float
    resolution: int
    tol: float
    lp_mixture: Optional[Mixture] = None


@dataclass(frozen=True, eq=False)
class SymmetricCoupling:
    """Exchangeable N-body state stored as weights on count vectors (multisets)."""
    N: int
    m: int
    states: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        states = np.array(self.states, dtype=np.int64)
        w = np.atleast_1d(np.array(self.weights, dtype=float))
        if states.ndim != 2 or states.shape != (comb(self.m + self.N - 1, self.N), self.m):
            raise DimensionMismatchError("coupling states must list every size-N multiset over m points")
        if w.shape != (states.shape[0],):
            raise DimensionMismatchError("one weight per state is required")
        if np.any(states.sum(axis=1) != self.N) or np.any(states < 0):
            raise InvalidMeasureError("every state must be a count vector summing to N")
        if np.any(w < 0) or abs(float(np.sum(w)) - 1.0) > SUM_TOL:
            raise InvalidMeasureError("coupling weights must be nonnegative and sum to 1")
        object.__setattr__(self, "states", frozen_array(states, dtype=np.int64))
        object.__setattr__(self, "weights", frozen_array(w))


# ---------------------------------------------------------------------------
# Sphere profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SphericalProfile:
    """l(t) on [-1, 1] with the ultraspherical index lam = (d - 1) / 2 of S^d.

    Exactly one of `poly` (monomial coefficients c0, c1, ...), a node table
    (`nodes`, `values`) or `func` is given.
    """
    lam: float
    poly: Optional[np.ndarray] = None
    nodes: Optional[np.ndarray] = None
    values: Optional[np.ndarray] = None
    func: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self) -> None:
        if not (self.lam > 0 and isfinite(self.lam)):
            raise KernelSpecError("lambda must be a positive real")
        given = sum(x is not None for x in (self.poly, self.nodes, self.func))
        if given != 1:
            raise KernelSpecError("a profile is a polynomial, a node table or a function, exactly one")
        if self.poly is not None:
            object.__setattr__(self, "poly", frozen_array(np.atleast_1d(self.poly)))
        if self.nodes is not None:
            nodes = np.atleast_1d(np.array(self.nodes, dtype=float))
            values = np.atleast_1d(np.array(self.values, dtype=float))
            if nodes.shape != values.shape:
                raise KernelSpecError("profile nodes and values differ in length")
            if np.any(nodes < -1) or np.any(nodes > 1):
                raise KernelSpecError("profile nodes must lie within [-1, 1]")
            order = np.argsort(nodes, kind="stable")
            object.__setattr__(self, "nodes", frozen_array(nodes[order]))
            object.__setattr__(self, "values", frozen_array(values[order]))

    @property
    def degree(self) -> Optional[int]:
        if self.poly is None:
            return None
        nz = np.nonzero(self.poly)[0]
        return int(nz[-1]) if nz.size else 0


@dataclass(frozen=True, eq=False)
class ExpansionReport:
    coefficients: np.ndarray
    n_max: int
    classification: str  # "PD_up_to_truncation" | "strictly_PD_up_to_truncation" | "not_PD"
    first_negative: Optional[int]
    lam: float
    quadrature_order: int
    tol: float
    reconstruction_residual: Optional[float] = None


@dataclass(frozen=True)
class SphereCheck:
    """Outcome of testing Gram matrices l(<x_i, x_j>) on random sphere samples."""
    samples: int
    points: int
    dimension: int
    seed: int
    min_eigenvalue: float
    failures: int


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class Report:
    """What one subcommand produced: a JSON payload and, for tabular commands, rows for CSV."""
    command: str
    payload: Dict[str, Any] = field(default_factory=dict)
    # first row is the header when present
    table: Optional[List[List[Any]]] = None
    decorrelated: Optional[bool] = None
