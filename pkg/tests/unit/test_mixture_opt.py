import math

import numpy as np
import pytest

from mfc.core.energy import barycenter, convexity_gap, energy, mixture_energy, quadratic
from mfc.core.errors import (
    CapOverflowError,
    DimensionMismatchError,
    InfiniteEnergyError,
    OffGridError,
    WitnessError,
)
from mfc.core.mixture_opt import (
    check_on_grid,
    decorrelation_verdict,
    max_feasible_eps,
    simplex_grid,
    solve_mixture_lp,
    two_point_witness,
)
from mfc.core.models import Circulant, KernelMatrix, ProbVector
from mfc.core.space_kernel import build_kernel, circulant_space

SQUARED_DISTANCE = KernelMatrix([[0.0, 1.0], [1.0, 0.0]])
IDENTITY = KernelMatrix(np.eye(2))
GAUSSIAN = KernelMatrix([[1.0, math.exp(-1)], [math.exp(-1), 1.0]])
SHIFTED = KernelMatrix([[4.0, 3.0, 0.0], [3.0, 4.0, 3.0], [0.0, 3.0, 4.0]])
HALF = ProbVector([0.5, 0.5])
R = 1 / math.sqrt(2)


def test_simplex_grid_order_and_size():
    grid = simplex_grid(2, 2)
    assert [q.weights.tolist() for q in grid] == [[1.0, 0.0], [0.5, 0.5], [0.0, 1.0]]
    assert len(simplex_grid(3, 8)) == 45
    with pytest.raises(CapOverflowError):
        simplex_grid(6, 20, cap=1000)


def test_off_grid_marginal():
    with pytest.raises(OffGridError):
        check_on_grid(ProbVector([1 / 3, 1 / 3, 1 / 3]), 8)
    with pytest.raises(OffGridError):
        decorrelation_verdict(SHIFTED, ProbVector([1 / 3, 1 / 3, 1 / 3]), r=8)
    check_on_grid(ProbVector([1 / 3, 1 / 3, 1 / 3]), 6)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        solve_mixture_lp(SHIFTED, HALF)


def test_product_state_is_optimal_for_convex_kernels():
    circulant = build_kernel(circulant_space(4), Circulant((2.0, 1.0, 0.0, 1.0)))
    cyclic3 = build_kernel(circulant_space(3), Circulant((3.0, 1.0, 1.0)))
    suite = [
        (GAUSSIAN, HALF),
        (IDENTITY, HALF),
        (SHIFTED, ProbVector([0.25, 0.5, 0.25])),
        (circulant, ProbVector.uniform(4)),
        (cyclic3, ProbVector([0.25, 0.5, 0.25])),
    ]
    for c, mu in suite:
        v = decorrelation_verdict(c, mu, r=8)
        assert v.decorrelated
        assert v.witness is None
        assert abs(v.gap) <= 1e-9
        assert v.product_value == pytest.approx(energy(c, mu))


def test_squared_distance_is_correlated():
    v = decorrelation_verdict(SQUARED_DISTANCE, HALF, r=8)
    assert not v.decorrelated
    assert v.product_value == pytest.approx(0.5)
    assert v.lp_value == pytest.approx(0.0, abs=1e-12)
    assert v.optimal_value == pytest.approx(0.0, abs=1e-12)
    assert v.gap == pytest.approx(-0.5)
    assert v.witness is not None
    assert np.allclose(barycenter(v.witness).weights, HALF.weights)
    assert convexity_gap(SQUARED_DISTANCE, v.witness) == pytest.approx(-0.5, abs=1e-10)
    assert v.unique_flag == "undetermined"


def test_two_point_witness_gap_identity():
    d = np.array([R, -R])
    eps = max_feasible_eps(HALF, d)
    nu = two_point_witness(SQUARED_DISTANCE, HALF, d)
    assert eps == pytest.approx(R)
    assert convexity_gap(SQUARED_DISTANCE, nu) == pytest.approx(eps**2 * quadratic(SQUARED_DISTANCE, d), abs=1e-10)
    assert convexity_gap(SQUARED_DISTANCE, nu) == pytest.approx(-0.5, abs=1e-10)


def test_two_point_witness_smaller_step(rng):
    a = rng.random((4, 4)) + np.eye(4)
    c = KernelMatrix(0.5 * (a + a.T))
    mu = ProbVector([0.25, 0.25, 0.25, 0.25])
    d = np.array([1.0, -1.0, 0.5, -0.5])
    nu = two_point_witness(c, mu, d, eps=0.1)
    assert np.allclose(barycenter(nu).weights, mu.weights)
    assert convexity_gap(c, nu) == pytest.approx(0.01 * quadratic(c, d), abs=1e-10)


def test_two_point_witness_errors():
    with pytest.raises(WitnessError):
        two_point_witness(SQUARED_DISTANCE, HALF, [1.0, 0.0])
    with pytest.raises(WitnessError):
        two_point_witness(SQUARED_DISTANCE, HALF, [R, -R], eps=5.0)
    with pytest.raises(WitnessError):
        two_point_witness(SQUARED_DISTANCE, ProbVector([1.0, 0.0]), [R, -R])
    with pytest.raises(WitnessError):
        two_point_witness(SQUARED_DISTANCE, HALF, [R, -R], eps=-1.0)
    nu = two_point_witness(SQUARED_DISTANCE, HALF, [R, -R], eps=5.0, shrink=True)
    assert mixture_energy(SQUARED_DISTANCE, nu) == pytest.approx(0.0, abs=1e-12)


def test_uniqueness_flags():
    shifted = decorrelation_verdict(SHIFTED, ProbVector([0.25, 0.5, 0.25]), r=8)
    assert shifted.unique_flag == "non_unique"
    assert decorrelation_verdict(GAUSSIAN, HALF, r=8).unique_flag == "unique"


def test_zero_direction_of_shifted_kernel_attains_zero_gap():
    mu = ProbVector([0.25, 0.5, 0.25])
    d = np.array([1.0, -2.0, 1.0]) / math.sqrt(6)
    nu = two_point_witness(SHIFTED, mu, d)
    assert convexity_gap(SHIFTED, nu) == pytest.approx(0.0, abs=1e-10)
    assert mixture_energy(SHIFTED, nu) == pytest.approx(energy(SHIFTED, mu), abs=1e-10)


def test_boundary_marginal_with_zero_direction_is_undetermined():
    # zero balanced direction (1, -2, 1) exists, but mu cannot move along it
    v = decorrelation_verdict(SHIFTED, ProbVector([0.5, 0.5, 0.0]), r=8)
    assert v.decorrelated
    assert v.unique_flag == "undetermined"


def test_infinite_entries_use_the_lp_only():
    c = KernelMatrix([[1.0, math.inf], [math.inf, 1.0]])
    v = decorrelation_verdict(c, ProbVector([1.0, 0.0]), r=4)
    assert v.decorrelated
    assert v.unique_flag == "undetermined"
    assert v.optimal_value == pytest.approx(1.0)
    with pytest.raises(InfiniteEnergyError):
        decorrelation_verdict(c, HALF, r=4)


def test_lp_mixture_has_barycenter_mu():
    mu = ProbVector([0.25, 0.5, 0.25])
    nu, value = solve_mixture_lp(SHIFTED, mu, r=8)
    assert np.allclose(barycenter(nu).weights, mu.weights, atol=1e-12)
    assert value == pytest.approx(mixture_energy(SHIFTED, nu), abs=1e-10)


def test_random_circulants_with_nonnegative_spectrum_decorrelate(rng):
    for n, r in ((3, 6), (4, 8), (5, 5)):
        for _ in range(3):
            half = rng.random(n // 2 + 1)
            spectrum = np.array([half[min(k, n - k)] for k in range(n)])
            ell = np.array([spectrum @ np.cos(2 * np.pi * j * np.arange(n) / n) / n for j in range(n // 2 + 1)])
            # a constant only moves the k = 0 coefficient
            ell += max(0.0, -ell.min()) + 0.1
            profile = tuple(ell[min(j, n - j)] for j in range(n))
            c = build_kernel(circulant_space(n), Circulant(profile))
            v = decorrelation_verdict(c, ProbVector.uniform(n), r=r)
            assert v.decorrelated
            assert abs(v.gap) <= 1e-9


def test_finer_grids_never_raise_the_lp_value(rng):
    mu = ProbVector([0.25, 0.5, 0.25])
    for _ in range(5):
        g = rng.random((3, 3))
        c = KernelMatrix(g + g.T)
        values = [solve_mixture_lp(c, mu, r=r)[1] for r in (4, 8, 16)]
        assert all(fine <= coarse + 1e-9 for coarse, fine in zip(values, values[1:]))


def test_shifted_kernel_at_uniform_marginal_is_non_unique():
    v = decorrelation_verdict(SHIFTED, ProbVector.uniform(3), r=6)
    assert v.decorrelated
    assert v.unique_flag == "non_unique"
    assert abs(v.gap) <= 1e-9
