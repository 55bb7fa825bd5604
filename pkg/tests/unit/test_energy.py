import math

import numpy as np
import pytest

from mfc.core.energy import (
    barycenter,
    bilinear,
    convexity_gap,
    cross,
    energy,
    mixture_energy,
    pairwise_gap,
    quadratic,
)
from mfc.core.errors import DimensionMismatchError, InfiniteEnergyError
from mfc.core.models import KernelMatrix, Mixture, ProbVector
from mfc.core.spectral import balanced_pd_test


def random_kernel(rng, m):
    a = rng.random((m, m))
    return KernelMatrix(a + a.T)


def test_energy_of_identity():
    c = KernelMatrix(np.eye(2))
    assert energy(c, ProbVector([0.5, 0.5])) == 0.5
    assert energy(c, ProbVector.dirac(2, 0)) == 1.0


def test_infinite_times_zero_is_zero():
    c = KernelMatrix([[1.0, math.inf], [math.inf, 1.0]])
    assert energy(c, ProbVector([1.0, 0.0])) == 1.0
    assert math.isinf(energy(c, ProbVector([0.5, 0.5])))


def test_infinite_diagonal_makes_every_energy_infinite():
    c = KernelMatrix([[math.inf, 1.0], [1.0, math.inf]])
    assert math.isinf(energy(c, ProbVector([0.5, 0.5])))


def test_signed_vector_against_infinite_entry_raises():
    c = KernelMatrix([[0.0, math.inf], [math.inf, 0.0]])
    with pytest.raises(InfiniteEnergyError):
        quadratic(c, [1.0, -1.0])


def test_bilinear_is_symmetric_and_polarizes(rng):
    c = random_kernel(rng, 5)
    q = ProbVector(rng.dirichlet(np.ones(5)))
    r = ProbVector(rng.dirichlet(np.ones(5)))
    assert bilinear(c, q, r) == pytest.approx(bilinear(c, r, q), abs=1e-14)
    assert bilinear(c, q, q) == pytest.approx(energy(c, q), abs=1e-14)
    assert cross(c, q.weights, r.weights) == pytest.approx(float(q.weights @ c.entries @ r.weights), abs=1e-12)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        energy(KernelMatrix(np.eye(3)), ProbVector([0.5, 0.5]))


def test_mixture_energy_and_barycenter():
    c = KernelMatrix(np.eye(2))
    nu = Mixture.from_pairs([(0.5, [1.0, 0.0]), (0.5, [0.0, 1.0])])
    assert mixture_energy(c, nu) == 1.0
    assert barycenter(nu).weights.tolist() == [0.5, 0.5]
    assert convexity_gap(c, nu) == pytest.approx(0.5)


def test_dirac_mixture_has_zero_gap(rng):
    c = random_kernel(rng, 4)
    q = ProbVector(rng.dirichlet(np.ones(4)))
    assert convexity_gap(c, Mixture.dirac(q)) == pytest.approx(0.0, abs=1e-14)


def test_gap_with_infinite_barycenter_energy():
    c = KernelMatrix([[1.0, math.inf], [math.inf, 1.0]])
    nu = Mixture.from_pairs([(0.5, [1.0, 0.0]), (0.5, [0.0, 1.0])])
    assert convexity_gap(c, nu) == -math.inf
    assert pairwise_gap(c, nu) == -math.inf


def test_gap_needs_finite_mixture_energy():
    c = KernelMatrix([[1.0, math.inf], [math.inf, 1.0]])
    nu = Mixture.from_pairs([(0.5, [0.5, 0.5]), (0.5, [1.0, 0.0])])
    with pytest.raises(InfiniteEnergyError):
        convexity_gap(c, nu)


def test_two_atom_identity_and_polarization(rng):
    # 1000 random (C, Q, Q') triples with m <= 8
    for _ in range(1000):
        m = int(rng.integers(2, 9))
        c = random_kernel(rng, m)
        q = rng.dirichlet(np.ones(m))
        q2 = rng.dirichlet(np.ones(m))
        nu = Mixture.from_pairs([(0.5, q), (0.5, q2)])
        gap = convexity_gap(c, nu)
        assert gap == pytest.approx(0.25 * quadratic(c, q - q2), abs=1e-10)
        assert pairwise_gap(c, nu) == pytest.approx(gap, abs=1e-10)


def test_polarization_on_larger_mixtures(rng):
    for _ in range(50):
        m = int(rng.integers(2, 6))
        k = int(rng.integers(1, 5))
        c = random_kernel(rng, m)
        w = rng.dirichlet(np.ones(k))
        nu = Mixture.from_pairs([(w[i], rng.dirichlet(np.ones(m))) for i in range(k)])
        assert pairwise_gap(c, nu) == pytest.approx(convexity_gap(c, nu), abs=1e-10)


def test_quadratic_is_homogeneous_of_degree_two(rng):
    c = random_kernel(rng, 4)
    v = rng.standard_normal(4)
    for t in (-2.5, 0.0, 0.3, 7.0):
        assert quadratic(c, t * v) == pytest.approx(t * t * quadratic(c, v), rel=1e-12, abs=1e-12)


def test_balanced_positive_kernels_have_nonnegative_gap(rng):
    for _ in range(20):
        m = int(rng.integers(2, 6))
        g = rng.random((m, m))
        a = g @ g.T
        # a constant shift leaves the balanced form alone but can break full PSD
        c = KernelMatrix(a - 0.9 * a.min() * np.ones((m, m)))
        assert balanced_pd_test(c).is_positive
        eff = 1e-9 * (1.0 + float(c.entries.max()))
        for _ in range(20):
            k = int(rng.integers(2, 5))
            w = rng.dirichlet(np.ones(k))
            nu = Mixture.from_pairs([(w[i], rng.dirichlet(np.ones(m))) for i in range(k)])
            assert convexity_gap(c, nu) >= -eff
