from itertools import combinations
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from halving_lab.errors import InvalidArgumentError, ResourceLimitError
from halving_lab.geom_core import PointCloud, sample_sphere
from halving_lab.moments import mean_abs_dot, variance_abs_dot
from halving_lab.polytopes import (
    HalvingSpec,
    KSetSpec,
    kset_extreme_points,
    support_halving,
    support_kset,
    symmetrize,
    top_k_average,
)

from conftest import random_unit

E1, E2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])


def cloud(P):
    P = np.asarray(P, dtype=float)
    return PointCloud(P.shape[1], P)


def brute_kset(P, k, u):
    return max(np.mean([P[i] @ u for i in c]) for c in combinations(range(len(P)), k))


class TestSymmetrize:
    def test_single(self):
        S = symmetrize(cloud([E1]))
        assert np.array_equal(S.points, [E1, -E1])

    def test_empty(self):
        assert len(symmetrize(PointCloud(2, np.empty((0, 2))))) == 0

    def test_two_basis(self):
        P = cloud([E1, E2])
        S = symmetrize(P)
        assert len(S) == 4
        assert support_kset(KSetSpec(S, 2), E1) == support_halving(HalvingSpec(P), E1)
        assert brute_kset(S.points, 2, E1) == support_halving(HalvingSpec(P), E1)


class TestSupportKSet:
    P3 = np.array([E1, E2, -E1])

    def test_k2(self):
        assert support_kset(KSetSpec(cloud(self.P3), 2), E1) == 0.5
        assert brute_kset(self.P3, 2, E1) == 0.5

    def test_k1(self):
        assert support_kset(KSetSpec(cloud(self.P3), 1), E1) == 1.0

    def test_k3(self):
        assert support_kset(KSetSpec(cloud(self.P3), 3), E1) == 0.0

    def test_k_range(self):
        with pytest.raises(InvalidArgumentError):
            KSetSpec(cloud(self.P3), 4)

    def test_brute_force(self, rng):
        for _ in range(100):
            n = int(rng.integers(1, 7))
            d = int(rng.integers(2, 5))
            P = rng.normal(size=(n, d))
            k = int(rng.integers(1, n + 1))
            u = random_unit(rng, 1, d)[0]
            assert abs(support_kset(KSetSpec(cloud(P), k), u) - brute_kset(P, k, u)) <= 1e-12

    def test_equals_top_k_average(self, rng):
        P = sample_sphere(4, 30, seed=2)
        for u in random_unit(rng, 20, 4):
            for k in (1, 7, 30):
                assert abs(support_kset(KSetSpec(P, k), u) - top_k_average(P.points @ u, k)) <= 1e-12

    def test_vectorized(self, rng):
        P = sample_sphere(3, 25, seed=4)
        U = random_unit(rng, 10, 3)
        spec = KSetSpec(P, 6)
        assert np.allclose(support_kset(spec, U), [support_kset(spec, u) for u in U], atol=1e-15)


class TestSupportHalving:
    def test_basis(self):
        assert support_halving(HalvingSpec(cloud([E1, E2])), E1) == 0.5

    def test_diagonal(self):
        u = np.array([1.0, 1.0]) / math.sqrt(2)
        P = cloud([E1, E2])
        assert support_halving(HalvingSpec(P), u) == pytest.approx(math.sqrt(2) / 2, abs=1e-15)
        assert brute_kset(symmetrize(P).points, 2, u) == pytest.approx(math.sqrt(2) / 2, abs=1e-15)

    def test_single_pair(self):
        assert support_halving(HalvingSpec(cloud([E1])), E1) == 1.0

    def test_consistency_with_kset(self):
        g = np.random.default_rng(17)
        for _ in range(500):
            N = int(g.integers(1, 21))
            d = int(g.integers(2, 7))
            P = sample_sphere(d, N, g)
            u = random_unit(g, 1, d)[0]
            lhs = support_halving(HalvingSpec(P), u)
            assert abs(lhs - support_kset(KSetSpec(symmetrize(P), N), u)) <= 1e-12

    def test_enumeration_small(self, rng):
        for _ in range(30):
            N = int(rng.integers(1, 7))
            P = sample_sphere(3, N, rng)
            u = random_unit(rng, 1, 3)[0]
            ref = brute_kset(symmetrize(P).points, N, u)
            assert abs(support_halving(HalvingSpec(P), u) - ref) <= 1e-12

    def test_symmetric_in_u(self, rng):
        P = HalvingSpec(sample_sphere(5, 40, seed=3))
        for u in random_unit(rng, 20, 5):
            assert support_halving(P, u) == support_halving(P, -u)

    def test_mean_concentrates(self):
        # h(L, u) is the mean of N draws of |u.X|
        d, N, T = 3, 40, 2000
        g = np.random.default_rng(5)
        u = np.array([0.0, 0.0, 1.0])
        h = np.array([support_halving(HalvingSpec(sample_sphere(d, N, g)), u) for _ in range(T)])
        sd = math.sqrt(variance_abs_dot(d))
        assert abs(h.mean() - mean_abs_dot(d)) <= 4 * sd / math.sqrt(N * T)


class TestTopKAverage:
    def test_examples(self):
        x = [1.0, 0.5, -1.0]
        assert top_k_average(x, 2) == 0.75
        assert top_k_average(x, 1) == 1.0
        assert top_k_average(x, 3) == pytest.approx(1 / 6, abs=1e-15)

    @pytest.mark.parametrize("k", [0, 4])
    def test_k_range(self, k):
        with pytest.raises(InvalidArgumentError):
            top_k_average([0.1, 0.2, 0.3], k)

    def test_entries_range(self):
        with pytest.raises(InvalidArgumentError):
            top_k_average([0.1, 1.5], 1)
        assert top_k_average([1 + 1e-13, 0.0], 1) == 1 + 1e-13

    def test_ties(self):
        assert top_k_average([0.5, 0.5, 0.5, -0.2], 2) == 0.5

    @settings(max_examples=200, deadline=None)
    @given(
        x=arrays(np.float64, 12, elements=st.floats(-1, 1)),
        y=arrays(np.float64, 12, elements=st.floats(-1, 1)),
        k=st.integers(1, 12),
    )
    def test_l1_lipschitz(self, x, y, k):
        assert abs(top_k_average(x, k) - top_k_average(y, k)) <= np.sum(np.abs(x - y)) / k + 1e-12


class TestKSetExtremePoints:
    def test_halving_of_square(self):
        # K_2 of the square corners is the square of edge midpoints
        P = np.array([[1.0, 1], [-1, 1], [-1, -1], [1, -1]])
        ext = kset_extreme_points(KSetSpec(cloud(P), 2))
        assert sorted(map(tuple, ext)) == [(-1.0, 0.0), (0.0, -1.0), (0.0, 1.0), (1.0, 0.0)]

    def test_refused_when_large(self):
        P = np.random.default_rng(0).normal(size=(30, 2))
        with pytest.raises(ResourceLimitError):
            kset_extreme_points(KSetSpec(cloud(P), 10))
