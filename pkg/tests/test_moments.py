import math

import numpy as np
import pytest
from scipy import integrate
from scipy.special import gammaln

from halving_lab.errors import InvalidArgumentError
from halving_lab.moments import (
    marginal_density,
    mean_abs_dot,
    moment_row,
    power_integral,
    sample_abs_dot,
    second_moment_abs_dot,
    variance_abs_dot,
)


def gamma_mean(d):
    # E|X_1| on S^{d-1}: Gamma(d/2) / (sqrt(pi) Gamma((d+1)/2))
    return math.exp(gammaln(d / 2) - gammaln((d + 1) / 2)) / math.sqrt(math.pi)


def mc_abs_dot(d, n, seed, chunk=2_000_000):
    """|Z| / sqrt(Z^2 + chi2_{d-1}): the first coordinate of a uniform point, drawn
    without forming the whole Gaussian vector."""
    g = np.random.default_rng(seed)
    out = []
    for start in range(0, n, chunk):
        m = min(chunk, n - start)
        z = g.standard_normal(m)
        out.append(np.abs(z) / np.sqrt(z * z + g.chisquare(d - 1, m)))
    return np.concatenate(out)


class TestDensity:
    def test_uniform_in_d3(self):
        for t in (0.0, 0.3, 0.9, 0.999):
            assert marginal_density(3, t) == pytest.approx(1.0, abs=1e-12)

    def test_arcsine_in_d2(self):
        assert marginal_density(2, 0.0) == pytest.approx(2 / math.pi, abs=1e-12)
        assert marginal_density(2, 0.6) == pytest.approx(2 / math.pi / 0.8, abs=1e-12)

    @pytest.mark.parametrize("d", range(2, 51))
    def test_unit_mass(self, d):
        # quadrature in t with the (1 - t)^beta factor carried by the weight,
        # independent of the sin substitution used by the library; the density
        # is c (1 - t^2)^beta, and c is read off at t = 0
        beta = (d - 3) / 2
        c = marginal_density(d, 0.0)
        assert marginal_density(d, 0.5) == pytest.approx(c * 0.75**beta, rel=1e-12)
        mass, _ = integrate.quad(
            lambda t: c * (1 + t) ** beta, 0.0, 1.0,
            weight="alg", wvar=(0.0, beta), epsabs=1e-13,
        )
        assert abs(mass - 1.0) <= 1e-9

    def test_histogram_d2(self):
        x = mc_abs_dot(2, 10**6, seed=8)
        hist, edges = np.histogram(x, bins=20, range=(0, 0.95))
        dens = hist / (len(x) * np.diff(edges))
        exact = np.array([integrate.quad(lambda t: marginal_density(2, t), a, b)[0] for a, b in zip(edges[:-1], edges[1:])])
        assert np.allclose(dens, exact / np.diff(edges), rtol=0.03)

    @pytest.mark.parametrize("t", [-0.1, 1.0, 1.5])
    def test_domain(self, t):
        with pytest.raises(InvalidArgumentError):
            marginal_density(3, t)

    def test_dimension(self):
        with pytest.raises(InvalidArgumentError):
            marginal_density(1, 0.5)


class TestMoments:
    def test_d3(self):
        assert abs(mean_abs_dot(3) - 0.5) <= 1e-12
        assert abs(variance_abs_dot(3) - 1 / 12) <= 1e-12

    def test_d2(self):
        assert abs(mean_abs_dot(2) - 2 / math.pi) <= 1e-12
        assert abs(variance_abs_dot(2) - (0.5 - 4 / math.pi**2)) <= 1e-12

    @pytest.mark.parametrize("d", [2, 3, 4, 7, 10, 50, 200, 1000, 5000])
    def test_gamma_closed_form(self, d):
        assert mean_abs_dot(d) == pytest.approx(gamma_mean(d), rel=1e-10)

    @pytest.mark.parametrize("d", [2, 3, 5, 10, 50, 1000])
    def test_second_moment(self, d):
        assert second_moment_abs_dot(d) == pytest.approx(1 / d, rel=1e-10)

    def test_asymptotic_mean(self):
        assert abs(mean_abs_dot(1000) * math.sqrt(1000) / math.sqrt(2 / math.pi) - 1) <= 0.01

    def test_asymptotic_variance(self):
        assert abs(1000 * variance_abs_dot(1000) / (1 - 2 / math.pi) - 1) <= 0.02

    def test_row(self):
        r = moment_row(3)
        assert r.method == "quadrature"
        assert r.var_d == pytest.approx(1 / 12, abs=1e-12)
        assert 0 < r.m_d < 1

    @pytest.mark.parametrize("a", np.arange(0, 10.5, 0.5))
    def test_power_recurrence(self, a):
        assert abs(power_integral(a + 1) / power_integral(a) - (2 * a + 2) / (2 * a + 3)) <= 1e-9

    def test_power_integral_direct(self):
        # I(a) by plain quadrature in t for a >= 0
        for a in (0.0, 0.5, 3.0, 7.5):
            ref, _ = integrate.quad(lambda t: (1 - t * t) ** a, 0, 1, epsabs=0, epsrel=1e-13)
            assert power_integral(a) == pytest.approx(ref, rel=1e-11)

    def test_wallis_limit(self):
        assert abs(math.sqrt(2000) * power_integral(1000) / math.sqrt(math.pi / 2) - 1) <= 0.01


class TestSampling:
    def test_empty(self):
        assert sample_abs_dot(3, 0, seed=1).size == 0

    def test_d3_moments(self):
        x = sample_abs_dot(3, 10**6, seed=1)
        assert abs(x.mean() - 0.5) <= 0.002
        assert abs(x.var() - 1 / 12) <= 0.001

    def test_range(self):
        x = sample_abs_dot(5, 10**5, seed=2)
        assert np.all((x >= 0) & (x <= 1))

    def test_signed(self):
        x = sample_abs_dot(3, 10**5, seed=2, signed=True)
        assert x.min() < 0 < x.max()
        assert np.array_equal(np.abs(x), sample_abs_dot(3, 10**5, seed=2))

    @pytest.mark.parametrize("d", [2, 3, 5, 10, 50])
    def test_second_moment_mc(self, d):
        x = sample_abs_dot(d, 10**6, seed=d)
        sq = x * x
        assert abs(sq.mean() - 1 / d) <= 4 * sq.std() / math.sqrt(len(sq))

    @pytest.mark.slow
    @pytest.mark.parametrize("d", range(2, 21))
    def test_quadrature_vs_monte_carlo(self, d):
        n = 10**7
        x = mc_abs_dot(d, n, seed=100 + d)
        m = x.mean()
        assert abs(mean_abs_dot(d) - m) <= 4 * x.std() / math.sqrt(n)
        dev2 = (x - m) ** 2
        assert abs(variance_abs_dot(d) - dev2.mean()) <= 4 * dev2.std() / math.sqrt(n)
