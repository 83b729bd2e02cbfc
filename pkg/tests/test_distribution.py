import math

import numpy as np
import pytest
from scipy import stats

from mogfit import distribution as dist
from mogfit.errors import (
    DivergenceError,
    UnsupportedInputError,
    ValidationError,
)
from mogfit.mixture import GaussianMixture


HALF_LN_2PIE = 0.5 * math.log(2 * math.pi * math.e)


class TestDensityCdf:
    def test_uniform_density(self):
        assert dist.density(dist.uniform(0, 1), 0.5) == pytest.approx(1.0)

    def test_mixture_density_at_zero(self):
        gm = GaussianMixture(((0.5, 0.0, 1.0), (0.5, 0.0, 1.0)))
        assert dist.density(dist.MixtureSpec(gm), 0.0) == pytest.approx(
            stats.norm.pdf(0.0), abs=1e-12)

    def test_exponential_density(self):
        assert dist.density(dist.exponential(1.0), 1.0) == pytest.approx(
            math.exp(-1), abs=1e-12)

    def test_uniform_cdf(self):
        assert dist.cdf(dist.uniform(0, 1), 0.25) == pytest.approx(0.25)

    def test_atom_counts_at_its_location(self):
        spec = dist.exponential(1.0, atoms=((0.0, 0.3),))
        assert dist.cdf(spec, 0.0) == pytest.approx(0.3, abs=1e-12)
        # The continuous part reports density scaled by its mass share.
        assert dist.density(spec, 1.0) == pytest.approx(0.7 * math.exp(-1), abs=1e-12)

    def test_mixture_cdf_matches_quadrature(self, rng):
        gm = GaussianMixture(((0.4, -1.0, 1.0), (0.6, 2.0, 1.0)))
        spec = dist.MixtureSpec(gm)
        for x in rng.normal(0.5, 2.0, 5):
            expected = 0.4 * stats.norm.cdf(x + 1) + 0.6 * stats.norm.cdf(x - 2)
            assert dist.cdf(spec, x) == pytest.approx(expected, abs=1e-9)

    def test_cdf_nondecreasing(self, corpus, rng):
        for spec in corpus.values():
            xs = np.sort(rng.uniform(-1, 3, 40))
            vals = [dist.cdf(spec, x) for x in xs]
            assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))


class TestExpect:
    def test_exponential_mean(self):
        assert dist.expect(dist.exponential(1.0), lambda x: x) == pytest.approx(
            1.0, abs=1e-8)

    def test_gaussian_second_moment(self):
        assert dist.expect(dist.gaussian(0, 1), lambda x: x * x) == pytest.approx(
            1.0, abs=1e-8)

    def test_uniform_log_integral(self):
        assert dist.expect(dist.uniform(0, 1), np.log) == pytest.approx(
            -1.0, abs=1e-7)

    def test_divergent_integrand(self):
        with pytest.raises(DivergenceError):
            dist.expect(dist.uniform(0, 1), lambda x: np.full_like(x, np.inf))


class TestEntropyRelativeEntropy:
    def test_uniform_entropy(self):
        assert dist.entropy(dist.uniform(0, 1)) == pytest.approx(0.0, abs=1e-7)

    def test_gaussian_entropy_closed_form(self):
        for var in (0.25, 1.0, 9.0):
            assert dist.entropy(dist.gaussian(1.0, var)) == pytest.approx(
                0.5 * math.log(2 * math.pi * math.e * var), abs=1e-7)

    def test_exponential_entropy(self):
        assert dist.entropy(dist.exponential(1.0)) == pytest.approx(1.0, abs=1e-7)
        assert dist.entropy(dist.exponential(2.0)) == pytest.approx(
            1.0 - math.log(2.0), abs=1e-7)

    def test_entropy_rejects_atoms(self):
        spec = dist.exponential(1.0, atoms=((0.0, 0.3),))
        with pytest.raises(UnsupportedInputError):
            dist.entropy(spec)

    def test_cross_term_self(self):
        assert dist.cross_term(dist.gaussian(0, 1), dist.gaussian(0, 1)) == \
            pytest.approx(HALF_LN_2PIE, abs=1e-8)

    def test_cross_term_point_mass(self):
        x = dist.Empirical([0.0])
        assert dist.cross_term(x, dist.gaussian(0, 1)) == pytest.approx(
            0.5 * math.log(2 * math.pi), abs=1e-12)

    def test_cross_term_exponential_vs_gaussian(self):
        assert dist.cross_term(dist.exponential(1.0), dist.gaussian(1, 1)) == \
            pytest.approx(0.5 * math.log(2 * math.pi) + 0.5, abs=1e-8)

    def test_cross_term_support_violation_is_infinite(self):
        assert dist.cross_term(dist.gaussian(0, 1), dist.uniform(0, 1)) == math.inf

    def test_relative_entropy_self_zero(self, corpus):
        for spec in corpus.values():
            assert abs(dist.relative_entropy(spec, spec)) <= 1e-7

    def test_relative_entropy_gaussians_closed_form(self):
        d = dist.relative_entropy(dist.gaussian(0, 1), dist.gaussian(1, 1))
        assert d == pytest.approx(0.5, abs=1e-6)

    def test_asymmetry_witness(self):
        a, b = dist.gaussian(0, 1), dist.gaussian(0, 4)
        assert abs(dist.relative_entropy(a, b) - dist.relative_entropy(b, a)) > 0.1

    def test_empirical_cross_term_is_exact_sum(self, rng):
        xs = rng.normal(0, 1, 50)
        emp = dist.Empirical(xs)
        direct = -np.sum(emp.weights * stats.norm.logpdf(emp.values))
        assert dist.cross_term(emp, dist.gaussian(0, 1)) == pytest.approx(
            direct, abs=1e-12)


class TestMoments:
    def test_gaussian_raw(self):
        mom = dist.moments(dist.gaussian(0, 1), 4)
        assert np.allclose(mom.raw, [0, 1, 0, 3], atol=1e-7)

    def test_uniform_raw(self):
        mom = dist.moments(dist.uniform(0, 1), 2)
        assert np.allclose(mom.raw, [0.5, 1 / 3], atol=1e-9)

    def test_exponential_raw_factorials(self):
        mom = dist.moments(dist.exponential(1.0), 3)
        assert np.allclose(mom.raw, [1, 2, 6], rtol=1e-7)

    def test_atoms_contribute(self):
        spec = dist.uniform(0, 1, atoms=((2.0, 0.5),))
        assert dist.moments(spec, 1).raw[0] == pytest.approx(
            0.5 * 0.5 + 0.5 * 2.0, abs=1e-9)


class TestSpline:
    POINTS = [(0.0, 0.1), (1.0, 0.3), (2.0, 0.6), (3.0, 0.8), (4.0, 0.95)]

    def test_interpolates_exactly(self):
        spec = dist.spline_from_points(self.POINTS)
        for x, F in self.POINTS:
            assert dist.cdf(spec, x) == pytest.approx(F, abs=1e-12)

    def test_n_equiv_defaults_to_point_count(self):
        assert dist.spline_from_points(self.POINTS).n_equiv == 5

    def test_bounded_density_zero_outside(self):
        spec = dist.spline_from_points(self.POINTS, tail_policy="bounded")
        lo, hi = spec.support()
        assert math.isfinite(lo) and math.isfinite(hi)
        assert dist.density(spec, lo - 1.0) == 0.0
        assert dist.density(spec, hi + 1.0) == 0.0

    def test_total_mass_one(self):
        for policy in ("bounded", "exponential_tails"):
            spec = dist.spline_from_points(self.POINTS, tail_policy=policy)
            mass = dist.expect(spec, lambda x: np.ones_like(x))
            assert mass == pytest.approx(1.0, abs=1e-6)

    def test_gaussian_quantile_points_mean(self):
        qs = np.linspace(0.1, 0.9, 9)
        pts = [(stats.norm.ppf(q), q) for q in qs]
        spec = dist.spline_from_points(pts)
        mean = dist.expect(spec, lambda x: x)
        assert abs(mean) < 0.05

    def test_nonmonotone_rejected_with_pairs(self):
        with pytest.raises(ValidationError, match="offending"):
            dist.spline_from_points([(0, 0.5), (1, 0.3), (2, 0.6)])

    def test_too_few_points(self):
        with pytest.raises(ValidationError):
            dist.spline_from_points([(0, 0.2), (1, 0.8)])


class TestEmpirical:
    def test_duplicates_merged(self):
        emp = dist.Empirical([1.0, 1.0, 2.0])
        assert len(emp.values) == 2
        assert emp.weights[0] == pytest.approx(2 / 3)

    def test_weights_normalized(self):
        emp = dist.Empirical([1.0, 2.0], weights=[2.0, 6.0])
        assert emp.weights.sum() == pytest.approx(1.0)
        assert emp.weights[1] == pytest.approx(0.75)

    def test_expect_is_weighted_sum(self):
        emp = dist.Empirical([1.0, 3.0], weights=[0.25, 0.75])
        assert dist.expect(emp, lambda x: x) == pytest.approx(2.5, abs=1e-15)


class TestMassNormalization:
    def test_density_plus_atoms_integrates_to_one(self, corpus):
        for spec in corpus.values():
            mass = dist.expect(spec, lambda x: np.ones_like(x))
            assert mass + dist.atom_mass(spec) == pytest.approx(1.0, abs=1e-6)

    def test_atom_mass_validation(self):
        with pytest.raises(ValidationError):
            dist.uniform(0, 1, atoms=((0.5, 1.5),))
