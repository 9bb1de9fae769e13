import math

import numpy as np
import pytest

from moment_utilities.asymptotics import CANONICAL, EXACT_MOMENTS, \
    EXACT_QUADRATURE, PAPER, PLUGIN, REPLICATION, Covariance2, \
    QuadraticInfluence, coordinate_influences, covariance_exact_moments, \
    covariance_exact_quadrature, covariance_plugin, covariance_replication, \
    delta_gradient, empirical_process, influence_pair
from moment_utilities.distributions import LawSpec, quantile, sample, \
    theoretical_moments
from moment_utilities.estimation import estimator_map
from moment_utilities.misc_helpers import DomainError, \
    InsufficientDataError, MomentDomainError
from moment_utilities.special import unit_interval_integrate

ACCEPTANCE_LAWS = [
    LawSpec("gamma", 2, 3),
    LawSpec("beta", 2, 3),
    LawSpec("uniform", 0, 1),
    LawSpec("fisher", 5, 12)
]


def finite_difference_gradient(kind, m1, m2):
    """Central differences, ordered (da/dm1, da/dm2, db/dm1, db/dm2)"""
    h1 = max(1.0, abs(m1)) * 1e-6
    h2 = max(1.0, abs(m2)) * 1e-6
    d_m1 = np.subtract(estimator_map(kind, m1 + h1, m2),
                       estimator_map(kind, m1 - h1, m2)) / (2 * h1)
    d_m2 = np.subtract(estimator_map(kind, m1, m2 + h2),
                       estimator_map(kind, m1, m2 - h2)) / (2 * h2)
    return d_m1[0], d_m2[0], d_m1[1], d_m2[1]


def assert_close(sigma, expected, rel):
    assert sigma.s11 == pytest.approx(expected.s11, rel=rel)
    assert sigma.s22 == pytest.approx(expected.s22, rel=rel)
    assert sigma.s12 == pytest.approx(expected.s12, rel=rel)


class TestInfluence:

    def test_evaluate(self):
        f = QuadraticInfluence(2.0, -1.0, 0.5)
        assert f.evaluate(1.0) == 0.5
        assert list(f.evaluate(np.array([0.0, 2.0]))) == [-0.5, -0.5]

    def test_gamma_canonical(self):
        H, L = influence_pair(LawSpec("gamma", 2, 3))
        assert (H.c1, H.c2) == pytest.approx((18.0, -9.0), rel=1e-10)
        assert (L.c1, L.c2) == pytest.approx((22.5, -13.5), rel=1e-10)
        assert H.center == pytest.approx(6.0, rel=1e-10)
        assert L.center == pytest.approx(6.0, rel=1e-10)

    def test_gamma_paper(self):
        H, L = influence_pair(LawSpec("gamma", 2, 3), PAPER)
        assert (H.c1, H.c2) == pytest.approx((33.0, -9.0), rel=1e-10)
        assert (L.c1, L.c2) == pytest.approx((31.5, -13.5), rel=1e-10)

    def test_uniform_canonical(self):
        H, L = influence_pair(LawSpec("uniform", 0, 1), CANONICAL)
        assert (H.c1, H.c2) == pytest.approx((4.0, -3.0), rel=1e-10)
        assert (L.c1, L.c2) == pytest.approx((-2.0, 3.0), rel=1e-10)

    def test_fisher_l(self):
        _, L = influence_pair(LawSpec("fisher", 5, 10))
        assert L.c1 == pytest.approx(-32.0, rel=1e-10)
        assert L.c2 == 0.0

    @pytest.mark.parametrize("law", [
        LawSpec("beta", 2, 3),
        LawSpec("beta", 0.5, 4),
        LawSpec("uniform", -1, 3)
    ])
    def test_paper_matches_gradient(self, law):
        for canonical, paper in zip(influence_pair(law, CANONICAL),
                                    influence_pair(law, PAPER)):
            assert paper == pytest.approx(canonical, rel=1e-10, abs=1e-10)

    @pytest.mark.parametrize("law", ACCEPTANCE_LAWS)
    def test_centered_by_quadrature(self, law):
        H, L = influence_pair(law)
        means = unit_interval_integrate(
            lambda u, v: np.array([H.evaluate(quantile(law, u, v)),
                                   L.evaluate(quantile(law, u, v))]),
            with_complement=True)
        assert list(means) == pytest.approx([0.0, 0.0], abs=1e-6)

    def test_errors(self):
        with pytest.raises(MomentDomainError):
            influence_pair(LawSpec("fisher", 5, 4))
        with pytest.raises(DomainError):
            influence_pair(LawSpec("gamma", 2, 3), "verbatim")


class TestDeltaGradient:

    @pytest.mark.parametrize("kind, m1, m2, expected", [
        ("gamma", 2 / 3., 2 / 3., (18.0, -9.0, 22.5, -13.5)),
        ("uniform", 0.5, 1 / 3., (4.0, -3.0, -2.0, 3.0))
    ])
    def test_examples(self, kind, m1, m2, expected):
        assert delta_gradient(kind, m1, m2) == pytest.approx(expected,
                                                             rel=1e-10)

    @pytest.mark.parametrize("law", ACCEPTANCE_LAWS + [
        LawSpec("gamma", 10, 3),
        LawSpec("beta", 0.5, 4),
        LawSpec("fisher", 3, 20)
    ])
    def test_against_finite_differences(self, law):
        m = theoretical_moments(law)
        analytic = delta_gradient(law.kind, m.m1, m.m2)
        numeric = finite_difference_gradient(law.kind, m.m1, m.m2)
        assert analytic == pytest.approx(numeric, rel=1e-5, abs=1e-8)

    @pytest.mark.parametrize("kind, m1, m2", [
        ("fisher", 0.9, 1.0),
        ("gamma", 1.0, 1.0),
        ("uniform", 0.5, 0.25),
        ("beta", 0.5, 0.6)
    ])
    def test_infeasible(self, kind, m1, m2):
        with pytest.raises(DomainError):
            delta_gradient(kind, m1, m2)


class TestExactCovariance:

    def test_gamma_by_moments(self):
        law = LawSpec("gamma", 2, 3)
        sigma = covariance_exact_moments(law, *influence_pair(law))
        assert sigma.method == EXACT_MOMENTS
        assert (sigma.s11, sigma.s22, sigma.s12) == pytest.approx(
            (12.0, 31.5, 18.0), rel=1e-10)
        assert sigma.det == pytest.approx(54.0, rel=1e-9)

    def test_gamma_by_quadrature(self):
        law = LawSpec("gamma", 2, 3)
        sigma = covariance_exact_quadrature(law, *influence_pair(law))
        assert sigma.method == EXACT_QUADRATURE
        assert (sigma.s11, sigma.s22, sigma.s12) == pytest.approx(
            (12.0, 31.5, 18.0), rel=1e-5)
        assert sigma.det == pytest.approx(54.0, abs=1e-4 * 54)

    @pytest.mark.parametrize("law", ACCEPTANCE_LAWS)
    def test_methods_agree(self, law):
        H, L = influence_pair(law)
        assert_close(covariance_exact_quadrature(law, H, L),
                     covariance_exact_moments(law, H, L), rel=1e-5)

    def test_variance_of_identity(self):
        law = LawSpec("beta", 2, 3)
        h1, _ = coordinate_influences(law)
        sigma = covariance_exact_moments(law, h1, h1)
        assert sigma.s11 == pytest.approx(0.04, rel=1e-12)

    def test_identical_influences(self):
        law = LawSpec("gamma", 2, 3)
        H, _ = influence_pair(law)
        sigma = covariance_exact_quadrature(law, H, H)
        assert sigma.s11 == sigma.s22 == sigma.s12
        assert abs(sigma.det) <= 1e-10

    def test_paper_correlation(self):
        law = LawSpec("gamma", 2, 3)
        paper = covariance_exact_quadrature(law, *influence_pair(law, PAPER))
        canonical = covariance_exact_quadrature(law, *influence_pair(law))
        assert paper.correlation == pytest.approx(0.6976, rel=0.1)
        assert canonical.correlation == pytest.approx(
            18 / math.sqrt(12 * 31.5), rel=1e-5)
        assert abs(canonical.correlation - paper.correlation) > 0.1

    def test_fisher_needs_fourth_moment(self):
        law = LawSpec("fisher", 5, 6)
        H, L = influence_pair(law)
        with pytest.raises(MomentDomainError) as err:
            covariance_exact_moments(law, H, L)
        assert "fourth moment requires b>8" in str(err.value)
        with pytest.raises(MomentDomainError):
            covariance_exact_quadrature(law, H, L)
        # L has no quadratic term, its variance only needs b>4
        sigma = covariance_exact_moments(law, L, L)
        assert sigma.s11 == pytest.approx(64 * 4.05, rel=1e-10)


class TestEmpiricalCovariance:

    def test_plugin_constant_sample(self):
        law = LawSpec("gamma", 2, 3)
        sigma = covariance_plugin([0.5] * 10, *influence_pair(law))
        assert sigma.method == PLUGIN
        assert (sigma.s11, sigma.s22, sigma.s12) == (0.0, 0.0, 0.0)
        assert sigma.correlation is None

    def test_plugin_two_points(self):
        h = QuadraticInfluence(1.0, 0.0, 0.0)
        sigma = covariance_plugin([1.0, 4.0], h, h)
        assert sigma.s11 == pytest.approx(4.5, rel=1e-12)

    def test_plugin_insufficient(self):
        h = QuadraticInfluence(1.0, 0.0, 0.0)
        with pytest.raises(InsufficientDataError):
            covariance_plugin([1.0], h, h)

    def test_plugin_large_sample(self):
        law = LawSpec("gamma", 2, 3)
        H, L = influence_pair(law)
        sigma = covariance_plugin(sample(law, 10 ** 6, 31), H, L)
        assert (sigma.s11, sigma.s22, sigma.s12) == pytest.approx(
            (12.0, 31.5, 18.0), rel=0.02)

    def test_replication(self):
        sigma = covariance_replication([-1, 1], [-2, 2])
        assert sigma == Covariance2(2.0, 8.0, 4.0, REPLICATION)
        assert sigma.det == 0.0
        assert sigma.correlation == pytest.approx(1.0)

    def test_replication_identical(self):
        dev = [0.3, -1.2, 2.5, 0.1]
        sigma = covariance_replication(dev, dev)
        assert sigma.s22 == pytest.approx(sigma.s11, rel=1e-12)
        assert sigma.s12 == pytest.approx(sigma.s11, rel=1e-12)
        assert sigma.det == pytest.approx(0.0, abs=1e-10)

    def test_replication_errors(self):
        with pytest.raises(DomainError):
            covariance_replication([1, 2, 3], [1, 2])
        with pytest.raises(InsufficientDataError):
            covariance_replication([1], [2])

    def test_matrix(self):
        sigma = Covariance2(2.0, 8.0, 1.0, PLUGIN)
        assert sigma.as_matrix().tolist() == [[2.0, 1.0], [1.0, 8.0]]
        assert sigma.det == 15.0


class TestEmpiricalProcess:

    def test_coordinates(self):
        law = LawSpec("gamma", 2, 3)
        h1, h2 = coordinate_influences(law)
        assert (h1.c1, h1.c2, h1.center) == pytest.approx((1, 0, 2 / 3.))
        assert (h2.c1, h2.c2, h2.center) == pytest.approx((0, 1, 2 / 3.))

    def test_value(self):
        h1, _ = coordinate_influences(LawSpec("uniform", 0, 2))
        assert empirical_process([0.0, 2.0], h1) == 0.0
        assert empirical_process([1.0, 2.0, 3.0, 2.0], h1) == \
            pytest.approx(2.0)
