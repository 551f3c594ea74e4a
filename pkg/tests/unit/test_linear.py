from unittest import TestCase

import numpy as np

from fracperiodic.exceptions import VerificationError
from fracperiodic.solvers.linear import (ResolventK, eigen_verify, max_principle_check, random_nonnegative_rhs,
                                         rayleigh_min_Fk, rayleigh_quadrature, solve_linear)
from fracperiodic.space.fields import SpectralField, sampling_points, to_grid


class TestResolvent(TestCase):
    def test_solves_mode_by_mode(self):
        f = SpectralField.cosine(4, 6, 5.0) + 2.0
        u = solve_linear(f, 0.5)
        self.assertAlmostEqual(u.a[4], 1.0)
        self.assertAlmostEqual(u.mean(), 2.0)

    def test_mode_mismatch(self):
        with self.assertRaises(AssertionError):
            ResolventK.build(0.5, 4).apply(SpectralField.zeros(5))


class TestEigenVerify(TestCase):
    def test_quadrature_eigenvalues(self):
        report = eigen_verify(0.5, 8, 2048)
        self.assertTrue(report.complete)
        self.assertTrue(report.passed, report.failures())
        self.assertEqual(len(report.rows), 9)
        self.assertEqual(report.expected_count, 17)

    def test_strict_raises_on_failure(self):
        with self.assertRaises(VerificationError):
            eigen_verify(0.5, 8, 2048, tol=1e-16, strict=True)

    def test_unresolved_k_max(self):
        with self.assertRaises(AssertionError):
            eigen_verify(0.5, 40, 64)


class TestRayleigh(TestCase):
    def test_minimum_over_tail_space(self):
        for k in range(1, 6):
            value, minimizer = rayleigh_min_Fk(0.5, k)
            self.assertAlmostEqual(value, k + 1.0, places=12)
            self.assertTrue(np.all(minimizer.a[:k] == 0.0))

    def test_quadrature_quotient_of_minimizer(self):
        value, minimizer = rayleigh_min_Fk(0.3, 2)
        self.assertLess(abs(rayleigh_quadrature(minimizer, 0.3) - value) / value, 1e-4)

    def test_requires_positive_k(self):
        with self.assertRaises(AssertionError):
            rayleigh_min_Fk(0.5, 0)


class TestMaximumPrinciple(TestCase):
    def test_random_rhs_is_nonnegative(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            f = random_nonnegative_rhs(rng, 16)
            self.assertGreaterEqual(to_grid(f, sampling_points(16)).values.min(), -1e-12)

    def test_solutions_stay_nonnegative(self):
        report = max_principle_check(0.5, n_samples=200, seed=0)
        self.assertTrue(report.passed, report.grid_minimum)
        self.assertEqual(report.n_samples, 200)

    def test_seeded(self):
        first = max_principle_check(0.3, n_samples=5, seed=9)
        second = max_principle_check(0.3, n_samples=5, seed=9)
        self.assertEqual(first.grid_minimum, second.grid_minimum)
