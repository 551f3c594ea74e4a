import math
from unittest import TestCase

import numpy as np

from fracperiodic import constants
from fracperiodic.operators.spectral import fractional_laplacian
from fracperiodic.problems.catalog import bifurcation
from fracperiodic.solvers.continuation import (FIXED_PERIOD, ContinuationOptions, amplitude_law_exponent,
                                               autocorrelation_period, bifurcation_points, bifurcation_value,
                                               continue_branch, empirical_period, fundamental_frequency,
                                               phase_representatives, rescale_to_global, solve_at_lambda,
                                               to_normal, to_unscaled)
from fracperiodic.solvers.newton import pointwise_residual
from fracperiodic.solvers.nonlinearities import cube, zero
from fracperiodic.space.fields import SpectralField, grid_nodes, sampling_points, to_grid


class TestBifurcationValues(TestCase):
    def test_normal_form(self):
        points = bifurcation_points(0.5, 3)
        self.assertEqual([k for k, _ in points], [1, 2, 3])
        np.testing.assert_allclose([lam for _, lam in points], [1 / 2, 2 / 3, 3 / 4])

    def test_fixed_period(self):
        self.assertAlmostEqual(bifurcation_value(0.25, 4, FIXED_PERIOD), 2.0)

    def test_options_validate(self):
        with self.assertRaises(AssertionError):
            ContinuationOptions(formulation='arclength')
        with self.assertRaises(AssertionError):
            ContinuationOptions(step_min=1.0, step_initial=0.1)


class TestCubicBranch(TestCase):
    @classmethod
    def setUpClass(cls):
        cls.problem = bifurcation(0.5, cube())
        cls.branch = continue_branch(cls.problem, 1)

    def test_starts_at_bifurcation_value(self):
        point = self.branch.smallest()[0]
        self.assertLess(abs(point.lam - 0.5), 1e-2)

    def test_points_solve_the_equation(self):
        self.assertTrue(all(p.residual <= constants.BRANCH_RESIDUAL_TOL for p in self.branch.points))
        self.assertLessEqual(self.branch.amplitudes().max(), constants.BRANCH_MAX_AMPLITUDE)

    def test_supercritical_for_cubic(self):
        self.assertTrue(np.all(self.branch.lambdas() < 0.5 + 1e-6))

    def test_reported_period(self):
        for lam, _, period, _ in self.branch.rows():
            self.assertAlmostEqual(period, constants.TWO_PI * (1.0 - lam) ** -1.0, places=10)

    def test_empirical_period(self):
        point = self.branch.points[len(self.branch.points) // 2]
        expected = point.minimal_period / fundamental_frequency(point.field)
        self.assertLess(abs(empirical_period(point) - expected) / expected, 1e-2)

    def test_square_root_amplitude_law(self):
        self.assertAlmostEqual(amplitude_law_exponent(self.branch), 1.0, delta=0.1)

    def test_phase_pair(self):
        point = self.branch.points[-1]
        u, shifted = phase_representatives(point, 1)
        self.assertAlmostEqual(float(shifted(0.0)), float(u(math.pi)), places=12)

    def test_translation_family(self):
        rng = np.random.default_rng(31)
        point = self.branch.points[len(self.branch.points) // 2]
        n_pts = sampling_points(point.field.n_modes)
        for tau in rng.uniform(0.0, constants.TWO_PI, 5):
            u = point.field.shift(tau)
            v = to_grid(u, n_pts).values
            lv = to_grid(fractional_laplacian(u, 0.5), n_pts).values
            residual = (1.0 - point.lam) * (lv + v) - v - v ** 3
            self.assertLess(np.max(np.abs(residual)), constants.BRANCH_RESIDUAL_TOL, f'tau = {tau}')

    def test_solve_at_lambda(self):
        lambdas = self.branch.lambdas()
        target = 0.5 * (lambdas[1] + lambdas[2])
        point = solve_at_lambda(self.branch, target, self.problem)
        self.assertEqual(point.lam, target)
        self.assertLess(point.residual, constants.BRANCH_RESIDUAL_TOL)

    def test_unbracketed_lambda(self):
        with self.assertRaises(ValueError):
            solve_at_lambda(self.branch, 0.9, self.problem)

    def test_global_residual(self):
        u, report = rescale_to_global(self.branch.points[-1], self.problem)
        self.assertAlmostEqual(u.period, self.branch.points[-1].minimal_period)
        self.assertLess(report.sup, constants.GLOBAL_RESIDUAL_TOL)


class TestZeroNonlinearity(TestCase):
    def test_branch_is_the_eigenline(self):
        branch = continue_branch(bifurcation(0.5, zero()), 1)
        self.assertGreater(len(branch.points), 2)
        np.testing.assert_allclose(branch.lambdas(), 0.5, atol=1e-12)
        self.assertTrue(all(p.residual <= 1e-12 for p in branch.points))
        # Amplitude grows along the line at fixed lam
        self.assertTrue(np.all(np.diff(branch.amplitudes()) > 0))

    def test_fixed_period_eigenline(self):
        rng = np.random.default_rng(32)
        for eps in rng.uniform(0.01, 1.0, 5):
            u = SpectralField.cosine(2, 8, eps)
            self.assertLess(pointwise_residual(u, 0.5, 2.0, zero()), 1e-12)


class TestScalings(TestCase):
    def test_unscaled_and_normal_are_inverse(self):
        branch = continue_branch(bifurcation(0.5, cube()), 1, ContinuationOptions(max_steps=3))
        point = branch.points[-1]
        lam, w = to_unscaled(point, 3.0)
        back_lam, v = to_normal(lam, w, 3.0)
        self.assertAlmostEqual(back_lam, point.lam, places=12)
        np.testing.assert_allclose(v.a, point.field.a, atol=1e-12)


class TestPeriods(TestCase):
    def test_fundamental_frequency(self):
        u = SpectralField.cosine(2, 8) + SpectralField.cosine(6, 8, 0.1)
        self.assertEqual(fundamental_frequency(u), 2)
        self.assertEqual(fundamental_frequency(SpectralField.constant(1.0, 4)), 0)

    def test_autocorrelation_of_cosine(self):
        x = grid_nodes(1024)
        period = autocorrelation_period(np.cos(3 * x) + 0.2 * np.cos(6 * x), constants.TWO_PI)
        self.assertAlmostEqual(period, constants.TWO_PI / 3, delta=2e-3)

    def test_constant_signal(self):
        self.assertEqual(autocorrelation_period(np.ones(64), 5.0), 5.0)
