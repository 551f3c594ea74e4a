from unittest import TestCase

import numpy as np

from fracperiodic.exceptions import ConvergenceError
from fracperiodic.solvers.newton import TrigBasis, newton, pointwise_residual, solve_semilinear
from fracperiodic.solvers.nonlinearities import (Nonlinearity, abs_power, by_name, cube, negative_abs_power,
                                                 odd_power, square, truncate_nonlinearity, zero)
from fracperiodic.space.fields import SpectralField


class TestNonlinearities(TestCase):
    def test_power_families(self):
        t = np.array([-2.0, -0.5, 0.0, 1.5])
        np.testing.assert_allclose(abs_power(2.5)(t), np.abs(t) ** 2.5)
        np.testing.assert_allclose(odd_power(3.0)(t), t ** 3)
        np.testing.assert_allclose(negative_abs_power(2.0)(t), -t ** 2)
        self.assertTrue(odd_power(2.5).odd)
        self.assertFalse(abs_power(2.5).odd)

    def test_derivatives_by_difference(self):
        t = np.array([-1.3, 0.4, 2.2])
        h = 1e-6
        for f in (square(), cube(), abs_power(2.5), odd_power(1.5), negative_abs_power(3.0)):
            difference = (f(t + h) - f(t - h)) / (2 * h)
            np.testing.assert_allclose(f.derivative(t), difference, rtol=1e-6, err_msg=f.name)

    def test_by_name(self):
        self.assertEqual(by_name('u3').name, 'u3')
        self.assertEqual(by_name('abs_power', 2.5).power, 2.5)
        self.assertEqual(by_name('custom', 3.0).name, 'odd_power(3)')
        with self.assertRaises(ValueError):
            by_name('sin')

    def test_power_must_exceed_one(self):
        with self.assertRaises(AssertionError):
            odd_power(1.0)

    def test_truncation_is_linear_outside(self):
        f = truncate_nonlinearity(cube())
        self.assertAlmostEqual(float(f(np.float64(3.0))), 1.0 + 3.0 * 2.0)
        self.assertAlmostEqual(float(f(np.float64(0.5))), 0.125)
        t = np.linspace(-10, 10, 101)
        self.assertTrue(np.all(np.abs(f(t)) <= f.bound * np.abs(t) + 1e-12))

    def test_truncation_rejects_linear_part(self):
        linear = Nonlinearity('linear', lambda t: 2.0 * t, lambda t: 2.0 + 0.0 * t)
        with self.assertRaises(ValueError):
            truncate_nonlinearity(linear)

    def test_zero(self):
        self.assertEqual(float(np.max(np.abs(zero()(np.linspace(-1, 1, 5))))), 0.0)


class TestTrigBasis(TestCase):
    def test_round_trip_even(self):
        basis = TrigBasis(6, even=True)
        u = SpectralField.cosine(2, 6, 0.7) + 0.3
        x = basis.from_field(u)
        np.testing.assert_allclose(basis.project(basis.values(x)), x, atol=1e-13)
        self.assertEqual(basis.dim, 7)

    def test_round_trip_general(self):
        basis = TrigBasis(4, even=False)
        u = SpectralField.random(4, np.random.default_rng(2))
        back = basis.to_field(basis.project(basis.values(basis.from_field(u))))
        np.testing.assert_allclose(back.b, u.b, atol=1e-13)


class TestNewton(TestCase):
    def test_scalar_root(self):
        x, norm, _ = newton(lambda x: x ** 2 - 2.0, lambda x: np.array([[2.0 * x[0]]]), np.array([1.0]))
        self.assertAlmostEqual(x[0], np.sqrt(2.0), places=10)
        self.assertLessEqual(norm, 1e-10)

    def test_no_root_raises(self):
        with self.assertRaises(ConvergenceError) as ctx:
            newton(lambda x: x ** 2 + 1.0, lambda x: np.array([[2.0 * x[0]]]), np.array([1.0]), max_iter=5)
        self.assertIsNotNone(ctx.exception.residual)

    def test_constant_solution(self):
        # Lc = 0, so -lam c = c^3 has c = 1 at lam = -1
        u = solve_semilinear(SpectralField.constant(1.2, 4), 0.5, -1.0, cube())
        self.assertAlmostEqual(u.mean(), 1.0, places=10)
        self.assertLess(pointwise_residual(u, 0.5, -1.0, cube()), 1e-9)

    def test_residual_of_eigenfunction(self):
        u = SpectralField.cosine(2, 4)
        self.assertLess(pointwise_residual(u, 0.5, 2.0, zero()), 1e-13)
        self.assertAlmostEqual(pointwise_residual(u, 0.5, 1.0, zero()), 1.0)
