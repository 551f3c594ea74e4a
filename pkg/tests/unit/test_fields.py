from unittest import TestCase

import numpy as np

from fracperiodic import constants
from fracperiodic.space.fields import (FracOrder, GridField, PeriodicField, SpectralField, from_grid, grid_nodes,
                                       project, sampling_points, to_grid)


class TestFracOrder(TestCase):
    def test_accepts_open_interval(self):
        self.assertEqual(FracOrder(0.25).s, 0.25)
        self.assertAlmostEqual(FracOrder(0.25).alpha, 1.5)

    def test_rejects_endpoints(self):
        for s in (0.0, 1.0, -0.5, 1.5):
            with self.assertRaises(AssertionError):
                FracOrder(s)

    def test_of_passes_through(self):
        order = FracOrder(0.3)
        self.assertIs(FracOrder.of(order), order)


class TestSpectralField(TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(7)

    def test_coefficient_lengths_checked(self):
        with self.assertRaises(AssertionError):
            SpectralField(np.zeros(3), np.zeros(3))

    def test_nonfinite_rejected(self):
        with self.assertRaises(AssertionError):
            SpectralField(np.array([np.nan, 0.0]), np.zeros(1))

    def test_coefficients_are_read_only(self):
        u = SpectralField.cosine(1, 4)
        with self.assertRaises(ValueError):
            u.a[1] = 2.0

    def test_evaluation_matches_series(self):
        u = SpectralField.cosine(2, 4, 3.0) + SpectralField.sine(1, 4, -1.0) + 0.5
        x = np.linspace(0, 7, 13)
        np.testing.assert_allclose(u(x), 0.5 + 3.0 * np.cos(2 * x) - np.sin(x), atol=1e-13)

    def test_mean_is_half_a0(self):
        self.assertAlmostEqual(SpectralField.constant(1.5, 3).mean(), 1.5)

    def test_grid_round_trip(self):
        u = SpectralField.random(16, self.rng)
        v = from_grid(to_grid(u, 64), 16)
        np.testing.assert_allclose(v.a, u.a, atol=constants.ROUND_TRIP_TOL)
        np.testing.assert_allclose(v.b, u.b, atol=constants.ROUND_TRIP_TOL)

    def test_undersampling_raises(self):
        with self.assertRaises(ValueError):
            to_grid(SpectralField.zeros(16), 32)

    def test_derivative_of_sine(self):
        u = SpectralField.sine(3, 4)
        du = u.derivative()
        x = grid_nodes(32)
        np.testing.assert_allclose(du(x), 3.0 * np.cos(3 * x), atol=1e-12)

    def test_shift(self):
        u = SpectralField.random(8, self.rng)
        x = np.linspace(0, 6, 9)
        np.testing.assert_allclose(u.shift(0.7)(x), u(x + 0.7), atol=1e-12)

    def test_resize_keeps_low_modes(self):
        u = SpectralField.random(8, self.rng)
        v = u.resize(4)
        self.assertEqual(v.n_modes, 4)
        np.testing.assert_array_equal(v.a, u.a[:5])
        self.assertEqual(v.resize(8).a[8], 0.0)

    def test_l2_squared_of_cosine(self):
        self.assertAlmostEqual(SpectralField.cosine(3, 5).l2_squared(), np.pi)

    def test_sup_norm(self):
        self.assertAlmostEqual(SpectralField.cosine(2, 4, -2.5).sup_norm(), 2.5)

    def test_is_even_and_constant(self):
        self.assertTrue(SpectralField.cosine(2, 4).is_even())
        self.assertFalse(SpectralField.sine(2, 4).is_even())
        self.assertTrue(SpectralField.constant(3.0, 4).is_constant())

    def test_random_without_mean(self):
        self.assertEqual(SpectralField.random(4, self.rng, mean=False).a[0], 0.0)


class TestGrid(TestCase):
    def test_power_of_two_required(self):
        with self.assertRaises(AssertionError):
            GridField(np.zeros(12))

    def test_integral_of_constant(self):
        self.assertAlmostEqual(GridField(np.ones(16)).integral(), constants.TWO_PI)

    def test_sampling_points(self):
        # 4 * (2 * 256 + 2) = 2056 rounds up to 4096
        self.assertEqual(sampling_points(256), 4096)
        self.assertGreaterEqual(sampling_points(3), 2 * 3 + 2)

    def test_project_recovers_trigonometric_polynomial(self):
        x = grid_nodes(64)
        u = project(1.0 + np.cos(2 * x), 8)
        self.assertAlmostEqual(u.a[0], 2.0)
        self.assertAlmostEqual(u.a[2], 1.0)


class TestPeriodicField(TestCase):
    def test_rescaled_evaluation(self):
        u = PeriodicField(SpectralField.cosine(1, 4), 4 * np.pi)
        self.assertAlmostEqual(u(2 * np.pi), -1.0)
        self.assertAlmostEqual(u(4 * np.pi), 1.0)

    def test_extrema_and_amplitude(self):
        u = PeriodicField(SpectralField.cosine(1, 4, 2.0) + 1.0, 3.0)
        self.assertAlmostEqual(u.maximum(), 3.0)
        self.assertAlmostEqual(u.minimum(), -1.0)
        self.assertAlmostEqual(u.amplitude(), 3.0)

    def test_shift(self):
        u = PeriodicField(SpectralField.sine(1, 4), 5.0)
        self.assertAlmostEqual(u.shift(1.25)(0.0), u(1.25))

    def test_period_must_be_positive(self):
        with self.assertRaises(AssertionError):
            PeriodicField(SpectralField.zeros(2), 0.0)
