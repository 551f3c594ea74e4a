from unittest import TestCase

import numpy as np

from fracperiodic import constants
from fracperiodic.problems.catalog import (ABSORBING_POWER, EVEN_POWER, ODD_POWER_MINUS, ODD_POWER_PLUS,
                                           QUADRATIC_SHIFTED, odd_power_minus, quadratic_shifted)
from fracperiodic.problems.periodic import (AmplitudeScan, PeriodicSolution, amplitude_scan, even_power_wave,
                                            large_period_pairs, large_period_positive, minimum_bound_holds,
                                            negative_counterpart, sign_changing_for_period, small_amplitude_pair)
from fracperiodic.solvers.continuation import BranchPoint
from fracperiodic.space.fields import PeriodicField, SpectralField


class TestEvenPowerWave(TestCase):
    def test_scaling(self):
        point = BranchPoint(lam=0.25, field=SpectralField.cosine(1, 4, 0.1), amplitude=0.1, residual=0.0, s=0.5)
        u = even_power_wave(point, 3.0)
        # lam^{-1/(p-1)} = 2 and period = lam^{1/2s} * 2π/(1 - lam)^{1/2s}
        self.assertAlmostEqual(u.amplitude(), 0.2)
        self.assertAlmostEqual(u.period, constants.TWO_PI * 0.25 / 0.75)

    def test_requires_lambda_in_unit_interval(self):
        point = BranchPoint(lam=1.5, field=SpectralField.zeros(2), amplitude=0.0, residual=0.0, s=0.5)
        with self.assertRaises(AssertionError):
            even_power_wave(point, 2.0)


class TestSmallAmplitude(TestCase):
    @classmethod
    def setUpClass(cls):
        cls.pair = small_amplitude_pair(0.5, 2.0)

    def test_pair_solves_even_power(self):
        self.assertEqual(len(self.pair), 2)
        for solution in self.pair:
            self.assertEqual(solution.family, EVEN_POWER)
            self.assertLess(solution.residual, constants.GLOBAL_RESIDUAL_TOL)

    def test_period_close_to_two_pi(self):
        for solution in self.pair:
            self.assertLess(abs(solution.period - constants.TWO_PI) / constants.TWO_PI, constants.PERIOD_CLOSENESS)

    def test_pair_is_half_period_shift(self):
        first, second = self.pair
        half = first.u.period / 2.0
        self.assertAlmostEqual(float(second.u(0.0)), float(first.u(half)), places=10)

    def test_minimum_bound(self):
        self.assertTrue(all(minimum_bound_holds(solution) for solution in self.pair))

    def test_row(self):
        family, s, p, period, amplitude, residual = self.pair[0].row()
        self.assertEqual((family, s, p), (EVEN_POWER, 0.5, 2.0))
        self.assertGreater(amplitude, 0.0)


class TestAmplitudeScan(TestCase):
    def test_empty_grid(self):
        scan = amplitude_scan(0.5, 2.0, [])
        self.assertEqual(scan.rows, [])
        self.assertEqual(scan.max_amplitude, 0.0)

    def test_amplitudes_grow_away_from_bifurcation(self):
        # The quadratic branch leaves lam* = 1/2 to the right, so lam = 0.05 is never reached
        scan = amplitude_scan(0.5, 2.0, [0.51, 0.55, 0.05])
        self.assertEqual([row.lam for row in scan.rows], [0.51, 0.55])
        self.assertLess(scan.rows[0].branch_amplitude, scan.rows[1].branch_amplitude)
        self.assertTrue(np.isfinite(scan.max_amplitude))

    def test_scan_object(self):
        self.assertEqual(AmplitudeScan(s=0.5, p=2.0).max_amplitude, 0.0)


class TestSignChanging(TestCase):
    def test_three_pi_period(self):
        solution = sign_changing_for_period(0.5, 3.0)
        self.assertEqual(solution.family, ODD_POWER_PLUS)
        self.assertTrue(solution.changes_sign())
        self.assertAlmostEqual(solution.u.period, 3.0 * np.pi)
        self.assertLess(solution.residual, constants.GLOBAL_RESIDUAL_TOL)

    def test_multiple_of_two_pi_rejected(self):
        with self.assertRaises(AssertionError):
            sign_changing_for_period(0.5, 3.0, 2.0 * constants.TWO_PI)


class TestNegativeCounterpart(TestCase):
    def test_odd_equation_keeps_spec(self):
        # Constant solution of -u + u^3 on any period
        spec = odd_power_minus(0.5, 3.0)
        positive = PeriodicSolution(spec=spec, u=PeriodicField(SpectralField.constant(1.0, 4), 8.0), period=8.0,
                                    residual=0.0, label='constant')
        negative = negative_counterpart(positive)
        self.assertIs(negative.spec, spec)
        self.assertAlmostEqual(negative.u.maximum(), -1.0)

    def test_even_equation_switches_to_absorbing(self):
        positive = PeriodicSolution(spec=quadratic_shifted(0.5), u=PeriodicField(SpectralField.constant(1.0, 4)),
                                    period=constants.TWO_PI, residual=0.0, label='constant')
        negative = negative_counterpart(positive)
        self.assertEqual(negative.family, ABSORBING_POWER)
        self.assertLess(negative.residual, constants.GLOBAL_RESIDUAL_TOL)


class TestLargePeriod(TestCase):
    period = 4.0 * constants.TWO_PI

    def test_positive_wave(self):
        w = large_period_positive(0.5, 3.0, self.period)
        self.assertEqual(w.family, ODD_POWER_MINUS)
        self.assertEqual(w.period, self.period)
        self.assertGreater(w.u.minimum(), 0.0)
        self.assertLess(w.residual, constants.GLOBAL_RESIDUAL_TOL)

    def test_quadratic_shifted_wave(self):
        w = large_period_positive(0.5, 2.0, self.period, family=QUADRATIC_SHIFTED)
        self.assertEqual(w.family, QUADRATIC_SHIFTED)
        self.assertGreater(w.u.maximum(), 1.0)
        self.assertLess(w.residual, constants.GLOBAL_RESIDUAL_TOL)

    def test_quadratic_shifted_needs_p_two(self):
        with self.assertRaises(AssertionError):
            large_period_positive(0.5, 3.0, self.period, family=QUADRATIC_SHIFTED)

    def test_pairs(self):
        pairs = large_period_pairs(0.5, 3.0, periods=(8.0 * constants.TWO_PI, self.period))
        self.assertEqual([w.period for w in pairs], [self.period] * 2 + [8.0 * constants.TWO_PI] * 2)
        for positive, negative in zip(pairs[::2], pairs[1::2]):
            self.assertGreater(positive.u.minimum(), 0.0)
            self.assertAlmostEqual(negative.u.maximum(), -positive.u.minimum())
            self.assertIs(negative.spec, positive.spec)
            self.assertLess(negative.residual, constants.GLOBAL_RESIDUAL_TOL)

    def test_even_pairs_switch_family(self):
        pairs = large_period_pairs(0.5, 2.0, periods=(self.period,), family=QUADRATIC_SHIFTED)
        self.assertEqual([w.family for w in pairs], [QUADRATIC_SHIFTED, ABSORBING_POWER])
