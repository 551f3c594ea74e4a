"""
Periodic solutions of the example equations on R, built from the 2π-periodic
solvers by rescaling x and u.

A 2π-periodic W with Lw = Lam w + |w|^{p-1} w gives the T-periodic solution
u(x) = c W(2πx/T) of (−Δ)^s u = ±u + |u|^{p-1} u when Lam = ±(T/2π)^{2s} and
c = (2π/T)^{2s/(p-1)}. Small-amplitude waves of the even-power family come
from the k = 1 normal-form branch instead, through
u(x) = lam^{-1/(p-1)} v(lam^{-1/(2s)} x).
"""
from dataclasses import dataclass, field

import numpy as np
from loguru import logger

from fracperiodic import constants
from fracperiodic.exceptions import VerificationError
from fracperiodic.problems.catalog import (EVEN_POWER, ODD_POWER_MINUS, QUADRATIC_SHIFTED, ProblemSpec,
                                           absorbing_power, bifurcation, even_power, odd_power_minus,
                                           odd_power_plus, quadratic_shifted)
from fracperiodic.problems.residual import global_residual
from fracperiodic.solvers.continuation import (BranchPoint, ContinuationOptions, continue_branch,
                                               fundamental_frequency, phase_representatives, solve_at_lambda)
from fracperiodic.solvers.nonlinearities import abs_power
from fracperiodic.solvers.variational import MinimizeOptions, minimize_on_manifold, solve_sign_changing
from fracperiodic.space.fields import FracOrder, PeriodicField


@dataclass(eq=False)
class PeriodicSolution:
    spec: ProblemSpec
    u: PeriodicField
    period: float
    residual: float
    label: str = ''

    @property
    def family(self):
        return self.spec.family

    @property
    def amplitude(self):
        return self.u.amplitude()

    @property
    def mean(self):
        return float(self.u.field.mean())

    @property
    def oscillation(self):
        """Half the peak-to-peak range."""
        return 0.5 * (self.u.maximum() - self.u.minimum())

    def changes_sign(self):
        return self.u.minimum() * self.u.maximum() < 0

    def row(self):
        """(family, s, p, period, amplitude, residual)"""
        return self.family, self.spec.s, self.spec.p, self.period, self.amplitude, self.residual


@dataclass
class ScanRow:
    lam: float
    branch_amplitude: float
    amplitude: float
    period: float


@dataclass
class AmplitudeScan:
    s: float
    p: float
    rows: list = field(default_factory=list)

    @property
    def max_amplitude(self):
        if not self.rows:
            return 0.0
        return max(r.amplitude for r in self.rows)


def _minimal_period(u: PeriodicField):
    return u.period / max(fundamental_frequency(u.field), 1)


def _rescaling(s, p, period):
    ratio = period / constants.TWO_PI
    return ratio ** (2.0 * s), ratio ** (-2.0 * s / (p - 1.0))


def _checked(spec: ProblemSpec, u: PeriodicField, label, n_check=constants.N_CHECK_POINTS) -> PeriodicSolution:
    residual = global_residual(u, spec, n_check)
    solution = PeriodicSolution(spec=spec, u=u, period=_minimal_period(u), residual=residual, label=label)
    logger.info(f'{label}: {spec.describe()} period {solution.period:.6g}, amplitude {solution.amplitude:.4g}, '
                f'residual {residual:.2e}.')
    if residual > constants.GLOBAL_RESIDUAL_TOL:
        raise VerificationError(f'{label} misses the equation by {residual:.2e}.',
                                failures=[(label, residual, constants.GLOBAL_RESIDUAL_TOL)])
    return solution


def even_power_wave(point: BranchPoint, p):
    """Scale a normal-form point of |v|^p into a periodic solution of (−Δ)^s u = u + |u|^p."""
    assert 0 < point.lam < 1, f'The even-power scaling needs 0 < lam < 1, got {point.lam}.'
    scale = point.lam ** (-1.0 / (p - 1.0))
    period = point.lam ** (1.0 / (2.0 * point.s)) * point.minimal_period
    return PeriodicField(point.field * scale, period)


def small_amplitude_pair(s, p, target_amplitude=constants.SMALL_AMPLITUDE_TARGET,
                         opts: ContinuationOptions = None) -> list[PeriodicSolution]:
    """
    Two small periodic solutions of (−Δ)^s u = u + |u|^p with minimal period
    close to 2π: the k = 1 branch point whose amplitude is nearest the target,
    scaled to the even-power equation, and its half-period shift.
    """
    s = FracOrder.of(s).s
    assert p > 1, f'The even-power family needs p > 1, got p = {p}.'
    branch = continue_branch(bifurcation(s, abs_power(p)), 1, opts)
    point = min(branch.points, key=lambda q: abs(q.amplitude - target_amplitude))

    spec = even_power(s, p)
    pair = []
    for i, v in enumerate(phase_representatives(point, 1)):
        shifted = BranchPoint(lam=point.lam, field=v, amplitude=point.amplitude, residual=point.residual, s=s)
        pair.append(_checked(spec, even_power_wave(shifted, p), f'small-amplitude wave {i + 1}'))

    gap = abs(pair[0].period - constants.TWO_PI) / constants.TWO_PI
    if gap > constants.PERIOD_CLOSENESS:
        raise VerificationError(f'Minimal period {pair[0].period:.6g} is {gap:.1%} away from 2π.',
                                failures=[('period', gap, constants.PERIOD_CLOSENESS)])
    return pair


def amplitude_scan(s, p, lambda_grid, opts: ContinuationOptions = None) -> AmplitudeScan:
    """
    Sup-amplitude of the even-power solutions along the k = 1 branch at each
    lam of the grid the branch reaches. Values of lam outside the branch are
    skipped with a warning.
    """
    s = FracOrder.of(s).s
    scan = AmplitudeScan(s=s, p=float(p))
    grid = np.asarray(lambda_grid, dtype=float)
    if not len(grid):
        return scan

    opts = opts or ContinuationOptions(max_amplitude=constants.SCAN_MAX_AMPLITUDE)
    problem = bifurcation(s, abs_power(p))
    branch = continue_branch(problem, 1, opts)
    for lam in grid:
        try:
            point = solve_at_lambda(branch, lam, problem, opts)
        except ValueError as e:
            logger.warning(f'Amplitude scan skips lam = {lam:g}: {e}')
            continue
        u = even_power_wave(point, p)
        scan.rows.append(ScanRow(lam=float(lam), branch_amplitude=point.amplitude, amplitude=u.amplitude(),
                                 period=u.period))

    assert np.isfinite(scan.max_amplitude), 'Amplitude scan produced a non-finite amplitude.'
    logger.info(f'Amplitude scan at s = {s}, p = {p}: {len(scan.rows)} of {len(grid)} values, '
                f'max amplitude {scan.max_amplitude:.6g}.')
    return scan


def minimum_bound_holds(solution: PeriodicSolution) -> bool:
    """Even-power solutions stay above -1 on the whole line."""
    assert solution.family == EVEN_POWER, f'The bound min u > -1 belongs to the even-power family, ' \
                                          f'not {solution.family}.'
    return solution.u.minimum() > -1.0


def sign_changing_for_period(s, p, period=constants.SIGN_CHANGING_PERIOD,
                             opts: ContinuationOptions = None) -> PeriodicSolution:
    """
    A sign-changing T-periodic solution of (−Δ)^s u = u + |u|^{p-1} u, for any
    T that is not a multiple of 2π.
    """
    s = FracOrder.of(s).s
    ratio = period / constants.TWO_PI
    assert abs(ratio - round(ratio)) > 1e-9, \
        f'T = {period:.6g} is a multiple of 2π, where the 2π problem is resonant.'
    lam, scale = _rescaling(s, p, period)
    w = solve_sign_changing(s, p, lam, opts)
    label = f'sign-changing wave (T = {period:.6g})'
    solution = _checked(odd_power_plus(s, p), PeriodicField(w * scale, period), label)
    if not solution.changes_sign():
        raise VerificationError(f'Solution at T = {period:.6g} keeps one sign.',
                                failures=[('sign change', solution.u.minimum(), 0.0)])
    return solution


def large_period_positive(s, p, period, family=None, opts: MinimizeOptions = None,
                          initial=None) -> PeriodicSolution:
    """
    Positive T-periodic solution of (−Δ)^s u = -u + |u|^{p-1} u, from the
    minimizer of J~ on M at Lam = -(T/2π)^{2s}. With family quadratic-shifted
    (p = 2) the same wave is checked against -u + u^2.
    """
    s = FracOrder.of(s).s
    family = family or ODD_POWER_MINUS
    if family == QUADRATIC_SHIFTED:
        assert p == 2, f'The quadratic-shifted family has p = 2, got p = {p}.'
        spec = quadratic_shifted(s)
    else:
        spec = odd_power_minus(s, p)

    lam, scale = _rescaling(s, p, period)
    result = minimize_on_manifold(s, p, -lam, opts, initial)
    if result.is_constant():
        raise VerificationError(f'The minimizer at T = {period:.6g} is constant; the period is too short.',
                                failures=[('nonconstant', 0.0, None)])
    solution = _checked(spec, PeriodicField(result.u * scale, period), f'large-period wave (T = {period:.6g})')
    if solution.u.minimum() <= 0:
        raise VerificationError(f'Large-period wave at T = {period:.6g} is not positive.',
                                failures=[('positive', solution.u.minimum(), 0.0)])
    return solution


def negative_counterpart(solution: PeriodicSolution) -> PeriodicSolution:
    """
    -u. For odd nonlinearities it solves the same equation; a positive solution
    of -w + |w|^p turns into a negative solution of -u - |u|^p.
    """
    spec = solution.spec
    u = PeriodicField(-solution.u.field, solution.u.period)
    if not spec.nonlinearity.odd:
        assert solution.u.minimum() > 0, 'Only positive solutions of an even equation have a negative mirror.'
        spec = absorbing_power(spec.s, spec.p)
    return _checked(spec, u, f'negative {solution.label}')


def large_period_pairs(s, p, periods=constants.LARGE_PERIODS, family=None,
                       opts: MinimizeOptions = None) -> list[PeriodicSolution]:
    """Positive and negative large-period solutions, one pair per period."""
    solutions = []
    for period in sorted(periods):
        positive = large_period_positive(s, p, period, family, opts)
        solutions.extend([positive, negative_counterpart(positive)])
    return solutions
