"""
Pointwise residual of (−Δ)^s u = lam u + f(u) for a T-periodic field.

The operator is the period-T quadrature operator, whose kernel is the 2π
lattice sum rescaled to the period-T lattice. Values at off-grid points
come from translating the field so that the point lands on node 0. The same
evaluation at half the resolution gives the Richardson gap.
"""
from dataclasses import dataclass

import numpy as np
from loguru import logger

from fracperiodic import constants
from fracperiodic.exceptions import ResolutionError
from fracperiodic.kernel.lattice import period_scaling_gap
from fracperiodic.operators.quadrature import QuadratureOperator
from fracperiodic.problems.catalog import ProblemSpec
from fracperiodic.space.fields import PeriodicField

# Check points sit at T (c + OFFSET)/n_check, never on a power-of-two grid
CHECK_OFFSET = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass
class ResidualReport:
    period: float
    n_pts: int
    points: np.ndarray
    operator_values: np.ndarray
    rhs_values: np.ndarray
    richardson_gap: float

    @property
    def residuals(self):
        return np.abs(self.operator_values - self.rhs_values)

    @property
    def sup(self):
        return float(np.max(self.residuals))

    @property
    def resolved(self):
        return self.richardson_gap <= constants.RICHARDSON_TOL


def check_points(period, n_check=constants.N_CHECK_POINTS):
    return period * (np.arange(n_check) + CHECK_OFFSET) / n_check


def _resolution(u: PeriodicField):
    n_pts = constants.QUADRATURE_RESOLUTION
    while n_pts < 4 * (2 * u.n_modes + 2):
        n_pts *= 2
    return n_pts


def _operator_at(u: PeriodicField, op: QuadratureOperator, points):
    return np.array([op.apply_at(u.shift(x).samples(op.n_pts), 0) for x in points])


def verify_period_scaling(s, period=constants.PERIOD_SCALING_CHECK):
    gap = period_scaling_gap(s, period)
    assert gap <= constants.HURWITZ_AGREEMENT_TOL, \
        f'Period scaling of the kernel is off by {gap:.3e} at T = {period:.6g}.'
    return gap


def residual_report(u: PeriodicField, spec: ProblemSpec, n_check=constants.N_CHECK_POINTS,
                    n_pts=None) -> ResidualReport:
    n_pts = n_pts or _resolution(u)
    assert n_pts // 2 >= 2 * u.n_modes + 2, f'{n_pts} points cannot carry a Richardson check for {u.n_modes} modes.'
    if not np.isclose(u.period, constants.TWO_PI):
        verify_period_scaling(spec.s)

    points = check_points(u.period, n_check)
    fine = _operator_at(u, QuadratureOperator(spec.s, n_pts, u.period), points)
    coarse = _operator_at(u, QuadratureOperator(spec.s, n_pts // 2, u.period), points)

    report = ResidualReport(
        period=u.period,
        n_pts=n_pts,
        points=points,
        operator_values=fine,
        rhs_values=spec.rhs(u(points)),
        richardson_gap=float(np.max(np.abs(fine - coarse))),
    )
    logger.debug(f'Residual of {spec.family} at period {u.period:.6g}: {report.sup:.3e} '
                 f'(Richardson gap {report.richardson_gap:.1e}).')
    return report


def global_residual(u: PeriodicField, spec: ProblemSpec, n_check=constants.N_CHECK_POINTS, n_pts=None) -> float:
    """Sup residual at n_check off-grid points; raises ResolutionError when the Richardson gap is too large."""
    report = residual_report(u, spec, n_check, n_pts)
    if not report.resolved:
        raise ResolutionError(f'Richardson gap {report.richardson_gap:.3e} exceeds {constants.RICHARDSON_TOL:.1e} '
                              f'at {report.n_pts} points.')
    return report.sup
