"""
Pointwise check of L Φ(u) <= Φ'(u) L u for convex Lipschitz Φ.

Both sides go through the same quadrature operator. Φ(u) is not band-limited
when Φ has kinks, so its local correction takes (Φ∘u)'' from the chain rule
instead of from the samples.
"""
from dataclasses import dataclass
from typing import Callable

import numpy as np

from fracperiodic import constants
from fracperiodic.operators.quadrature import QuadratureOperator
from fracperiodic.space.fields import SpectralField, to_grid


@dataclass(frozen=True)
class ConvexFunction:
    name: str
    value: Callable
    derivative: Callable
    second: Callable


def identity():
    return ConvexFunction('identity', lambda t: t, np.ones_like, np.zeros_like)


def absolute():
    return ConvexFunction('abs', np.abs, np.sign, np.zeros_like)


def truncated_power(beta, cap):
    """Φ(t) = |t|^β for |t| <= T, continued linearly with matching slope beyond."""
    assert beta >= 1, f'Truncated power needs beta >= 1, got {beta}.'
    assert cap > 0, f'Truncation level must be positive, got {cap}.'

    def value(t):
        a = np.abs(t)
        return np.where(a <= cap, a ** beta, beta * cap ** (beta - 1) * (a - cap) + cap ** beta)

    def derivative(t):
        a = np.abs(t)
        return np.sign(t) * np.where(a <= cap, beta * a ** (beta - 1), beta * cap ** (beta - 1))

    def second(t):
        a = np.abs(t)
        curvature = beta * (beta - 1) * np.where(a > 0, a, 1.0) ** (beta - 2)
        at_zero = 2.0 if beta == 2 else 0.0
        return np.where(a > cap, 0.0, np.where(a > 0, curvature, at_zero))

    return ConvexFunction(f'power(beta={beta},T={cap})', value, derivative, second)


def softplus():
    def sigmoid(t):
        return 0.5 * (1.0 + np.tanh(0.5 * t))

    return ConvexFunction('softplus', lambda t: np.logaddexp(0.0, t), sigmoid,
                          lambda t: sigmoid(t) * (1.0 - sigmoid(t)))


def catalog():
    return [identity(), absolute(), truncated_power(2.0, 10.0), truncated_power(1.5, 2.0), softplus()]


def check_convex(phi: ConvexFunction, radius, n_points=2001, step=constants.CONVEXITY_STEP):
    """Reject phi when a centered second difference is negative on [-radius, radius]."""
    t = np.linspace(-radius, radius, n_points)
    second = phi.value(t - step) - 2.0 * phi.value(t) + phi.value(t + step)
    scale = np.max(np.abs(phi.value(t))) + 1.0
    if np.min(second) < -1e-10 * scale:
        worst = float(t[np.argmin(second)])
        raise ValueError(f'{phi.name} is not convex near t = {worst:.6g}.')


@dataclass
class ConvexityReport:
    phi: str
    n_samples: int
    max_violation: float
    lhs: np.ndarray
    rhs: np.ndarray

    @property
    def gap(self):
        return self.lhs - self.rhs

    @property
    def passed(self):
        return self.max_violation <= constants.CONVEXITY_TOL


def composite_derivatives(u: SpectralField, phi: ConvexFunction, n_samples):
    """
    (Φ∘u)'' = Φ''(u) u'^2 + Φ'(u) u'' and the leading part Φ'(u) u'''' of
    (Φ∘u)'''' at the nodes, from the exact derivatives of the band-limited u.
    """
    values = to_grid(u, n_samples).values
    d1, d2, d4 = (to_grid(u.derivative(order), n_samples).values for order in (1, 2, 4))
    slope = phi.derivative(values)
    return phi.second(values) * d1 ** 2 + slope * d2, slope * d4


def convexity_inequality_check(u: SpectralField, phi: ConvexFunction, s,
                               n_samples=constants.QUADRATURE_RESOLUTION,
                               op: QuadratureOperator = None) -> ConvexityReport:
    """
    lhs = L Φ(u) and rhs = Φ'(u) L u at every node, both through op. The
    correction of L Φ(u) uses the chain rule, so kinks of Φ do not ring.
    """
    values = to_grid(u, n_samples).values
    check_convex(phi, radius=1.5 * float(np.max(np.abs(values))) + 1.0)

    op = op or QuadratureOperator(s, n_samples)
    assert op.n_pts == n_samples, f'Operator built for {op.n_pts} points, check asked for {n_samples}.'
    rhs = phi.derivative(values) * op.apply(values).values
    lhs = op.apply(phi.value(values), derivatives=composite_derivatives(u, phi, n_samples)).values

    return ConvexityReport(
        phi=phi.name,
        n_samples=n_samples,
        max_violation=float(max(0.0, np.max(lhs - rhs))),
        lhs=lhs,
        rhs=rhs,
    )
