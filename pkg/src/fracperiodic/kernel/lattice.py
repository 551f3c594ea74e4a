"""
The periodized kernel H(z) = sum_n |z - 2πn|^{-(1+2s)} on 0 < z < 2π.

The direct evaluation sums |n| < N exactly and replaces the two tails by
Euler-Maclaurin through the f'(N)/12 term. Each tail summand
f(t) = (2πt ± z)^{-α} is completely monotone, so the first omitted term
|f'''(N)|/720 bounds the remainder; that is the certified err_bound.
"""
import math

import mpmath
import numpy as np
from loguru import logger
from scipy import special

from fracperiodic import constants
from fracperiodic.space.fields import FracOrder

DIRECT = 'direct'
HURWITZ = 'hurwitz'


def _check_offsets(z, period):
    z = np.asarray(z, dtype=float)
    assert np.all((z > 0.0) & (z < period)), f'Kernel offsets must lie in (0, {period:.6g}).'
    return z


def _tail(alpha, period, n, c):
    """Euler-Maclaurin tail sum_{m>=n} (period*m + c)^{-alpha} and its remainder bound."""
    t = period * n + c
    integral = t ** (1.0 - alpha) / (period * (alpha - 1.0))
    f = t ** (-alpha)
    df = -alpha * period * t ** (-alpha - 1.0)
    d3f = -alpha * (alpha + 1.0) * (alpha + 2.0) * period ** 3 * t ** (-alpha - 3.0)
    return integral + f / 2.0 - df / 12.0, np.abs(d3f) / 720.0


def lattice_sum(z, s, n_terms, period=constants.TWO_PI, include_origin=True):
    """Direct sum over |n| < n_terms plus both Euler-Maclaurin tails."""
    alpha = FracOrder.of(s).alpha
    z = np.asarray(z, dtype=float)
    n = np.arange(1, n_terms, dtype=float)

    total = np.zeros_like(z)
    if include_origin:
        total = total + z ** (-alpha)
    if len(n):
        total = total + np.sum(np.subtract.outer(period * n, z) ** (-alpha), axis=0)
        total = total + np.sum(np.add.outer(period * n, z) ** (-alpha), axis=0)

    left, left_err = _tail(alpha, period, n_terms, -z)
    right, right_err = _tail(alpha, period, n_terms, z)
    return total + left + right, left_err + right_err


def eval_H(z, s, rel_tol=constants.KERNEL_REL_TOL, method=DIRECT):
    """
    Evaluate H at offsets z in (0, 2π), scalar or array.

    Returns (value, err_bound). The direct method doubles the number of
    exactly summed lattice terms until err_bound <= rel_tol * value and
    raises ValueError when the term cap is reached first. The Hurwitz
    method uses H = (2π)^{-α} [ζ(α, z/2π) + ζ(α, 1 - z/2π)].
    """
    order = FracOrder.of(s)
    z = _check_offsets(z, constants.TWO_PI)
    assert rel_tol > 0, f'rel_tol must be positive, got {rel_tol}.'

    if method == HURWITZ:
        alpha = order.alpha
        q = z / constants.TWO_PI
        value = constants.TWO_PI ** (-alpha) * (special.zeta(alpha, q) + special.zeta(alpha, 1.0 - q))
        return value, np.abs(value) * np.finfo(float).eps * 16

    assert method == DIRECT, f'Unknown kernel method {method!r}.'
    n_terms = constants.KERNEL_MIN_TERMS
    while n_terms <= constants.KERNEL_MAX_TERMS:
        value, err = lattice_sum(z, order, n_terms)
        if np.all(err <= rel_tol * value):
            logger.debug(f'H converged with {n_terms} lattice terms at s = {order.s}.')
            return value, err
        n_terms *= 2

    raise ValueError(f'rel_tol = {rel_tol} unachievable with {constants.KERNEL_MAX_TERMS} lattice terms.')


def eval_H_regular(z, s):
    """H(z) - |z|^{-(1+2s)}, the part of the lattice sum that is smooth near z = 0."""
    alpha = FracOrder.of(s).alpha
    q = np.asarray(z, dtype=float) / constants.TWO_PI
    return constants.TWO_PI ** (-alpha) * (special.zeta(alpha, 1.0 + q) + special.zeta(alpha, 1.0 - q))


def eval_H_period(z, s, period, rel_tol=constants.KERNEL_REL_TOL):
    """Kernel of the period-T lattice, H_T(z) = (2π/T)^{1+2s} H(2πz/T)."""
    order = FracOrder.of(s)
    z = _check_offsets(z, period)
    ratio = constants.TWO_PI / period
    value, err = eval_H(ratio * z, order, rel_tol)
    scale = ratio ** order.alpha
    return scale * value, scale * err


def period_scaling_gap(s, period=constants.PERIOD_SCALING_CHECK, n_samples=64):
    """Largest relative gap between the scaled kernel and a direct period-T lattice sum."""
    z = period * (np.arange(n_samples) + 0.5) / n_samples
    scaled, _ = eval_H_period(z, s, period)
    direct, _ = lattice_sum(z, s, n_terms=4096, period=period)
    return float(np.max(np.abs(scaled - direct) / direct))


def normalization_constant(s) -> float:
    """c_1(s) = 2^{2s} s Γ(s + 1/2) / (√π Γ(1 - s)), making cos(kx) an eigenfunction with eigenvalue k^{2s}."""
    s = FracOrder.of(s).s
    return 2.0 ** (2.0 * s) * s * math.gamma(s + 0.5) / (math.sqrt(math.pi) * math.gamma(1.0 - s))


def riemann_zeta(x) -> float:
    # Also needed at negative arguments, where scipy's Riemann zeta is not defined
    return float(mpmath.zeta(x))
