import math
from dataclasses import dataclass, field

from loguru import logger

from fracperiodic import constants
from fracperiodic.space.fields import FracOrder

INFINITE = math.inf

# Termination reasons of the bootstrap recursion
BOUNDED = 'bounded'          # q_j/p > 1/(2s): u is in L^infinity
THRESHOLD = 'threshold'      # q_j/p = 1/(2s): u is in L^m for every m > 1
NOT_INCREASING = 'not-increasing'
CAP = 'cap'


def critical_exponent(s) -> float:
    """2*_s = 2/(1 - 2s) for s < 1/2, infinite otherwise."""
    s = FracOrder.of(s).s
    if s >= 0.5:
        return INFINITE
    return 2.0 / (1.0 - 2.0 * s)


def subcritical_bound(s) -> float:
    """Upper bound (1 + 2s)/(1 - 2s) = 2*_s - 1 on the growth exponent."""
    s = FracOrder.of(s).s
    if s >= 0.5:
        return INFINITE
    return (1.0 + 2.0 * s) / (1.0 - 2.0 * s)


def is_subcritical(s, p) -> bool:
    assert p > 1, f'Growth exponent must satisfy p > 1, got p = {p}.'
    s = FracOrder.of(s).s
    return s >= 0.5 or p < subcritical_bound(s)


def describe_subcritical(s, p) -> str:
    s = FracOrder.of(s).s
    return f'p = {p} must satisfy p < (1+2s)/(1-2s) = {subcritical_bound(s):.12g} for s = {s}'


@dataclass
class ExponentChain:
    s: float
    p: float
    chain: list = field(default_factory=list)
    terminated: bool = False
    reason: str = ''

    @property
    def bounded(self):
        return self.reason == BOUNDED

    @property
    def every_lm(self):
        return self.reason == THRESHOLD


def bootstrap_chain(s, p, q0=None, max_steps=constants.BOOTSTRAP_MAX_STEPS) -> ExponentChain:
    """
    Iterate q_{j+1} = q_j / (p - 2 q_j s) starting at q_0 = 2*_s.

    The chain stops as soon as q_j/p >= 1/(2s); equality is reported as the
    threshold case. A chain that stops increasing, or runs into max_steps,
    is reported as not terminated.
    """
    order = FracOrder.of(s)
    s = order.s
    assert s < 0.5, f'The exponent chain needs s < 1/2, got s = {s}.'
    assert p > 1, f'Growth exponent must satisfy p > 1, got p = {p}.'
    q = critical_exponent(order) if q0 is None else float(q0)
    assert q > 0, f'Starting exponent must be positive, got q0 = {q}.'

    result = ExponentChain(s=s, p=p, chain=[q])
    limit = 1.0 / (2.0 * s)

    for _ in range(max_steps):
        ratio = q / p
        if math.isclose(ratio, limit, rel_tol=constants.THRESHOLD_REL_TOL):
            result.terminated, result.reason = True, THRESHOLD
            return result
        if ratio > limit:
            result.terminated, result.reason = True, BOUNDED
            return result

        q_next = q / (p - 2.0 * q * s)
        if q_next <= q:
            result.reason = NOT_INCREASING
            logger.warning(f'Exponent chain stalled at q = {q:.6g} for s = {s}, p = {p}.')
            return result

        result.chain.append(q_next)
        q = q_next

    result.reason = CAP
    logger.warning(f'Exponent chain hit the {max_steps} step cap for s = {s}, p = {p}.')
    return result
