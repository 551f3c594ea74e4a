"""
Example equations (−Δ)^s u = lam u + f(u).

Each family fixes lam and f:

    even-power            u + |u|^p
    odd-power-plus        u + |u|^{p-1} u
    odd-power-minus      -u + |u|^{p-1} u
    quadratic-shifted    -u + u^2
    absorbing-power      -u - |u|^p, solved by -w for every positive w solving -w + w^p
    benjamin-ono          -u + u^2, whose derivative is the stationary Benjamin-Ono equation
    bifurcation           lam u + f(u) for any lam and f with f'(0) = 0
"""
from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np

from fracperiodic import constants
from fracperiodic.solvers.nonlinearities import (Nonlinearity, TruncatedNonlinearity, abs_power, negative_abs_power,
                                                 odd_power, square)
from fracperiodic.space.exponents import describe_subcritical, is_subcritical
from fracperiodic.space.fields import FracOrder

EVEN_POWER = 'even-power'
ODD_POWER_PLUS = 'odd-power-plus'
ODD_POWER_MINUS = 'odd-power-minus'
QUADRATIC_SHIFTED = 'quadratic-shifted'
BENJAMIN_ONO = 'benjamin-ono'
ABSORBING_POWER = 'absorbing-power'
BIFURCATION = 'bifurcation'

FAMILIES = (EVEN_POWER, ODD_POWER_PLUS, ODD_POWER_MINUS, QUADRATIC_SHIFTED, BENJAMIN_ONO, ABSORBING_POWER, BIFURCATION)

# Families whose existence argument needs p < (1+2s)/(1-2s) when s < 1/2
SUBCRITICAL_FAMILIES = (ODD_POWER_PLUS, ODD_POWER_MINUS, QUADRATIC_SHIFTED, BENJAMIN_ONO, ABSORBING_POWER)


@dataclass(frozen=True)
class ProblemSpec:
    s: float
    family: str
    lam: float
    nonlinearity: Union[Nonlinearity, TruncatedNonlinearity]
    p: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, 's', FracOrder.of(self.s).s)
        assert self.family in FAMILIES, f'Unknown family {self.family!r}; expected one of {", ".join(FAMILIES)}.'
        if self.family in SUBCRITICAL_FAMILIES:
            assert is_subcritical(self.s, self.p), describe_subcritical(self.s, self.p)
        if self.family == BENJAMIN_ONO:
            assert self.s > constants.MIN_BO_ORDER, f'The Benjamin-Ono family needs s > 1/6, got s = {self.s}.'

    def rhs(self, values):
        values = np.asarray(values, dtype=float)
        return self.lam * values + self.nonlinearity.value(values)

    def with_lambda(self, lam):
        return replace(self, lam=float(lam))

    def with_nonlinearity(self, f):
        return replace(self, nonlinearity=f)

    def describe(self):
        p = '' if self.p is None else f', p = {self.p:g}'
        return f'{self.family} (s = {self.s:g}{p}, lam = {self.lam:g}, f = {self.nonlinearity.name})'


def even_power(s, p) -> ProblemSpec:
    return ProblemSpec(s=s, family=EVEN_POWER, lam=1.0, nonlinearity=abs_power(p), p=float(p))


def odd_power_plus(s, p) -> ProblemSpec:
    return ProblemSpec(s=s, family=ODD_POWER_PLUS, lam=1.0, nonlinearity=odd_power(p), p=float(p))


def odd_power_minus(s, p) -> ProblemSpec:
    return ProblemSpec(s=s, family=ODD_POWER_MINUS, lam=-1.0, nonlinearity=odd_power(p), p=float(p))


def quadratic_shifted(s) -> ProblemSpec:
    return ProblemSpec(s=s, family=QUADRATIC_SHIFTED, lam=-1.0, nonlinearity=square(), p=2.0)


def benjamin_ono(s=0.5) -> ProblemSpec:
    return ProblemSpec(s=s, family=BENJAMIN_ONO, lam=-1.0, nonlinearity=square(), p=2.0)


def absorbing_power(s, p) -> ProblemSpec:
    return ProblemSpec(s=s, family=ABSORBING_POWER, lam=-1.0, nonlinearity=negative_abs_power(p), p=float(p))


def bifurcation(s, f, lam=0.0) -> ProblemSpec:
    return ProblemSpec(s=s, family=BIFURCATION, lam=float(lam), nonlinearity=f, p=f.power)


def by_family(family, s, p=None) -> ProblemSpec:
    if family == EVEN_POWER:
        return even_power(s, p)
    if family == ODD_POWER_PLUS:
        return odd_power_plus(s, p)
    if family == ODD_POWER_MINUS:
        return odd_power_minus(s, p)
    if family == QUADRATIC_SHIFTED:
        return quadratic_shifted(s)
    if family == BENJAMIN_ONO:
        return benjamin_ono(s)
    if family == ABSORBING_POWER:
        return absorbing_power(s, p)
    raise ValueError(f'Family {family!r} has no fixed right-hand side.')
