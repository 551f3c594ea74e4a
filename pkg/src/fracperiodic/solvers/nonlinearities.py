from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


@dataclass(frozen=True)
class Nonlinearity:
    name: str
    value: Callable
    derivative: Callable
    # Degree p of positive homogeneity, f(ct) = c^p f(t) for c > 0, when there is one
    power: Optional[float] = None
    odd: bool = False

    def __call__(self, t):
        return self.value(np.asarray(t, dtype=float))


def square():
    return Nonlinearity('u2', lambda t: t * t, lambda t: 2.0 * t, power=2.0)


def cube():
    return Nonlinearity('u3', lambda t: t ** 3, lambda t: 3.0 * t * t, power=3.0, odd=True)


def abs_power(p):
    """|t|^p, the even-power family."""
    assert p > 1, f'Power nonlinearity needs p > 1, got p = {p}.'
    return Nonlinearity(f'abs_power({p:g})', lambda t: np.abs(t) ** p,
                        lambda t: p * np.sign(t) * np.abs(t) ** (p - 1.0), power=float(p))


def odd_power(p):
    """|t|^{p-1} t, the odd-power family."""
    assert p > 1, f'Power nonlinearity needs p > 1, got p = {p}.'
    return Nonlinearity(f'odd_power({p:g})', lambda t: np.abs(t) ** (p - 1.0) * t,
                        lambda t: p * np.abs(t) ** (p - 1.0), power=float(p), odd=True)


def negative_abs_power(p):
    """-|t|^p; -w solves the absorbing equation whenever w > 0 solves the even one."""
    assert p > 1, f'Power nonlinearity needs p > 1, got p = {p}.'
    return Nonlinearity(f'negative_abs_power({p:g})', lambda t: -np.abs(t) ** p,
                        lambda t: -p * np.sign(t) * np.abs(t) ** (p - 1.0), power=float(p))


def zero():
    return Nonlinearity('zero', np.zeros_like, np.zeros_like, power=None, odd=True)


def by_name(name, p=None):
    """Resolve a CLI name: u2, u3, zero, abs_power or odd_power (the latter two need p)."""
    if name == 'u2':
        return square()
    if name == 'u3':
        return cube()
    if name == 'zero':
        return zero()
    if name in ('abs_power', 'custom_even'):
        return abs_power(p)
    if name in ('odd_power', 'custom'):
        return odd_power(p)
    raise ValueError(f'Unknown nonlinearity {name!r}; expected u2, u3, zero, abs_power, odd_power or custom.')


@dataclass(frozen=True)
class TruncatedNonlinearity:
    base: Nonlinearity
    bound: float

    @property
    def name(self):
        return f'truncated({self.base.name})'

    @property
    def power(self):
        return None

    @property
    def odd(self):
        return self.base.odd

    def value(self, t):
        t = np.asarray(t, dtype=float)
        f = self.base.value
        df = self.base.derivative
        upper = f(np.float64(1.0)) + df(np.float64(1.0)) * (t - 1.0)
        lower = f(np.float64(-1.0)) + df(np.float64(-1.0)) * (t + 1.0)
        inner = f(np.clip(t, -1.0, 1.0))
        return np.where(t > 1.0, upper, np.where(t < -1.0, lower, inner))

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        df = self.base.derivative
        inner = df(np.clip(t, -1.0, 1.0))
        return np.where(t > 1.0, df(np.float64(1.0)), np.where(t < -1.0, df(np.float64(-1.0)), inner))

    def __call__(self, t):
        return self.value(t)


def truncate_nonlinearity(f: Nonlinearity, n_points=4001) -> TruncatedNonlinearity:
    """
    Keep f on [-1, 1] and continue it linearly with a C^1 join, so that
    |f~(t)| <= C|t| globally. Rejects f with f'(0) != 0.
    """
    step = 1e-6
    slope = (f.value(np.float64(step)) - f.value(np.float64(-step))) / (2.0 * step)
    if abs(float(f.derivative(np.float64(0.0)))) > 1e-8 or abs(float(slope)) > 1e-5:
        raise ValueError(f"{f.name} has f'(0) = {float(slope):.6g} != 0; truncation needs f'(0) = 0.")

    t = np.linspace(-1.0, 1.0, n_points)
    t = t[t != 0.0]
    inner = float(np.max(np.abs(f.value(t)) / np.abs(t)))
    ends = [abs(float(f.value(np.float64(e)))) for e in (-1.0, 1.0)]
    slopes = [abs(float(f.derivative(np.float64(e)))) for e in (-1.0, 1.0)]
    return TruncatedNonlinearity(base=f, bound=max([inner] + ends + slopes))
