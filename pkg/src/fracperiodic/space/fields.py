"""
Representations of 2π-periodic real functions.

A SpectralField stores the truncated Fourier series

    u(x) = a_0/2 + sum_{j=1}^{n} a_j cos(jx) + b_j sin(jx)

and is the canonical solution representation. A GridField holds the same
function sampled at x_i = 2πi/n_pts. Conversions go through numpy's real FFT.
"""
from dataclasses import dataclass

import numpy as np

from fracperiodic import constants


@dataclass(frozen=True)
class FracOrder:
    s: float

    def __post_init__(self):
        assert isinstance(self.s, (int, float, np.floating)), f'Order must be a real number, got {type(self.s)}!'
        assert 0.0 < float(self.s) < 1.0, f'Order must satisfy 0 < s < 1, got s = {self.s}.'
        object.__setattr__(self, 's', float(self.s))

    @classmethod
    def of(cls, s):
        return s if isinstance(s, FracOrder) else cls(s)

    @property
    def alpha(self):
        # Decay exponent of the whole-line kernel |z|^{-(1+2s)}
        return 1.0 + 2.0 * self.s

    def __float__(self):
        return self.s


def _frozen(values):
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SpectralField:
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.a, dtype=float))
        b = np.atleast_1d(np.asarray(self.b, dtype=float)) if np.size(self.b) else np.zeros(0)
        assert a.ndim == 1 and b.ndim == 1, 'Coefficient arrays must be one-dimensional.'
        assert len(a) == len(b) + 1, f'Expected len(a) = len(b) + 1, got {len(a)} and {len(b)}.'
        assert np.all(np.isfinite(a)) and np.all(np.isfinite(b)), 'Field coefficients must be finite.'
        object.__setattr__(self, 'a', _frozen(a))
        object.__setattr__(self, 'b', _frozen(b))

    @property
    def n_modes(self):
        return len(self.b)

    @classmethod
    def zeros(cls, n_modes):
        return cls(np.zeros(n_modes + 1), np.zeros(n_modes))

    @classmethod
    def constant(cls, value, n_modes):
        a = np.zeros(n_modes + 1)
        a[0] = 2.0 * value
        return cls(a, np.zeros(n_modes))

    @classmethod
    def cosine(cls, k, n_modes, amplitude=1.0):
        assert 0 <= k <= n_modes, f'Mode {k} outside 0..{n_modes}.'
        if k == 0:
            return cls.constant(amplitude, n_modes)
        a = np.zeros(n_modes + 1)
        a[k] = amplitude
        return cls(a, np.zeros(n_modes))

    @classmethod
    def sine(cls, k, n_modes, amplitude=1.0):
        assert 1 <= k <= n_modes, f'Mode {k} outside 1..{n_modes}.'
        b = np.zeros(n_modes)
        b[k - 1] = amplitude
        return cls(np.zeros(n_modes + 1), b)

    @classmethod
    def from_complex(cls, c):
        """Build from c_j = a_j - i b_j (j = 0..n), with c_0 = a_0."""
        c = np.asarray(c, dtype=complex)
        return cls(c.real.copy(), -c[1:].imag.copy())

    @classmethod
    def random(cls, n_modes, rng, decay=1.0, mean=True):
        j = np.arange(n_modes + 1, dtype=float)
        scale = 1.0 / (1.0 + j) ** decay
        a = rng.standard_normal(n_modes + 1) * scale
        b = rng.standard_normal(n_modes) * scale[1:]
        if not mean:
            a[0] = 0.0
        return cls(a, b)

    def complex_coefficients(self):
        c = np.empty(self.n_modes + 1, dtype=complex)
        c[0] = self.a[0]
        c[1:] = self.a[1:] - 1j * self.b
        return c

    def wavenumbers(self):
        return np.arange(self.n_modes + 1, dtype=float)

    def mean(self):
        return self.a[0] / 2.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        j = np.arange(1, self.n_modes + 1)
        phase = np.multiply.outer(x, j)
        return self.a[0] / 2.0 + np.cos(phase) @ self.a[1:] + np.sin(phase) @ self.b

    def __add__(self, other):
        if isinstance(other, SpectralField):
            assert self.n_modes == other.n_modes, f'Mode counts differ: {self.n_modes} != {other.n_modes}.'
            return SpectralField(self.a + other.a, self.b + other.b)
        a = self.a.copy()
        a[0] += 2.0 * other
        return SpectralField(a, self.b)

    __radd__ = __add__

    def __neg__(self):
        return SpectralField(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return SpectralField(scalar * self.a, scalar * self.b)

    __rmul__ = __mul__

    def scale_modes(self, multipliers):
        """Multiply mode j (both cosine and sine parts) by multipliers[j]."""
        m = np.asarray(multipliers, dtype=float)
        assert len(m) == self.n_modes + 1, 'One multiplier per mode index is required.'
        return SpectralField(m * self.a, m[1:] * self.b)

    def derivative(self, order=1):
        c = self.complex_coefficients() * (1j * self.wavenumbers()) ** order
        if order > 0:
            c[0] = 0.0
        return SpectralField.from_complex(c)

    def shift(self, tau):
        """Return x -> u(x + tau)."""
        c = self.complex_coefficients() * np.exp(1j * self.wavenumbers() * tau)
        return SpectralField.from_complex(c)

    def resize(self, n_modes):
        a = np.zeros(n_modes + 1)
        b = np.zeros(n_modes)
        m = min(n_modes, self.n_modes)
        a[:m + 1] = self.a[:m + 1]
        b[:m] = self.b[:m]
        return SpectralField(a, b)

    def is_even(self, tol=constants.CONSTANT_FIELD_TOL):
        return bool(np.all(np.abs(self.b) <= tol))

    def is_constant(self, tol=constants.CONSTANT_FIELD_TOL):
        return bool(np.all(np.abs(self.a[1:]) <= tol) and np.all(np.abs(self.b) <= tol))

    def l2_squared(self):
        return np.pi * (self.a[0] ** 2 / 2.0 + np.sum(self.a[1:] ** 2) + np.sum(self.b ** 2))

    def sup_norm(self, n_pts=None):
        n_pts = n_pts or sampling_points(self.n_modes)
        return float(np.max(np.abs(to_grid(self, n_pts).values)))

    def __repr__(self):
        return f'SpectralField(n_modes={self.n_modes})'


@dataclass(frozen=True, eq=False)
class GridField:
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        n = len(v)
        assert v.ndim == 1 and n >= 4, f'A grid needs at least 4 samples, got {n}.'
        assert n & (n - 1) == 0, f'Grid size must be a power of two, got {n}.'
        assert np.all(np.isfinite(v)), 'Grid values must be finite.'
        object.__setattr__(self, 'values', _frozen(v))

    @property
    def n_pts(self):
        return len(self.values)

    @property
    def spacing(self):
        return constants.TWO_PI / self.n_pts

    def nodes(self):
        return grid_nodes(self.n_pts)

    def integral(self):
        return self.spacing * float(np.sum(self.values))

    def __repr__(self):
        return f'GridField(n_pts={self.n_pts})'


def grid_nodes(n_pts, period=constants.TWO_PI):
    return period * np.arange(n_pts) / n_pts


def sampling_points(n_modes, factor=constants.NYQUIST_FACTOR):
    """Smallest power of two at least factor times the Nyquist count 2n+2."""
    need = factor * (2 * n_modes + 2)
    return max(4, 1 << int(np.ceil(np.log2(need))))


def to_grid(u: SpectralField, n_pts: int) -> GridField:
    if n_pts < 2 * u.n_modes + 2:
        raise ValueError(f'Undersampling: n_pts = {n_pts} < 2 * n_modes + 2 = {2 * u.n_modes + 2}.')
    c = np.zeros(n_pts // 2 + 1, dtype=complex)
    c[0] = n_pts * u.a[0] / 2.0
    c[1:u.n_modes + 1] = n_pts / 2.0 * (u.a[1:] - 1j * u.b)
    return GridField(np.fft.irfft(c, n=n_pts))


def from_grid(g: GridField, n_modes: int) -> SpectralField:
    if g.n_pts < 2 * n_modes + 2:
        raise ValueError(f'Undersampling: n_pts = {g.n_pts} < 2 * n_modes + 2 = {2 * n_modes + 2}.')
    c = np.fft.rfft(g.values)[:n_modes + 1]
    a = 2.0 * c.real / g.n_pts
    b = -2.0 * c[1:].imag / g.n_pts
    return SpectralField(a, b)


def sample(u: SpectralField, n_pts: int) -> np.ndarray:
    return to_grid(u, n_pts).values


def project(values, n_modes) -> SpectralField:
    """Least-squares projection of grid samples onto the first n_modes modes."""
    return from_grid(GridField(values), n_modes)


@dataclass(frozen=True, eq=False)
class PeriodicField:
    """
    A T-periodic function u(x) = field(2πx/T), with field a 2π-periodic
    SpectralField in the normalized coordinate.
    """
    field: SpectralField
    period: float = constants.TWO_PI

    def __post_init__(self):
        assert self.period > 0, f'Period must be positive, got {self.period}.'

    def __call__(self, x):
        return self.field(constants.TWO_PI * np.asarray(x, dtype=float) / self.period)

    @property
    def n_modes(self):
        return self.field.n_modes

    def nodes(self, n_pts):
        return grid_nodes(n_pts, self.period)

    def samples(self, n_pts):
        return to_grid(self.field, n_pts).values

    def shift(self, x):
        """Return y -> u(y + x)."""
        return PeriodicField(self.field.shift(constants.TWO_PI * x / self.period), self.period)

    def amplitude(self):
        return self.field.sup_norm()

    def minimum(self, n_pts=None):
        n_pts = n_pts or sampling_points(self.n_modes)
        return float(np.min(self.samples(n_pts)))

    def maximum(self, n_pts=None):
        n_pts = n_pts or sampling_points(self.n_modes)
        return float(np.max(self.samples(n_pts)))

    def __repr__(self):
        return f'PeriodicField(n_modes={self.n_modes}, period={self.period:.6g})'
