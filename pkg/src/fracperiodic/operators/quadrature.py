"""
Principal-value quadrature for Lu(x) = c_1 ∫ (u(x) - u(y)) H(x - y) dy.

At node x_i the integrand is paired around the singularity,
ψ_i(z) = u(x_i) - (u(x_i - z) + u(x_i + z))/2, and summed with the punctured
trapezoid rule over the offsets z_m = mh, m = 1..N-1. Near z = 0 the integrand
behaves like |z|^{1-2s} (-u''/2 - u''''z^2/24 - ...), and the generalized
Euler-Maclaurin expansion for periodic integrands with an algebraic point
singularity gives the local correction

    ζ(2s-1) u''(x_i) h^{2-2s} + ζ(2s-3) u''''(x_i) h^{4-2s} / 12,

with the derivatives taken spectrally from the samples.
"""
from dataclasses import dataclass

import numpy as np

from fracperiodic import constants
from fracperiodic.kernel.lattice import riemann_zeta
from fracperiodic.kernel.table import KernelTable, build_table
from fracperiodic.space.fields import FracOrder, GridField


@dataclass(frozen=True)
class SingularRule:
    """Coefficients of the local correction terms in powers of h."""
    order: int
    zeta_low: float
    zeta_high: float
    power_low: float
    power_high: float


class QuadratureOperator:
    def __init__(self, s, n_pts=constants.QUADRATURE_RESOLUTION, period=constants.TWO_PI):
        order = FracOrder.of(s)
        self.s = order.s
        self.n_pts = int(n_pts)
        self.period = float(period)
        self.table: KernelTable = build_table(order, self.n_pts, self.period)
        self.singular_rule = SingularRule(
            order=2,
            zeta_low=riemann_zeta(2.0 * self.s - 1.0),
            zeta_high=riemann_zeta(2.0 * self.s - 3.0),
            power_low=2.0 - 2.0 * self.s,
            power_high=4.0 - 2.0 * self.s,
        )

        # Half-period weights: pairs (m, N - m) share one weight by symmetry of H
        half = self.n_pts // 2
        w = self.table.weights
        self.pair_weights = w[:half - 1]
        self.middle_weight = w[half - 1]

    @property
    def spacing(self):
        return self.period / self.n_pts

    def _values(self, u):
        values = u.values if isinstance(u, GridField) else np.asarray(u, dtype=float)
        assert len(values) == self.n_pts, f'Operator built for {self.n_pts} points, got {len(values)}.'
        return values

    def _derivatives(self, values):
        c = np.fft.rfft(values)
        k = (constants.TWO_PI / self.period) * np.arange(len(c))
        second = np.fft.irfft(-(k ** 2) * c, n=self.n_pts)
        fourth = np.fft.irfft((k ** 4) * c, n=self.n_pts)
        return second, fourth

    def _correction(self, second, fourth):
        rule = self.singular_rule
        h = self.spacing
        return (rule.zeta_low * second * h ** rule.power_low
                + rule.zeta_high * fourth * h ** rule.power_high / 12.0)

    def _punctured_sum(self, values):
        total = np.zeros_like(values)
        for m, w in enumerate(self.pair_weights, start=1):
            total += w * (2.0 * values - np.roll(values, m) - np.roll(values, -m))
        total += self.middle_weight * (values - np.roll(values, self.n_pts // 2))
        return total

    def apply(self, u, derivatives=None) -> GridField:
        """
        Apply the operator at every node. derivatives = (u'', u'''') at the
        nodes replaces the spectral derivatives in the local correction, for
        samples of a function that is not band-limited.
        """
        values = self._values(u)
        second, fourth = self._derivatives(values) if derivatives is None else derivatives
        c1 = self.table.normalization
        return GridField(self._punctured_sum(values) + c1 * self._correction(second, fourth))

    def apply_at(self, u, x_index) -> float:
        values = self._values(u)
        i = int(x_index) % self.n_pts
        half = self.n_pts // 2
        m = np.arange(1, half)
        psi = 2.0 * values[i] - values[(i - m) % self.n_pts] - values[(i + m) % self.n_pts]
        total = self.pair_weights @ psi + self.middle_weight * (values[i] - values[(i + half) % self.n_pts])
        second, fourth = self._derivatives(values)
        c1 = self.table.normalization
        return float(total + c1 * self._correction(second[i], fourth[i]))

    def symbol(self) -> np.ndarray:
        """Eigenvalue of the discrete operator on e^{ijx}, j = 0..N/2."""
        half = self.n_pts // 2
        full = np.zeros(self.n_pts)
        full[1:] = self.table.weights
        j = np.arange(half + 1)
        k = (constants.TWO_PI / self.period) * j
        smooth = full.sum() - np.fft.rfft(full).real
        rule = self.singular_rule
        h = self.spacing
        correction = (-rule.zeta_low * k ** 2 * h ** rule.power_low
                      + rule.zeta_high * k ** 4 * h ** rule.power_high / 12.0)
        return smooth + self.table.normalization * correction

    def spectrum(self) -> np.ndarray:
        """All N eigenvalues of the circulant operator, sorted."""
        sym = self.symbol()
        return np.sort(np.concatenate([sym, sym[1:-1]]))


def apply_quadrature(op: QuadratureOperator, u: GridField, x_index) -> float:
    return op.apply_at(u, x_index)
