from dataclasses import dataclass

import numpy as np

from fracperiodic import constants
from fracperiodic.space.fields import FracOrder, SpectralField
from fracperiodic.space.norms import multipliers


@dataclass(frozen=True, eq=False)
class SpectralOperator:
    s: float
    n_modes: int
    multipliers: np.ndarray
    period: float = constants.TWO_PI

    @classmethod
    def build(cls, s, n_modes, period=constants.TWO_PI):
        order = FracOrder.of(s)
        # Mode j of a T-periodic field has wavenumber 2πj/T
        m = (constants.TWO_PI / period) ** (2.0 * order.s) * multipliers(order, n_modes)
        m.setflags(write=False)
        return cls(s=order.s, n_modes=n_modes, multipliers=m, period=float(period))

    def resolvent(self, shift=1.0):
        """Diagonal of (L + shift)^{-1}."""
        return 1.0 / (self.multipliers + shift)


def apply_spectral(op: SpectralOperator, u: SpectralField) -> SpectralField:
    assert op.n_modes == u.n_modes, f'Operator built for {op.n_modes} modes, field has {u.n_modes}.'
    return u.scale_modes(op.multipliers)


def fractional_laplacian(u: SpectralField, s, period=constants.TWO_PI) -> SpectralField:
    return apply_spectral(SpectralOperator.build(s, u.n_modes, period), u)
