"""
Closed forms of the X inner product.

With the normalized kernel the orthogonality relations read
<cos ix, cos jx> = <sin ix, sin jx> = (i^{2s} + 1) π δ_ij and <1, 1> = 2π,
so every quantity below is a weighted sum over Fourier coefficients.
"""
import numpy as np

from fracperiodic.space.fields import FracOrder, SpectralField


def _check_pair(u: SpectralField, v: SpectralField):
    assert u.n_modes == v.n_modes, f'Mode counts differ: {u.n_modes} != {v.n_modes}.'


def multipliers(s, n_modes):
    """j^{2s} for j = 0..n_modes, with the zero mode mapped to zero."""
    s = FracOrder.of(s).s
    j = np.arange(n_modes + 1, dtype=float)
    return j ** (2.0 * s)


def l2_inner(u: SpectralField, v: SpectralField) -> float:
    _check_pair(u, v)
    return float(np.pi * (u.a[0] * v.a[0] / 2.0 + u.a[1:] @ v.a[1:] + u.b @ v.b))


def gagliardo_inner(u: SpectralField, v: SpectralField, s) -> float:
    _check_pair(u, v)
    m = multipliers(s, u.n_modes)[1:]
    return float(np.pi * (m @ (u.a[1:] * v.a[1:]) + m @ (u.b * v.b)))


def gagliardo_part(u: SpectralField, s) -> float:
    """B(u) = ||u||^2 - int u^2 = π Σ j^{2s} (a_j^2 + b_j^2)."""
    return gagliardo_inner(u, u, s)


def inner_product_X(u: SpectralField, v: SpectralField, s) -> float:
    return gagliardo_inner(u, v, s) + l2_inner(u, v)


def norm_X_squared(u: SpectralField, s) -> float:
    return inner_product_X(u, u, s)


def norm_X(u: SpectralField, s) -> float:
    return float(np.sqrt(max(norm_X_squared(u, s), 0.0)))


def normalize_X(u: SpectralField, s, radius=1.0) -> SpectralField:
    n = norm_X(u, s)
    assert n > 0, 'Cannot normalize the zero field.'
    return u * (radius / n)
