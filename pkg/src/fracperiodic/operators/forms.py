"""
The weak bilinear form B(u, v) = ½ ∫∫ (u(x)-u(y))(v(x)-v(y)) c_1 H(x-y) dy dx
and its independent quadrature realizations.
"""
import numpy as np
from scipy import integrate

from fracperiodic import constants
from fracperiodic.kernel.lattice import eval_H_regular, normalization_constant
from fracperiodic.operators.quadrature import QuadratureOperator
from fracperiodic.space.fields import FracOrder, SpectralField, sampling_points, to_grid
from fracperiodic.space.norms import gagliardo_inner, inner_product_X


def bilinear_form(u: SpectralField, v: SpectralField, s) -> float:
    """Closed form π Σ j^{2s} (a_j a'_j + b_j b'_j)."""
    return gagliardo_inner(u, v, s)


def operator_pairing(u: SpectralField, v: SpectralField, s, n_pts=constants.QUADRATURE_RESOLUTION) -> float:
    """∫ (Lu) v with L applied by quadrature and the outer integral by the trapezoid rule."""
    op = QuadratureOperator(s, n_pts)
    lu = op.apply(to_grid(u, n_pts)).values
    return float(op.spacing * lu @ to_grid(v, n_pts).values)


def _difference_quotient(u: SpectralField, z: float) -> SpectralField:
    # Coefficients of (u(x) - u(x - z))/z; exact at z = 0 through sinc
    j = u.wavenumbers()
    factor = 1j * j * np.exp(-0.5j * j * z) * np.sinc(j * z / constants.TWO_PI)
    return SpectralField.from_complex(u.complex_coefficients() * factor)


def gagliardo_quadrature(u: SpectralField, v: SpectralField, s, n_pts=None) -> float:
    """
    B(u, v) as an iterated integral: D(z) = ½ ∫ Δu Δv dx by the trapezoid rule
    on an exact grid, then ∫ c_1 H(z) D(z) dz over (0, 2π) by adaptive quadrature.
    The |z|^{-(1+2s)} part is integrated with an algebraic weight at z = 0.
    """
    assert u.n_modes == v.n_modes, f'Mode counts differ: {u.n_modes} != {v.n_modes}.'
    order = FracOrder.of(s)
    n_pts = n_pts or sampling_points(u.n_modes)
    h = constants.TWO_PI / n_pts
    c1 = normalization_constant(order)

    def d_over_z2(z):
        du = to_grid(_difference_quotient(u, z), n_pts).values
        dv = to_grid(_difference_quotient(v, z), n_pts).values
        return 0.5 * h * float(du @ dv)

    # D is even about π, as is H, so integrate over (0, π] and double
    singular, _ = integrate.quad(d_over_z2, 0.0, np.pi, weight='alg', wvar=(1.0 - 2.0 * order.s, 0.0),
                                 epsabs=1e-13, epsrel=1e-12, limit=200)
    regular, _ = integrate.quad(lambda z: d_over_z2(z) * z ** 2 * float(eval_H_regular(z, order)),
                                0.0, np.pi, epsabs=1e-13, epsrel=1e-12, limit=200)
    return 2.0 * c1 * (singular + regular)


def inner_product_quadrature(u: SpectralField, v: SpectralField, s, n_pts=None) -> float:
    n_pts = n_pts or sampling_points(u.n_modes)
    l2 = constants.TWO_PI / n_pts * float(to_grid(u, n_pts).values @ to_grid(v, n_pts).values)
    return gagliardo_quadrature(u, v, s, n_pts) + l2


def gram_matrix(basis, s, quadrature=False):
    size = len(basis)
    gram = np.zeros((size, size))
    form = inner_product_quadrature if quadrature else inner_product_X
    for i in range(size):
        for j in range(i, size):
            value = form(basis[i], basis[j], s)
            gram[i, j] = gram[j, i] = value
    return gram


def trigonometric_basis(n_max):
    """[1, cos x, sin x, ..., cos n_max x, sin n_max x] as fields with n_max modes."""
    basis = [SpectralField.constant(1.0, n_max)]
    for j in range(1, n_max + 1):
        basis.append(SpectralField.cosine(j, n_max))
        basis.append(SpectralField.sine(j, n_max))
    return basis
