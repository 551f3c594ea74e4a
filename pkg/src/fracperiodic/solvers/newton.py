"""
Newton's method on truncated Fourier coefficients.

A TrigBasis maps a coefficient vector to grid samples and back, so that
nonlinear terms are evaluated pointwise on the grid and projected, and the
Jacobian of a projected nonlinearity is analysis @ diag(f'(u)) @ synthesis.
"""
import numpy as np
from loguru import logger
from scipy import linalg

from fracperiodic import constants
from fracperiodic.exceptions import ConvergenceError
from fracperiodic.operators.spectral import fractional_laplacian
from fracperiodic.space.fields import SpectralField, grid_nodes, sampling_points, to_grid
from fracperiodic.space.norms import multipliers


class TrigBasis:
    def __init__(self, n_modes, even=True, n_pts=None):
        self.n_modes = int(n_modes)
        self.even = even
        self.n_pts = n_pts or sampling_points(self.n_modes)
        assert self.n_pts >= 2 * self.n_modes + 2, f'Undersampling: n_pts = {self.n_pts} for {self.n_modes} modes.'

        x = grid_nodes(self.n_pts)
        j = np.arange(self.n_modes + 1)
        cos = np.cos(np.outer(x, j))
        columns = [cos]
        if not even:
            columns.append(np.sin(np.outer(x, j[1:])))
        basis = np.hstack(columns)

        # u = a_0/2 + ..., and a_j = (2/N) sum_i u_i cos(j x_i)
        self.synthesis = basis.copy()
        self.synthesis[:, 0] = 0.5
        self.analysis = (2.0 / self.n_pts) * basis.T

    @property
    def dim(self):
        return self.synthesis.shape[1]

    def symbol(self, s):
        m = multipliers(s, self.n_modes)
        return m if self.even else np.concatenate([m, m[1:]])

    def to_field(self, x) -> SpectralField:
        a = np.asarray(x[:self.n_modes + 1], dtype=float)
        b = np.zeros(self.n_modes) if self.even else np.asarray(x[self.n_modes + 1:], dtype=float)
        return SpectralField(a, b)

    def from_field(self, u: SpectralField) -> np.ndarray:
        assert u.n_modes == self.n_modes, f'Basis has {self.n_modes} modes, field has {u.n_modes}.'
        if self.even:
            return np.array(u.a)
        return np.concatenate([u.a, u.b])

    def values(self, x):
        return self.synthesis @ x

    def project(self, values):
        return self.analysis @ values

    def project_jacobian(self, slopes):
        """Jacobian of x -> project(f(values(x))) given slopes = f'(values(x))."""
        return self.analysis @ (slopes[:, None] * self.synthesis)


def newton(residual, jacobian, x0, tol=constants.NEWTON_TOL, max_iter=constants.NEWTON_MAX_ITER):
    """
    Solve residual(x) = 0 from x0. Steps are least-squares solutions of the
    linearized system, so a rank-deficient Jacobian yields the minimum-norm step.
    Returns (x, residual_norm, iterations).
    """
    x = np.array(x0, dtype=float)
    r = residual(x)
    norm = float(np.max(np.abs(r)))

    for it in range(1, max_iter + 1):
        if norm <= tol:
            return x, norm, it - 1
        step, *_ = linalg.lstsq(jacobian(x), -r)
        x = x + step
        r = residual(x)
        norm = float(np.max(np.abs(r)))
        if not np.isfinite(norm):
            break
        logger.trace(f'Newton iteration {it}: residual {norm:.3e}')

    if norm <= tol:
        return x, norm, max_iter
    raise ConvergenceError(f'Newton did not reach {tol:.1e} in {max_iter} iterations (residual {norm:.3e}).',
                           residual=norm)


def pointwise_residual(u: SpectralField, s, lam, f, n_pts=None) -> float:
    """Sup over the grid of |Lu - lam u - f(u)|, with L applied spectrally."""
    n_pts = n_pts or sampling_points(u.n_modes)
    values = to_grid(u, n_pts).values
    lu = to_grid(fractional_laplacian(u, s), n_pts).values
    return float(np.max(np.abs(lu - lam * values - f.value(values))))


def solve_semilinear(u0: SpectralField, s, lam, f, even=None,
                     tol=constants.NEWTON_TOL, max_iter=constants.NEWTON_MAX_ITER) -> SpectralField:
    """Newton on the Fourier coefficients of Lu = lam u + f(u), seeded with u0."""
    even = u0.is_even() if even is None else even
    basis = TrigBasis(u0.n_modes, even)
    diagonal = basis.symbol(s) - lam

    def residual(x):
        return diagonal * x - basis.project(f.value(basis.values(x)))

    def jacobian(x):
        return np.diag(diagonal) - basis.project_jacobian(f.derivative(basis.values(x)))

    x, norm, iterations = newton(residual, jacobian, basis.from_field(u0), tol, max_iter)
    logger.debug(f'Semilinear Newton converged in {iterations} iterations, residual {norm:.2e}.')
    return basis.to_field(x)
