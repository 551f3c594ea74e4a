"""
The solution operator K = (L + 1)^{-1}, eigenvalue verification of the
quadrature operator, and the Rayleigh minimum over the tail spaces F_k.
"""
from dataclasses import dataclass, field

import numpy as np
from loguru import logger
from scipy import linalg

from fracperiodic import constants
from fracperiodic.exceptions import VerificationError
from fracperiodic.operators.forms import gram_matrix, inner_product_quadrature
from fracperiodic.operators.quadrature import QuadratureOperator
from fracperiodic.operators.spectral import SpectralOperator
from fracperiodic.space.fields import FracOrder, SpectralField, grid_nodes, project, sampling_points, to_grid
from fracperiodic.space.norms import norm_X_squared


@dataclass(frozen=True, eq=False)
class ResolventK:
    s: float
    n_modes: int
    diag: np.ndarray

    @classmethod
    def build(cls, s, n_modes):
        op = SpectralOperator.build(s, n_modes)
        return cls(s=op.s, n_modes=n_modes, diag=op.resolvent(1.0))

    def apply(self, f: SpectralField) -> SpectralField:
        assert f.n_modes == self.n_modes, f'Resolvent built for {self.n_modes} modes, field has {f.n_modes}.'
        return f.scale_modes(self.diag)


def solve_linear(f: SpectralField, s) -> SpectralField:
    """The weak solution u of Lu + u = f, coefficient-wise f_j / (j^{2s} + 1)."""
    return ResolventK.build(s, f.n_modes).apply(f)


@dataclass
class EigenRow:
    k: int
    expected: float
    cosine: float
    sine: float

    @property
    def error(self):
        worst = max(abs(self.cosine - self.expected), abs(self.sine - self.expected))
        return worst / self.expected if self.expected > 0 else worst


@dataclass
class EigenReport:
    s: float
    k_max: int
    resolution: int
    tolerance: float
    rows: list = field(default_factory=list)
    threshold: float = 0.0
    count_below: int = 0

    @property
    def expected_count(self):
        return 2 * self.k_max + 1

    @property
    def worst(self):
        return max(self.rows, key=lambda row: row.error)

    @property
    def complete(self):
        return self.count_below == self.expected_count

    @property
    def passed(self):
        return self.complete and self.worst.error <= self.tolerance

    def failures(self):
        failed = [f'k = {row.k}: relative error {row.error:.3e} > {self.tolerance:.1e}'
                  for row in self.rows if row.error > self.tolerance]
        if not self.complete:
            failed.append(f'{self.count_below} discrete eigenvalues below {self.threshold:.6g}, '
                          f'expected {self.expected_count}')
        return failed


def _rayleigh(op: QuadratureOperator, values):
    lu = op.apply(values).values
    return float(lu @ values / (values @ values))


def eigen_verify(s, k_max, resolution=constants.QUADRATURE_RESOLUTION, tol=constants.EIGEN_TOL,
                 strict=False) -> EigenReport:
    """
    Rayleigh quotients of the quadrature operator on cos(kx) and sin(kx),
    k = 0..k_max, against k^{2s}, plus a count of the discrete spectrum below
    k_max^{2s} + gap/2, which must be exactly 2 k_max + 1.
    """
    order = FracOrder.of(s)
    assert k_max >= 0, f'k_max must be nonnegative, got {k_max}.'
    assert 2 * k_max + 2 <= resolution, f'k_max = {k_max} is not resolved by {resolution} points.'

    op = QuadratureOperator(order, resolution)
    x = grid_nodes(resolution)
    report = EigenReport(s=order.s, k_max=k_max, resolution=resolution, tolerance=tol)

    for k in range(k_max + 1):
        expected = float(k) ** (2.0 * order.s) if k else 0.0
        cosine = _rayleigh(op, np.cos(k * x))
        sine = _rayleigh(op, np.sin(k * x)) if k else cosine
        report.rows.append(EigenRow(k=k, expected=expected, cosine=cosine, sine=sine))

    gap = (k_max + 1) ** (2.0 * order.s) - k_max ** (2.0 * order.s)
    report.threshold = k_max ** (2.0 * order.s) + gap / 2.0
    report.count_below = int(np.sum(op.spectrum() < report.threshold))

    logger.info(f'Eigenvalues s = {order.s}, k <= {k_max}: worst relative error {report.worst.error:.2e} '
                f'at k = {report.worst.k}, {report.count_below} below {report.threshold:.4g}.')
    if strict and not report.passed:
        raise VerificationError('Eigenvalue verification failed.', report.failures())
    return report


def _tail_basis(k, n_modes):
    basis = []
    for j in range(k, n_modes + 1):
        basis.append(SpectralField.cosine(j, n_modes))
        basis.append(SpectralField.sine(j, n_modes))
    return basis


def rayleigh_min_Fk(s, k, n_restarts=8, n_modes=None, seed=0):
    """
    Minimize ||u||^2 / ∫u^2 over F_k, the fields whose coefficients below index
    k vanish, truncated at n_modes. Solved as a generalized symmetric eigenproblem
    on the Gram matrices; n_restarts random F_k fields confirm that none of them
    goes below the minimum. Returns (value, minimizer).
    """
    order = FracOrder.of(s)
    assert k >= 1, f'F_k needs k >= 1, got k = {k}.'
    n_modes = n_modes or k + 4

    basis = _tail_basis(k, n_modes)
    stiffness = gram_matrix(basis, order)
    mass = np.diag([b.l2_squared() for b in basis])
    values, vectors = linalg.eigh(stiffness, mass)

    coefficients = vectors[:, 0]
    minimizer = SpectralField.zeros(n_modes)
    for c, b in zip(coefficients, basis):
        minimizer = minimizer + c * b
    value = float(values[0])

    rng = np.random.default_rng(seed)
    for _ in range(n_restarts):
        trial = SpectralField.random(n_modes, rng).scale_modes(
            (np.arange(n_modes + 1) >= k).astype(float))
        quotient = norm_X_squared(trial, order) / trial.l2_squared()
        if quotient < value * (1.0 - 1e-12):
            raise VerificationError(f'A random F_{k} field has Rayleigh quotient {quotient} below {value}.')

    return value, minimizer


def rayleigh_quadrature(u: SpectralField, s, n_pts=None) -> float:
    """||u||^2 / ∫u^2 with ||u||^2 from the double-integral quadrature."""
    return inner_product_quadrature(u, u, s, n_pts) / u.l2_squared()


def random_nonnegative_rhs(rng, n_modes) -> SpectralField:
    """g^2 for a random g of n_modes/2 modes: a trigonometric polynomial that is nonnegative everywhere."""
    g = SpectralField.random(max(n_modes // 2, 1), rng).resize(n_modes)
    values = to_grid(g, sampling_points(n_modes)).values
    return project(values ** 2, n_modes)


@dataclass
class MaxPrincipleReport:
    s: float
    n_samples: int
    grid_minimum: float
    rhs_minimum: float

    @property
    def passed(self):
        return self.grid_minimum >= -constants.MAX_PRINCIPLE_TOL


def max_principle_check(s, n_samples=200, n_modes=32, seed=0) -> MaxPrincipleReport:
    """Smallest grid value of K f over n_samples seeded nonnegative right-hand sides f."""
    order = FracOrder.of(s)
    rng = np.random.default_rng(seed)
    n_pts = sampling_points(n_modes)
    grid_minimum = rhs_minimum = np.inf
    for _ in range(n_samples):
        f = random_nonnegative_rhs(rng, n_modes)
        u = solve_linear(f, order)
        rhs_minimum = min(rhs_minimum, float(to_grid(f, n_pts).values.min()))
        grid_minimum = min(grid_minimum, float(to_grid(u, n_pts).values.min()))

    report = MaxPrincipleReport(s=order.s, n_samples=n_samples, grid_minimum=grid_minimum, rhs_minimum=rhs_minimum)
    logger.info(f'Maximum principle at s = {order.s}: min u = {grid_minimum:.3e} over {n_samples} nonnegative '
                f'right-hand sides (min f = {rhs_minimum:.3e}).')
    return report
