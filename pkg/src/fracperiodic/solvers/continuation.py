"""
Pseudo-arclength continuation of branches bifurcating from the trivial line.

Two formulations share one engine. Both are linear in the parameter,
A(lam) = A0 + lam A1 acting diagonally on the cosine coefficients:

    normal        (1 - lam)(Lv + v) = v + f~(v)   A0 = m, A1 = -(m + 1)
    fixed-period  Lw = lam w + f(w)               A0 = m, A1 = -1

The normal form bifurcates at lam*_k = k^{2s}/(1 + k^{2s}) and a point
(lam, v) becomes a solution on R of period 2π(1 - lam)^{-1/(2s)} through
u(x) = v((1 - lam)^{1/(2s)} x). The fixed-period form bifurcates at k^{2s}.

Branches are computed in the cosine subspace with a_k > 0, which makes the
bifurcating eigenvalue simple; the shift by π/k gives the second solution.
"""
import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Optional

import numpy as np
from loguru import logger
from scipy import linalg

from fracperiodic import constants
from fracperiodic.exceptions import ConvergenceError
from fracperiodic.operators.spectral import fractional_laplacian
from fracperiodic.problems.catalog import ProblemSpec, bifurcation
from fracperiodic.problems.residual import ResidualReport, residual_report
from fracperiodic.solvers.newton import TrigBasis, newton
from fracperiodic.solvers.nonlinearities import TruncatedNonlinearity, truncate_nonlinearity
from fracperiodic.space.fields import FracOrder, PeriodicField, SpectralField, to_grid

NORMAL = 'normal'
FIXED_PERIOD = 'fixed-period'


def bifurcation_points(s, k_max):
    """[(k, k^{2s}/(1 + k^{2s})) for k = 1..k_max]."""
    order = FracOrder.of(s)
    assert k_max >= 1, f'k_max must be at least 1, got {k_max}.'
    points = []
    for k in range(1, k_max + 1):
        m = k ** (2.0 * order.s)
        points.append((k, m / (1.0 + m)))
    return points


def bifurcation_value(s, k, formulation=NORMAL):
    m = k ** (2.0 * FracOrder.of(s).s)
    return m / (1.0 + m) if formulation == NORMAL else m


@dataclass
class ContinuationOptions:
    n_modes: int = constants.BRANCH_N_MODES
    formulation: str = NORMAL
    predictor_amplitude: float = constants.PREDICTOR_AMPLITUDE
    step_initial: float = constants.STEP_INITIAL
    step_min: float = constants.STEP_MIN
    step_max: float = constants.STEP_MAX
    max_steps: int = constants.BRANCH_MAX_STEPS
    max_amplitude: float = constants.BRANCH_MAX_AMPLITUDE
    target_lambda: Optional[float] = None
    newton_tol: float = constants.NEWTON_TOL
    newton_max_iter: int = constants.NEWTON_MAX_ITER
    residual_tol: float = constants.BRANCH_RESIDUAL_TOL

    def __post_init__(self):
        assert self.formulation in (NORMAL, FIXED_PERIOD), f'Unknown formulation {self.formulation!r}.'
        assert 0 < self.step_min <= self.step_initial <= self.step_max, \
            f'Steps must satisfy 0 < step_min <= step_initial <= step_max, got {self.step_min}, ' \
            f'{self.step_initial}, {self.step_max}.'
        assert self.predictor_amplitude > 0, 'Predictor amplitude must be positive.'


@dataclass(eq=False)
class BranchPoint:
    lam: float
    field: SpectralField
    amplitude: float
    residual: float
    s: float

    @property
    def mu(self):
        return 1.0 - self.lam

    @property
    def minimal_period(self):
        if self.mu <= 0:
            raise ValueError(f'mu = 1 - lam must be positive, got {self.mu}.')
        return constants.TWO_PI * self.mu ** (-1.0 / (2.0 * self.s))


@dataclass(eq=False)
class Branch:
    k: int
    s: float
    formulation: str
    nonlinearity: str
    bifurcation_value: float
    points: list = field(default_factory=list)
    folds: list = field(default_factory=list)
    symmetry: str = 'cosine'

    def lambdas(self):
        return np.array([p.lam for p in self.points])

    def amplitudes(self):
        return np.array([p.amplitude for p in self.points])

    def smallest(self, n=1):
        return sorted(self.points, key=lambda p: p.amplitude)[:n]

    def nearest(self, lam, n=1):
        return sorted(self.points, key=lambda p: abs(p.lam - lam))[:n]

    def rows(self):
        """(lambda, amplitude, period, residual); the period column belongs to the normal form."""
        rows = []
        for p in self.points:
            period = p.minimal_period if self.formulation == NORMAL else constants.TWO_PI
            rows.append((p.lam, p.amplitude, period, p.residual))
        return rows


class _System:
    def __init__(self, s, g, k, opts: ContinuationOptions):
        self.s = s
        self.g = g
        self.k = k
        self.opts = opts
        self.basis = TrigBasis(opts.n_modes, even=True)
        m = self.basis.symbol(s)
        self.a0 = m
        self.a1 = -(m + 1.0) if opts.formulation == NORMAL else -np.ones_like(m)

    def residual(self, a, lam):
        return (self.a0 + lam * self.a1) * a - self.basis.project(self.g.value(self.basis.values(a)))

    def jacobian(self, a, lam):
        slopes = self.g.derivative(self.basis.values(a))
        return np.diag(self.a0 + lam * self.a1) - self.basis.project_jacobian(slopes)

    def augmented_jacobian(self, X):
        a, lam = X[:-1], X[-1]
        return np.hstack([self.jacobian(a, lam), (self.a1 * a)[:, None]])

    def tangent(self, X, previous):
        J = np.vstack([self.augmented_jacobian(X), previous])
        rhs = np.zeros(len(X))
        rhs[-1] = 1.0
        t = linalg.solve(J, rhs)
        return t / np.linalg.norm(t)

    def grid_residual(self, u: SpectralField, lam):
        n_pts = self.basis.n_pts
        v = to_grid(u, n_pts).values
        lv = to_grid(fractional_laplacian(u, self.s), n_pts).values
        if self.opts.formulation == NORMAL:
            r = (1.0 - lam) * (lv + v) - v - self.g.value(v)
        else:
            r = lv - lam * v - self.g.value(v)
        return float(np.max(np.abs(r)))

    def point(self, X):
        u = self.basis.to_field(X[:-1])
        lam = float(X[-1])
        return BranchPoint(lam=lam, field=u, amplitude=u.sup_norm(), residual=self.grid_residual(u, lam), s=self.s)

    def correct(self, X_guess, constraint, constraint_row):
        def residual(X):
            return np.append(self.residual(X[:-1], X[-1]), constraint(X))

        def jacobian(X):
            return np.vstack([self.augmented_jacobian(X), constraint_row])

        return newton(residual, jacobian, X_guess, self.opts.newton_tol, self.opts.newton_max_iter)


def _branch_nonlinearity(problem: ProblemSpec, formulation):
    f = problem.nonlinearity
    if isinstance(f, TruncatedNonlinearity):
        return f
    truncated = truncate_nonlinearity(f)
    return truncated if formulation == NORMAL else f


def _crossed(lam_old, lam_new, target):
    return target is not None and (lam_old - target) * (lam_new - target) <= 0.0


def continue_branch(problem: ProblemSpec, k, opts: ContinuationOptions = None) -> Branch:
    """
    Follow the branch bifurcating at mode k, from the predictor eps cos(kx)
    at the bifurcation value, until the amplitude exceeds opts.max_amplitude,
    the parameter crosses opts.target_lambda, or max_steps points are found.
    """
    opts = opts or ContinuationOptions()
    assert k >= 1, f'Branch index must be at least 1, got {k}.'
    assert k <= opts.n_modes // 2, f'Mode {k} needs more than {opts.n_modes} modes.'
    s = problem.s
    g = _branch_nonlinearity(problem, opts.formulation)
    system = _System(s, g, k, opts)
    dim = system.basis.dim

    lam_star = bifurcation_value(s, k, opts.formulation)
    branch = Branch(k=k, s=s, formulation=opts.formulation, nonlinearity=g.name, bifurcation_value=lam_star)
    logger.info(f'Continuing the k = {k} branch of {g.name} at s = {s} from lam* = {lam_star:.6g} '
                f'({opts.formulation} form).')

    # First point at fixed a_k = eps
    e_k = np.zeros(dim + 1)
    e_k[k] = 1.0
    X = np.zeros(dim + 1)
    X[k] = opts.predictor_amplitude
    X[-1] = lam_star
    eps = opts.predictor_amplitude
    X, _, _ = system.correct(X, lambda Y: Y[k] - eps, e_k)
    first = system.point(X)
    branch.points.append(first)
    t = system.tangent(X, e_k)

    h = opts.step_initial
    while len(branch.points) < opts.max_steps:
        guess = X + h * t
        try:
            X_new, _, iterations = system.correct(guess, lambda Y, t=t, guess=guess: t @ (Y - guess), t)
            point = system.point(X_new)
            if point.residual > opts.residual_tol:
                raise ConvergenceError(f'Grid residual {point.residual:.2e} above {opts.residual_tol:.1e}.',
                                       residual=point.residual)
        except ConvergenceError as e:
            h /= 2.0
            logger.warning(f'Continuation step failed ({e}); halving step to {h:.2e}.')
            if h < opts.step_min:
                raise ConvergenceError(f'Continuation step fell below {opts.step_min:.1e} after '
                                       f'{len(branch.points)} points.', residual=e.residual)
            continue

        if X_new[k] <= 0:
            logger.warning(f'Branch left the gauge a_{k} > 0 at lam = {point.lam:.6g}; stopping.')
            break
        if opts.formulation == NORMAL and not 0.0 < point.lam < 1.0:
            logger.warning(f'Branch reached lam = {point.lam:.6g} outside (0, 1); stopping.')
            break
        if point.amplitude > opts.max_amplitude:
            break

        t_new = system.tangent(X_new, t)
        if t_new[-1] * t[-1] < 0:
            branch.folds.append(len(branch.points))
            logger.warning(f'Fold detected near lam = {point.lam:.6g}, amplitude {point.amplitude:.4g}.')

        crossed = _crossed(branch.points[-1].lam, point.lam, opts.target_lambda)
        branch.points.append(point)
        logger.debug(f'Branch point {len(branch.points)}: lam = {point.lam:.10g}, amplitude = {point.amplitude:.6g}.')
        if crossed:
            break

        X, t = X_new, t_new
        if iterations <= 3:
            h = min(1.5 * h, opts.step_max)

    logger.info(f'Branch k = {k}: {len(branch.points)} points, amplitudes up to {branch.amplitudes().max():.4g}.')
    return branch


def solve_at_lambda(branch: Branch, lam, problem: ProblemSpec, opts: ContinuationOptions = None) -> BranchPoint:
    """Newton at fixed lam, seeded by interpolating the two branch points that bracket it."""
    opts = opts or ContinuationOptions(n_modes=branch.points[0].field.n_modes, formulation=branch.formulation)
    lambdas = branch.lambdas()
    bracket = np.nonzero((lambdas[:-1] - lam) * (lambdas[1:] - lam) <= 0.0)[0]
    if not len(bracket):
        raise ValueError(f'lam = {lam} is not bracketed by the branch, which spans '
                         f'[{lambdas.min():.6g}, {lambdas.max():.6g}].')

    i = int(bracket[0])
    left, right = branch.points[i], branch.points[i + 1]
    weight = 0.0 if right.lam == left.lam else (lam - left.lam) / (right.lam - left.lam)
    seed = left.field * (1.0 - weight) + right.field * weight

    system = _System(branch.s, _branch_nonlinearity(problem, branch.formulation), branch.k, opts)
    a, _, _ = newton(lambda a: system.residual(a, lam), lambda a: system.jacobian(a, lam),
                     system.basis.from_field(seed), opts.newton_tol, opts.newton_max_iter)
    return system.point(np.append(a, lam))


def phase_representatives(point: BranchPoint, k):
    """The two solutions of the pair: the computed one and its shift by π/k."""
    return point.field, point.field.shift(math.pi / k)


def to_unscaled(point: BranchPoint, p):
    """
    Normal form (lam, v) to the fixed-period form Lw = Lam w + f(w) for f
    homogeneous of degree p: Lam = lam/(1 - lam), w = mu^{-1/(p-1)} v.
    """
    assert point.mu > 0, f'mu = 1 - lam must be positive, got {point.mu}.'
    return point.lam / point.mu, point.field * point.mu ** (-1.0 / (p - 1.0))


def to_normal(lam, w: SpectralField, p):
    """Inverse of to_unscaled: lam = Lam/(1 + Lam), v = mu^{1/(p-1)} w with mu = 1/(1 + Lam)."""
    assert lam > -1, f'The fixed-period parameter must exceed -1, got {lam}.'
    mu = 1.0 / (1.0 + lam)
    return 1.0 - mu, w * mu ** (1.0 / (p - 1.0))


def rescale_to_global(point: BranchPoint, problem: ProblemSpec,
                      n_check=constants.N_CHECK_POINTS) -> tuple[PeriodicField, ResidualReport]:
    """
    u(x) = v(mu^{1/(2s)} x) on one period 2π mu^{-1/(2s)}, with the residual of
    (−Δ)^s u = lam u + f~(u) at n_check off-grid points.
    """
    if point.mu <= 0:
        raise ValueError(f'mu = 1 - lam must be positive, got {point.mu}.')
    u = PeriodicField(point.field, point.minimal_period)
    spec = bifurcation(point.s, _branch_nonlinearity(problem, NORMAL), point.lam)
    return u, residual_report(u, spec, n_check)


def fundamental_frequency(u: SpectralField, rel_tol=1e-8) -> int:
    """gcd of the active mode indices; 0 for a constant field."""
    c = np.abs(u.complex_coefficients()[1:])
    if not len(c) or c.max() == 0:
        return 0
    active = np.nonzero(c > rel_tol * c.max())[0] + 1
    return int(reduce(math.gcd, active.tolist()))


def autocorrelation_period(values, length) -> float:
    """
    Smallest period of a sampled periodic signal on a window of the given
    length: first autocorrelation peak near 1 after the first negative lag,
    refined by a parabola through the neighbouring lags.
    """
    values = np.asarray(values, dtype=float)
    n = len(values)
    x = values - values.mean()
    power = np.abs(np.fft.rfft(x)) ** 2
    if power.sum() == 0:
        return float(length)
    ac = np.fft.irfft(power, n=n)
    ac = np.append(ac / ac[0], 1.0)

    negative = np.nonzero(ac < 0)[0]
    if not len(negative):
        return float(length)
    candidates = [i for i in range(negative[0], n + 1)
                  if ac[i] > 0.99 and ac[i] >= ac[i - 1] and ac[i] >= ac[(i + 1) % n]]
    lag = float(candidates[0] if candidates else n)
    i = int(lag)
    if i < n:
        left, middle, right = ac[i - 1], ac[i], ac[i + 1]
        curvature = left - 2.0 * middle + right
        if curvature < 0:
            lag += 0.5 * (left - right) / curvature
    return lag * length / n


def empirical_period(point: BranchPoint, n_samples=constants.AUTOCORRELATION_SAMPLES) -> float:
    """Autocorrelation period of u(x) = v(mu^{1/(2s)} x) sampled over one reported period."""
    return autocorrelation_period(to_grid(point.field, n_samples).values, point.minimal_period)


def amplitude_law_exponent(branch: Branch, n_points=5) -> float:
    """Slope of log(amplitude^2) against log|lam - lam*| over the smallest-amplitude points."""
    points = branch.smallest(n_points)
    gaps = np.array([abs(p.lam - branch.bifurcation_value) for p in points])
    amplitudes = np.array([p.amplitude for p in points])
    assert np.all(gaps > 0), 'Points sitting exactly on the bifurcation value carry no amplitude law.'
    slope, _ = np.polyfit(np.log(gaps), np.log(amplitudes ** 2), 1)
    return float(slope)
