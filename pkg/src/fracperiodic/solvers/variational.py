"""
Variational route to periodic solutions of Lu = lam u + |u|^{p-1} u.

    J(u)  = 1/2 ||u||^2 - (lam + 1)/2 ∫u^2 - 1/(p+1) ∫|u|^{p+1}
    J~(u) = 1/2 ||u||^2 - (lam + 1)/2 ∫u^2

For lam < 0 the minimizer v of J~ on M = {∫|v|^{p+1} = 1} gives the
solution u = mu^{1/(p-1)} v with mu = ||v||^2 - (lam + 1)∫v^2. For lam > 0
the linking geometry around F_k and E_k is audited by sampling and the
sign-changing solution is obtained by Newton from a continuation branch.
"""
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from loguru import logger

from fracperiodic import constants
from fracperiodic.exceptions import ConvergenceError
from fracperiodic.problems.catalog import bifurcation
from fracperiodic.solvers.continuation import FIXED_PERIOD, ContinuationOptions, continue_branch, solve_at_lambda
from fracperiodic.solvers.linear import ResolventK
from fracperiodic.solvers.newton import pointwise_residual, solve_semilinear
from fracperiodic.solvers.nonlinearities import odd_power
from fracperiodic.space.exponents import describe_subcritical, is_subcritical
from fracperiodic.space.fields import FracOrder, SpectralField, project, sampling_points, to_grid
from fracperiodic.space.norms import gagliardo_part, inner_product_X, l2_inner, multipliers, norm_X, norm_X_squared


def _check_subcritical(s, p):
    assert is_subcritical(s, p), describe_subcritical(s, p)


def lp_integral(u: SpectralField, q, n_pts=None, check=False) -> float:
    """∫|u|^q by the trapezoid rule at 4x Nyquist; check compares against twice the resolution."""
    n_pts = n_pts or sampling_points(u.n_modes)
    value = float(np.sum(np.abs(to_grid(u, n_pts).values) ** q) * constants.TWO_PI / n_pts)
    if check:
        finer = float(np.sum(np.abs(to_grid(u, 2 * n_pts).values) ** q) * constants.TWO_PI / (2 * n_pts))
        if abs(finer - value) > constants.RICHARDSON_TOL * max(1.0, abs(value)):
            logger.warning(f'∫|u|^{q:g} changes by {abs(finer - value):.2e} under grid refinement.')
    return value


def lp_normalize(u: SpectralField, p) -> SpectralField:
    """Scale u onto M = {∫|u|^{p+1} = 1}."""
    mass = lp_integral(u, p + 1.0)
    assert mass > 0, 'The zero field cannot be normalized onto the manifold.'
    return u * mass ** (-1.0 / (p + 1.0))


def eval_Jtilde(u: SpectralField, s, lam) -> float:
    return 0.5 * norm_X_squared(u, s) - 0.5 * (lam + 1.0) * u.l2_squared()


def eval_J(u: SpectralField, s, p, lam) -> float:
    _check_subcritical(s, p)
    return eval_Jtilde(u, s, lam) - lp_integral(u, p + 1.0, check=not float(p).is_integer()) / (p + 1.0)


def gradient_J(u: SpectralField, s, p, lam) -> SpectralField:
    """L^2 gradient Lu - lam u - |u|^{p-1} u, projected on the field's modes."""
    n_pts = sampling_points(u.n_modes)
    nonlinear = project(odd_power(p).value(to_grid(u, n_pts).values), u.n_modes)
    return u.scale_modes(multipliers(s, u.n_modes) - lam) - nonlinear


def derivative_J(u: SpectralField, phi: SpectralField, s, p, lam) -> float:
    """J'(u)[phi] = B(u, phi) - lam ∫u phi - ∫|u|^{p-1} u phi."""
    return l2_inner(gradient_J(u, s, p, lam), phi)


def weak_form_defect(u: SpectralField, phis, s, p, lam) -> float:
    """Largest |J'(u)[phi]| over the test fields, scaled by ||phi||."""
    return max(abs(derivative_J(u, phi, s, p, lam)) / norm_X(phi, s) for phi in phis)


@dataclass
class MinimizeOptions:
    n_modes: int = constants.VARIATIONAL_N_MODES
    tol: float = constants.MINIMIZE_TOL
    max_iter: int = constants.MINIMIZE_MAX_ITER
    polish: bool = True
    polish_threshold: float = constants.POLISH_THRESHOLD
    initial_eps: float = constants.TEST_FIELD_EPS
    step_initial: float = 1.0
    step_max: float = 16.0

    def __post_init__(self):
        assert self.n_modes >= 1, f'n_modes must be positive, got {self.n_modes}.'
        assert self.tol > 0, f'tol must be positive, got {self.tol}.'
        assert self.max_iter >= 1, f'max_iter must be positive, got {self.max_iter}.'


@dataclass
class HistoryRow:
    iteration: int
    jtilde: float
    gradient_norm: float
    step: float
    constraint: float


@dataclass(eq=False)
class MinimizeResult:
    v: SpectralField
    mu: float
    u: SpectralField
    residual: float
    nonconstant_certified: bool
    iterations: int
    converged: bool
    polished: bool
    history: list = field(default_factory=list)

    def is_constant(self, tol=1e-8):
        return self.v.is_constant(tol * max(1.0, abs(self.v.a[0])))


def certificate_field(p, n_modes, eps=constants.TEST_FIELD_EPS) -> SpectralField:
    """|1 + eps cos x| normalized onto M."""
    u0 = SpectralField.constant(1.0, n_modes) + SpectralField.cosine(1, n_modes, eps)
    values = np.abs(to_grid(u0, sampling_points(n_modes)).values)
    return lp_normalize(project(values, n_modes), p)


def nonconstancy_certificate(u0: SpectralField, s, p, lam) -> bool:
    """
    True iff -(1/lam) B(u0) + ∫u0^2 < (2π)^{(p-1)/(p+1)}, which rules out a
    constant minimizer of J~ on M.
    """
    assert lam < 0, f'The certificate needs lam < 0, got {lam}.'
    mass = lp_integral(u0, p + 1.0)
    if abs(mass - 1.0) > constants.MANIFOLD_TOL:
        raise ValueError(f'u0 is off the manifold: ∫|u0|^(p+1) = {mass:.12g}.')
    lhs = -gagliardo_part(u0, s) / lam + u0.l2_squared()
    return lhs < constants.TWO_PI ** ((p - 1.0) / (p + 1.0)) - constants.CERTIFICATE_MARGIN


def _manifold_normal(v: SpectralField, p, resolvent: ResolventK) -> SpectralField:
    # X-representer of the constraint derivative, up to the factor p + 1
    n_pts = sampling_points(v.n_modes)
    return resolvent.apply(project(odd_power(p).value(to_grid(v, n_pts).values), v.n_modes))


def _initial_field(p, opts: MinimizeOptions, initial: Optional[SpectralField]):
    if initial is None:
        return certificate_field(p, opts.n_modes, opts.initial_eps)
    values = np.abs(to_grid(initial, sampling_points(opts.n_modes)).values)
    return lp_normalize(project(values, opts.n_modes), p)


def minimize_on_manifold(s, p, lam, opts: MinimizeOptions = None,
                         initial: Optional[SpectralField] = None) -> MinimizeResult:
    """
    Projected gradient descent of J~ on M in the X metric, with backtracking
    and renormalization onto M after every step, started from |initial|
    (default 1 + 0.3 cos x). Once the projected gradient drops below
    opts.polish_threshold, u = mu^{1/(p-1)} v is polished by Newton.
    """
    order = FracOrder.of(s)
    s = order.s
    _check_subcritical(s, p)
    assert lam < 0, f'Minimization on M needs lam < 0, got {lam}.'
    opts = opts or MinimizeOptions()

    resolvent = ResolventK.build(s, opts.n_modes)
    descent = (multipliers(s, opts.n_modes) - lam) * resolvent.diag
    v = _initial_field(p, opts, initial)
    certified = nonconstancy_certificate(v, s, p, lam)

    history = []
    step = opts.step_initial
    converged = False
    iteration = 0
    threshold = opts.polish_threshold if opts.polish else opts.tol
    energy = eval_Jtilde(v, s, lam)

    for iteration in range(1, opts.max_iter + 1):
        gradient = v.scale_modes(descent)
        normal = _manifold_normal(v, p, resolvent)
        tangent = gradient - normal * (inner_product_X(gradient, normal, s) / norm_X_squared(normal, s))
        gnorm = norm_X(tangent, s)

        if gnorm <= threshold:
            converged = True
            break

        while True:
            trial = lp_normalize(v - tangent * step, p)
            trial_energy = eval_Jtilde(trial, s, lam)
            if trial_energy <= energy - 1e-4 * step * gnorm ** 2:
                break
            step /= 2.0
            if step < 1e-14:
                raise ConvergenceError(f'Line search stalled at iteration {iteration} with |grad| = {gnorm:.2e}.',
                                       residual=gnorm)

        v, energy = trial, trial_energy
        if norm_X(v, s) > constants.ITERATE_BOUND:
            raise ConvergenceError(f'Iterate norm exceeded {constants.ITERATE_BOUND:.0e} at iteration {iteration}.')
        history.append(HistoryRow(iteration, energy, gnorm, step, lp_integral(v, p + 1.0)))
        if iteration % 500 == 0:
            logger.debug(f'Minimization iteration {iteration}: J~ = {energy:.12g}, |grad| = {gnorm:.2e}.')
        step = min(2.0 * step, opts.step_max)

    if not converged:
        raise ConvergenceError(f'Minimization did not converge in {opts.max_iter} iterations.',
                               residual=history[-1].gradient_norm if history else None)

    polished = False
    f = odd_power(p)
    if opts.polish:
        mu = 2.0 * eval_Jtilde(v, s, lam)
        if mu <= 0:
            raise ConvergenceError(f'Lagrange multiplier mu = {mu:.6g} <= 0; lam = {lam} is not below zero in effect.')
        u = solve_semilinear(v * mu ** (1.0 / (p - 1.0)), s, lam, f)
        v = lp_normalize(u, p)
        polished = True

    mu = norm_X_squared(v, s) - (lam + 1.0) * v.l2_squared()
    if mu <= 0:
        raise ConvergenceError(f'Lagrange multiplier mu = {mu:.6g} <= 0; lam = {lam} is not below zero in effect.')
    u = v * mu ** (1.0 / (p - 1.0))
    residual = pointwise_residual(u, s, lam, f)

    logger.info(f'Minimized J~ on M for s = {s}, p = {p}, lam = {lam} in {iteration} iterations: '
                f'mu = {mu:.10g}, residual = {residual:.2e}, certified nonconstant = {certified}.')
    return MinimizeResult(v=v, mu=mu, u=u, residual=residual, nonconstant_certified=certified,
                          iterations=iteration, converged=converged, polished=polished, history=history)


def lambda0_estimate(s, p, eps=constants.TEST_FIELD_EPS, tol=constants.LAMBDA0_BISECTION_TOL,
                     n_modes=constants.BRANCH_N_MODES) -> float:
    """
    Smallest |lam|, to within tol, for which the certificate passes on the
    normalized 1 + eps cos x. An upper bound for the true threshold.
    """
    _check_subcritical(s, p)
    u0 = certificate_field(p, n_modes, eps)

    def passes(magnitude):
        return nonconstancy_certificate(u0, s, p, -magnitude)

    low, high = 0.0, 1.0
    while not passes(high):
        low, high = high, 2.0 * high
        assert high < 1e12, 'The certificate never passes for this test field.'
    while high - low > tol:
        middle = 0.5 * (low + high)
        if passes(middle):
            high = middle
        else:
            low = middle
    return high


def embedding_constant(s, p, n_modes=constants.BRANCH_N_MODES) -> float:
    """
    Numerical surrogate for S with ∫|u|^{p+1} <= S ||u||^{p+1}: the minimum of
    ||v||^2 on M, found as the lam = -1 minimization, gives S = min^{-(p+1)/2}.
    """
    result = minimize_on_manifold(s, p, -1.0, MinimizeOptions(n_modes=n_modes))
    return float(norm_X_squared(result.v, s) ** (-(p + 1.0) / 2.0))


def linking_index(s, lam) -> int:
    """The k with (k-1)^{2s} <= lam < k^{2s}."""
    order = FracOrder.of(s)
    assert lam > 0, f'Linking needs lam > 0, got {lam}.'
    k = 1
    while k ** (2.0 * order.s) <= lam:
        k += 1
    return k


@dataclass
class LinkingViolation:
    stage: str
    value: float
    bound: float
    field: SpectralField


@dataclass
class LinkingReport:
    k: int
    r: float
    beta: float
    embedding_constant: float
    big_radius: float
    sphere_min: float
    subspace_max: float
    outer_max: float
    violations: list = field(default_factory=list)

    @property
    def passed(self):
        return self.beta > 0 and not self.violations


def _random_span(rng, n_modes, low, high):
    u = SpectralField.random(n_modes, rng, decay=0.5)
    mask = ((np.arange(n_modes + 1) >= low) & (np.arange(n_modes + 1) <= high)).astype(float)
    return u.scale_modes(mask)


def linking_geometry_check(s, p, lam, r=None, n_samples=constants.LINKING_SAMPLES,
                           n_subspace=constants.LINKING_SUBSPACE_SAMPLES, n_outer=constants.LINKING_OUTER_SAMPLES,
                           outer_modes=3, n_modes=constants.LINKING_N_MODES, seed=0) -> LinkingReport:
    """
    Sampling audit of the linking geometry for 0 < lam, lam not an eigenvalue:
    J >= beta > 0 on the sphere ||u|| = r of F_k, J <= 0 on E_k, and J < 0 on
    the sphere ||u|| = R of the span of modes up to max(k, outer_modes).
    """
    order = FracOrder.of(s)
    s = order.s
    _check_subcritical(s, p)
    k = linking_index(s, lam)
    rng = np.random.default_rng(seed)

    m_k = k ** (2.0 * s)
    coercivity = (m_k - lam) / (2.0 * (m_k + 1.0))
    S = embedding_constant(s, p)
    C = S / (p + 1.0)
    if r is None:
        r = (2.0 * coercivity / ((p + 1.0) * C)) ** (1.0 / (p - 1.0))
    beta = coercivity * r ** 2 - C * r ** (p + 1.0)

    top = max(k, outer_modes)
    holder = constants.TWO_PI ** ((1.0 - p) / 2.0)
    zero_radius = ((p + 1.0) / (2.0 * holder) * (top ** (2.0 * s) + 1.0) ** ((p + 1.0) / 2.0)) ** (1.0 / (p - 1.0))
    big_radius = max(2.0 * zero_radius, 2.0 * r)

    report = LinkingReport(k=k, r=r, beta=beta, embedding_constant=S, big_radius=big_radius,
                           sphere_min=np.inf, subspace_max=-np.inf, outer_max=-np.inf)

    for _ in range(n_samples):
        u = _random_span(rng, n_modes, k, n_modes)
        u = u * (r / norm_X(u, s))
        value = eval_J(u, s, p, lam)
        report.sphere_min = min(report.sphere_min, value)
        if value < beta:
            report.violations.append(LinkingViolation('sphere', value, beta, u))

    for _ in range(n_subspace):
        u = _random_span(rng, n_modes, 0, k - 1)
        u = u * (rng.uniform(0.0, big_radius) / norm_X(u, s))
        value = eval_J(u, s, p, lam)
        report.subspace_max = max(report.subspace_max, value)
        if value > constants.LINKING_SUBSPACE_TOL:
            report.violations.append(LinkingViolation('subspace', value, constants.LINKING_SUBSPACE_TOL, u))

    for _ in range(n_outer):
        u = _random_span(rng, n_modes, 0, top)
        u = u * (big_radius / norm_X(u, s))
        value = eval_J(u, s, p, lam)
        report.outer_max = max(report.outer_max, value)
        if value >= 0:
            report.violations.append(LinkingViolation('outer', value, 0.0, u))

    logger.info(f'Linking at s = {s}, p = {p}, lam = {lam}: k = {k}, r = {r:.4g}, beta = {beta:.4g}, '
                f'R = {big_radius:.4g}, {len(report.violations)} violations.')
    return report


def solve_sign_changing(s, p, lam, opts: ContinuationOptions = None,
                        seed: Optional[SpectralField] = None) -> SpectralField:
    """
    Nonconstant solution of Lu = lam u + |u|^{p-1} u for lam > 0, by Newton at
    fixed lam seeded from the fixed-period branch that bifurcates at the first
    eigenvalue k^{2s} above lam. A given seed skips the continuation.
    """
    order = FracOrder.of(s)
    s = order.s
    _check_subcritical(s, p)
    k = linking_index(s, lam)
    assert abs(lam - (k - 1) ** (2.0 * s)) > 1e-12, f'lam = {lam} is an eigenvalue.'
    f = odd_power(p)

    if seed is not None:
        if seed.is_constant():
            raise ValueError('Constant seeds are rejected: the only constant solution for lam > 0 is trivial.')
        u = solve_semilinear(seed, s, lam, f)
    else:
        opts = replace(opts or ContinuationOptions(), formulation=FIXED_PERIOD, target_lambda=lam,
                       max_amplitude=np.inf)
        problem = bifurcation(s, f)
        branch = continue_branch(problem, k, opts)
        u = solve_at_lambda(branch, lam, problem, opts).field

    if u.is_constant(1e-8):
        raise ConvergenceError('Newton returned a constant field.')
    residual = pointwise_residual(u, s, lam, f)
    if residual > constants.BRANCH_RESIDUAL_TOL:
        raise ConvergenceError(f'Sign-changing solution residual {residual:.2e} above '
                               f'{constants.BRANCH_RESIDUAL_TOL:.1e}.', residual=residual)
    values = to_grid(u, sampling_points(u.n_modes)).values
    logger.info(f'Sign-changing solution at s = {s}, p = {p}, lam = {lam}: residual {residual:.2e}, '
                f'range [{values.min():.4g}, {values.max():.4g}].')
    return u
