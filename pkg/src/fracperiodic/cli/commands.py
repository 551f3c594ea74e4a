"""
One handler per command. A handler writes its artifacts under config.output
and returns the list of failed checks; run() turns that into an exit code.
"""
from pathlib import Path

import numpy as np
from loguru import logger

from fracperiodic import constants
from fracperiodic.cli import config as cfg
from fracperiodic.cli.config import RunConfig
from fracperiodic.cli.verify import run_suite
from fracperiodic.exceptions import ConvergenceError, ResolutionError, VerificationError
from fracperiodic.kernel.table import build_table
from fracperiodic.operators.quadrature import QuadratureOperator
from fracperiodic.operators.spectral import SpectralOperator, apply_spectral
from fracperiodic.problems import periodic
from fracperiodic.problems.benjamin_ono import benjamin_ono_suite
from fracperiodic.problems.catalog import bifurcation
from fracperiodic.solvers.continuation import ContinuationOptions, amplitude_law_exponent, continue_branch
from fracperiodic.solvers.linear import eigen_verify, max_principle_check, solve_linear
from fracperiodic.solvers.newton import pointwise_residual
from fracperiodic.solvers.nonlinearities import by_name, odd_power
from fracperiodic.solvers.variational import (MinimizeOptions, linking_geometry_check, minimize_on_manifold,
                                              solve_sign_changing)
from fracperiodic.space.fields import SpectralField, from_grid, grid_nodes, sampling_points, to_grid
from fracperiodic.storage import hdf5
from fracperiodic.storage.files import read_json, write_csv, write_json

# Package module and entry operation behind each command, named in error reports
MODULES = {
    cfg.KERNEL: ('kernel', 'fracperiodic.kernel.table.build_table'),
    cfg.OP: ('operator', 'fracperiodic.operators.quadrature.QuadratureOperator.apply'),
    cfg.SOLVE_LINEAR: ('linear', 'fracperiodic.solvers.linear.solve_linear'),
    cfg.SOLVE_VARIATIONAL: ('variational', 'fracperiodic.solvers.variational.minimize_on_manifold'),
    cfg.BRANCH: ('continuation', 'fracperiodic.solvers.continuation.continue_branch'),
    cfg.EXAMPLES: ('problems', 'fracperiodic.problems.periodic'),
    cfg.VERIFY_ALL: ('verify', 'fracperiodic.cli.verify.run_suite'),
}

SOLUTION_HEADER = ('family', 's', 'p', 'period', 'amplitude', 'residual')


def kernel_dump(config: RunConfig):
    table = build_table(config.s, config.resolution)
    write_csv(config.output / 'kernel.csv', ('z', 'H', 'error_bound'), table.rows())
    write_json(config.output / 'kernel.json', {'s': table.s, 'n_pts': table.n_pts, 'period': table.period,
                                               'tail_bound': table.tail_bound, 'normalization': table.normalization})
    return []


def _read_field(path) -> SpectralField:
    u = read_json(path)
    if not isinstance(u, SpectralField):
        raise ValueError(f'{path} does not hold a field record.')
    return u


def op_apply(config: RunConfig):
    n_pts = config.resolution
    u = _read_field(config.field) if config.field is not None else SpectralField.cosine(config.k, max(config.k, 1))
    spectral = apply_spectral(SpectralOperator.build(config.s, u.n_modes), u)
    quadrature = QuadratureOperator(config.s, n_pts).apply(to_grid(u, n_pts))
    lu = spectral if config.backend == cfg.SPECTRAL else from_grid(quadrature, u.n_modes)
    write_json(config.output / 'op_field.json', {'s': config.s, 'backend': config.backend, 'resolution': n_pts,
                                                 'u': u, 'lu': lu})

    spectral_values = to_grid(spectral, n_pts).values
    write_csv(config.output / 'op.csv', ('x', 'spectral', 'quadrature'),
              zip(grid_nodes(n_pts).tolist(), spectral_values.tolist(), quadrature.values.tolist()))

    report = eigen_verify(config.s, config.k_max, n_pts, config.tol or constants.EIGEN_TOL)
    write_json(config.output / 'op.json', {
        's': config.s, 'k': config.k, 'resolution': n_pts,
        'sup_gap': float(np.max(np.abs(spectral_values - quadrature.values))),
        'eigenvalues': report.rows, 'count_below': report.count_below, 'threshold': report.threshold,
        'worst_error': report.worst.error, 'passed': report.passed,
    })
    return report.failures()


def solve_linear_command(config: RunConfig):
    if config.rhs is not None:
        f = _read_field(config.rhs)
        u = solve_linear(f, config.s)
        write_json(config.output / 'solve-linear.json', {'s': config.s, 'rhs': f, 'u': u})
        return []

    n_modes = config.n_modes or 32
    report = max_principle_check(config.s, config.n_samples, n_modes, config.seed)
    write_json(config.output / 'solve-linear.json', {'report': report, 'passed': report.passed})
    return [] if report.passed else [f'min u = {report.grid_minimum:.3e} below -{constants.MAX_PRINCIPLE_TOL:g}']


def solve_variational_command(config: RunConfig):
    s, p, lam = config.s, config.p, config.lam
    out = config.output
    if lam < 0:
        opts = MinimizeOptions(n_modes=config.n_modes or constants.VARIATIONAL_N_MODES,
                               tol=config.tol or constants.MINIMIZE_TOL)
        result = minimize_on_manifold(s, p, lam, opts)
        write_csv(out / 'history.csv', ('iteration', 'jtilde', 'gradient_norm', 'step', 'constraint'),
                  [(r.iteration, r.jtilde, r.gradient_norm, r.step, r.constraint) for r in result.history])
        write_json(out / 'solve-variational.json', {
            's': s, 'p': p, 'lam': lam, 'mu': result.mu, 'residual': result.residual, 'u': result.u,
            'constant': result.is_constant(), 'nonconstant_certified': result.nonconstant_certified,
            'iterations': result.iterations, 'polished': result.polished,
        })
        return [] if result.residual <= constants.RESIDUAL_TOL else [f'residual {result.residual:.2e}']

    report = linking_geometry_check(s, p, lam, seed=config.seed)
    opts = ContinuationOptions(n_modes=config.n_modes or constants.BRANCH_N_MODES)
    u = solve_sign_changing(s, p, lam, opts)
    values = to_grid(u, sampling_points(u.n_modes)).values
    write_json(out / 'solve-variational.json', {
        's': s, 'p': p, 'lam': lam, 'u': u, 'residual': pointwise_residual(u, s, lam, odd_power(p)),
        'minimum': float(values.min()), 'maximum': float(values.max()),
        'linking': {'k': report.k, 'r': report.r, 'beta': report.beta, 'big_radius': report.big_radius,
                    'sphere_min': report.sphere_min, 'subspace_max': report.subspace_max,
                    'outer_max': report.outer_max, 'violations': len(report.violations)},
    })
    failures = [f'{v.stage} sample J = {v.value:.3e} against {v.bound:.3e}' for v in report.violations]
    if values.min() * values.max() >= 0:
        failures.append('solution does not change sign')
    return failures


def branch_command(config: RunConfig):
    f = by_name(config.f, config.p)
    opts = ContinuationOptions(n_modes=config.n_modes or constants.BRANCH_N_MODES, formulation=config.formulation,
                               max_amplitude=config.max_amplitude, newton_tol=config.tol or constants.NEWTON_TOL)
    branch = continue_branch(bifurcation(config.s, f), config.k, opts)
    name = f'branch_k{config.k}'
    write_csv(config.output / f'{name}.csv', ('lambda', 'amplitude', 'period', 'residual'), branch.rows())

    try:
        exponent = amplitude_law_exponent(branch)
    except (AssertionError, TypeError, ValueError) as e:
        logger.warning(f'No amplitude law for this branch: {e}')
        exponent = None
    write_json(config.output / f'{name}.json', {
        'k': branch.k, 's': branch.s, 'formulation': branch.formulation, 'nonlinearity': branch.nonlinearity,
        'bifurcation_value': branch.bifurcation_value, 'n_points': len(branch.points), 'folds': branch.folds,
        'amplitude_law_exponent': exponent, 'smallest_lambda': branch.smallest()[0].lam,
    })
    if config.archive is not None:
        hdf5.save_branch(config.archive, branch)
    return []


def _solution_record(solution: periodic.PeriodicSolution):
    return {'label': solution.label, 'family': solution.family, 's': solution.spec.s, 'p': solution.spec.p,
            'period': solution.period, 'amplitude': solution.amplitude, 'mean': solution.mean,
            'oscillation': solution.oscillation, 'residual': solution.residual, 'u': solution.u}


def examples_run(config: RunConfig):
    s, p, which = config.s, config.p, config.which
    failures = []
    extra = {}
    if which == cfg.SMALL_AMPLITUDE:
        solutions = periodic.small_amplitude_pair(s, p)
        for solution in solutions:
            if not periodic.minimum_bound_holds(solution):
                failures.append(f'{solution.label}: minimum {solution.u.minimum():.4g} <= -1')
    elif which == cfg.SIGN_CHANGING:
        solutions = [periodic.sign_changing_for_period(s, p, config.period or constants.SIGN_CHANGING_PERIOD)]
    elif which == cfg.LARGE_PERIOD:
        solutions = periodic.large_period_pairs(s, p)
    else:
        report = benjamin_ono_suite(s)
        solutions = report.solutions
        failures = [f'{item.name}: {item.measured:.3e} > {item.tolerance:.1e} {item.detail}'.strip()
                    for item in report.failures()]
        extra['checks'] = report.items

    out = config.output / 'examples'
    for i, solution in enumerate(solutions, start=1):
        write_json(out / f'{which}_{i}.json', _solution_record(solution))
    write_csv(out / f'{which}_summary.csv', SOLUTION_HEADER, [solution.row() for solution in solutions])
    if extra:
        write_json(out / f'{which}_checks.json', extra)
    return failures


def verify_all(config: RunConfig):
    rows = run_suite(config.s, config.seed)
    write_json(config.output / 'scorecard.json', [row.to_dict() for row in rows])
    return [f'[{row.criterion_id}] {row.description}: {row.measured:.3e} > {row.tolerance:.1e} {row.detail}'.strip()
            for row in rows if not row.passed]


HANDLERS = {
    cfg.KERNEL: kernel_dump,
    cfg.OP: op_apply,
    cfg.SOLVE_LINEAR: solve_linear_command,
    cfg.SOLVE_VARIATIONAL: solve_variational_command,
    cfg.BRANCH: branch_command,
    cfg.EXAMPLES: examples_run,
    cfg.VERIFY_ALL: verify_all,
}


def raised_in(error: BaseException) -> str:
    """Dotted name of the innermost package function on the traceback of error."""
    where = ''
    tb = error.__traceback__
    while tb is not None:
        module = tb.tb_frame.f_globals.get('__name__', '')
        if module.startswith('fracperiodic'):
            where = f'{module}.{tb.tb_frame.f_code.co_name}'
        tb = tb.tb_next
    return where


def error_payload(config: RunConfig, exit_code, failures, error: BaseException = None) -> dict:
    module, operation = MODULES[config.command]
    if isinstance(error, TimeoutError):
        module = 'storage'
    return {
        'command': config.command, 'exit_code': exit_code, 'module': module, 'operation': operation,
        'raised_in': (raised_in(error) if error is not None else '') or operation,
        'error': type(error).__name__ if error is not None else 'CheckFailed', 'failures': failures,
    }


def run(config: RunConfig) -> int:
    """
    0 on success. 1 for failed checks, solver errors and lock timeouts, 2 for a
    violated precondition. A nonzero exit logs the module at fault and writes
    error.json.
    """
    Path(config.output).mkdir(exist_ok=True, parents=True)
    error = None
    try:
        failures = HANDLERS[config.command](config)
        exit_code = 1 if failures else 0
    except (ConvergenceError, ResolutionError, VerificationError, TimeoutError) as e:
        error, exit_code = e, 1
        failures = [f'{type(e).__name__}: {e}', *(str(item) for item in getattr(e, 'failures', ()))]
    except (ValueError, AssertionError) as e:
        error, exit_code = e, 2
        failures = [f'Precondition violated: {e}']

    if not exit_code:
        logger.success(f'{config.command} OK, results in {config.output}')
        return 0

    payload = error_payload(config, exit_code, failures, error)
    logger.error(f'[{payload["module"]}] {config.command} failed in {payload["raised_in"]} '
                 f'({len(failures)} failures)')
    for failure in failures:
        logger.error(f'  - [{payload["module"]}] {failure}')
    write_json(config.output / 'error.json', payload)
    return exit_code
