"""
Run configuration: defaults, then a JSON file given by --config, then the
flags on the command line, validated before any solver runs.
"""
import argparse
import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from fracperiodic import constants
from fracperiodic.solvers.continuation import FIXED_PERIOD, NORMAL
from fracperiodic.space.exponents import describe_subcritical, is_subcritical

KERNEL = 'kernel'
OP = 'op'
SOLVE_LINEAR = 'solve-linear'
SOLVE_VARIATIONAL = 'solve-variational'
BRANCH = 'branch'
EXAMPLES = 'examples'
VERIFY_ALL = 'verify-all'
COMMANDS = (KERNEL, OP, SOLVE_LINEAR, SOLVE_VARIATIONAL, BRANCH, EXAMPLES, VERIFY_ALL)

# The single action of the two-word commands
ACTIONS = {KERNEL: 'dump', OP: 'apply', EXAMPLES: 'run'}

SMALL_AMPLITUDE = 'small-amplitude'
SIGN_CHANGING = 'sign-changing'
LARGE_PERIOD = 'large-period'
BO = 'bo'
WHICH = (SMALL_AMPLITUDE, SIGN_CHANGING, LARGE_PERIOD, BO)
# Numbered names of the example sets
WHICH_ALIASES = {'7.1': SMALL_AMPLITUDE, '7.2': SIGN_CHANGING, '7.3': LARGE_PERIOD}

SPECTRAL = 'spectral'
QUADRATURE = 'quadrature'
BACKENDS = (SPECTRAL, QUADRATURE)

NONLINEARITIES = ('u2', 'u3', 'zero', 'abs_power', 'odd_power', 'custom', 'custom_even')
LOG_LEVELS = ('TRACE', 'DEBUG', 'INFO', 'SUCCESS', 'WARNING', 'ERROR')


@dataclass
class RunConfig:
    command: str
    s: float = 0.5
    p: Optional[float] = None
    lam: Optional[float] = None
    k: int = 1
    k_max: int = 8
    f: str = 'u3'
    which: str = SMALL_AMPLITUDE
    backend: str = QUADRATURE
    formulation: str = NORMAL
    period: Optional[float] = None
    resolution: int = constants.QUADRATURE_RESOLUTION
    n_modes: Optional[int] = None
    tol: Optional[float] = None
    residual_tol: float = constants.GLOBAL_RESIDUAL_TOL
    max_amplitude: float = constants.BRANCH_MAX_AMPLITUDE
    seed: int = 0
    n_samples: int = 200
    output: Path = Path('results')
    archive: Optional[Path] = None
    rhs: Optional[Path] = None
    field: Optional[Path] = None
    log_level: str = 'INFO'


FIELDS = {f.name for f in dataclasses.fields(RunConfig)}


def _add_common(parser: argparse.ArgumentParser):
    # Absent flags stay out of the namespace so that the config file can supply them
    d = argparse.SUPPRESS
    parser.add_argument('--config', type=Path, default=d, help='JSON file of settings; flags override it')
    parser.add_argument('--s', type=float, default=d, help='fractional order, 0 < s < 1 (default 0.5)')
    parser.add_argument('--p', type=float, default=d, help='growth exponent p > 1')
    parser.add_argument('--lam', type=float, default=d, help='parameter lambda')
    parser.add_argument('--k', type=int, default=d, help='branch mode k >= 1 (default 1)')
    parser.add_argument('--k-max', dest='k_max', type=int, default=d, help='largest mode checked (default 8)')
    parser.add_argument('--f', choices=NONLINEARITIES, default=d, help='nonlinearity of the branch (default u3)')
    parser.add_argument('--formulation', choices=(NORMAL, FIXED_PERIOD), default=d,
                        help='branch formulation (default normal)')
    parser.add_argument('--period', type=float, default=d, help='period of the sign-changing example')
    parser.add_argument('--resolution', type=int, default=d,
                        help=f'quadrature points per period (default {constants.QUADRATURE_RESOLUTION})')
    parser.add_argument('--n-modes', dest='n_modes', type=int, default=d, help='Fourier modes of the solvers')
    parser.add_argument('--tol', type=float, default=d, help='solver tolerance')
    parser.add_argument('--residual-tol', dest='residual_tol', type=float, default=d,
                        help=f'global residual tolerance (default {constants.GLOBAL_RESIDUAL_TOL:g})')
    parser.add_argument('--max-amplitude', dest='max_amplitude', type=float, default=d,
                        help=f'branch amplitude cap (default {constants.BRANCH_MAX_AMPLITUDE:g})')
    parser.add_argument('--seed', type=int, default=d, help='seed of the randomized suites (default 0)')
    parser.add_argument('--n-samples', dest='n_samples', type=int, default=d,
                        help='random right-hand sides for solve-linear (default 200)')
    parser.add_argument('--output', type=Path, default=d, help='directory for result files (default results)')
    parser.add_argument('--archive', type=Path, default=d, help='HDF5 file that receives computed branches')
    parser.add_argument('--rhs', type=Path, default=d, help='JSON field record f for solve-linear')
    parser.add_argument('--log-level', dest='log_level', choices=LOG_LEVELS, default=d, help='log level (default INFO)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='fracperiodic',
                                     description='Periodic solutions of the 1-D fractional Laplacian.')
    commands = parser.add_subparsers(dest='command', required=True, metavar='command')

    helps = {
        KERNEL: 'tabulate the periodized kernel H',
        OP: 'apply the operator to cos(kx) or a JSON field and compare both backends',
        SOLVE_LINEAR: 'solve Lu + u = f for random nonnegative f and check u >= 0',
        SOLVE_VARIATIONAL: 'minimize on M (lam < 0) or solve by linking (lam > 0)',
        BRANCH: 'continue the branch bifurcating at mode k',
        EXAMPLES: 'compute the example solutions on R',
        VERIFY_ALL: 'run the acceptance suite and write a scorecard',
    }
    for name in COMMANDS:
        sub = commands.add_parser(name, help=helps[name], description=helps[name])
        if name in ACTIONS:
            sub.add_argument('action', choices=(ACTIONS[name],))
        if name == EXAMPLES:
            sub.add_argument('--which', choices=(*WHICH_ALIASES, *WHICH), default=argparse.SUPPRESS,
                             help=f'example to run (default {SMALL_AMPLITUDE})')
        if name == OP:
            sub.add_argument('--backend', choices=BACKENDS, default=argparse.SUPPRESS,
                             help=f'operator written to op_field.json (default {QUADRATURE})')
            sub.add_argument('--field', type=Path, default=argparse.SUPPRESS,
                             help='JSON field record to apply the operator to (default cos(kx))')
        _add_common(sub)
    return parser


def load_config_file(path) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding='utf-8'))
    except (OSError, json.JSONDecodeError) as e:
        raise ValueError(f'Cannot read config file {path}: {e}')
    if not isinstance(data, dict):
        raise ValueError(f'Config file {path} must hold a JSON object.')
    unknown = sorted(set(data) - FIELDS)
    if unknown:
        raise ValueError(f'Unknown config keys in {path}: {", ".join(unknown)}.')
    return data


def validate(config: RunConfig) -> RunConfig:
    """Raise ValueError naming the violated precondition."""
    config.which = WHICH_ALIASES.get(config.which, config.which)
    if config.which not in WHICH:
        raise ValueError(f'which must be one of {", ".join((*WHICH_ALIASES, *WHICH))}, got {config.which}.')
    if config.backend not in BACKENDS:
        raise ValueError(f'backend must be one of {", ".join(BACKENDS)}, got {config.backend}.')
    if not 0.0 < config.s < 1.0:
        raise ValueError(f's must satisfy 0 < s < 1, got s = {config.s}.')
    if config.p is not None and not config.p > 1.0:
        raise ValueError(f'p must satisfy p > 1, got p = {config.p}.')

    needs_p = config.command == SOLVE_VARIATIONAL \
        or (config.command == EXAMPLES and config.which != BO) \
        or (config.command == BRANCH and config.f in ('abs_power', 'odd_power', 'custom', 'custom_even'))
    if needs_p and config.p is None:
        raise ValueError(f'{config.command} needs --p.')

    needs_subcritical = config.command == SOLVE_VARIATIONAL \
        or (config.command == EXAMPLES and config.which in (SIGN_CHANGING, LARGE_PERIOD))
    if needs_subcritical and not is_subcritical(config.s, config.p):
        raise ValueError(f'Supercritical exponent: {describe_subcritical(config.s, config.p)}.')
    if config.command == EXAMPLES and config.which == BO and not config.s > constants.MIN_BO_ORDER:
        raise ValueError(f'The Benjamin-Ono example needs s > 1/6, got s = {config.s}.')

    if config.command == SOLVE_VARIATIONAL:
        if config.lam is None:
            raise ValueError('solve-variational needs --lam.')
        if config.lam == 0.0:
            raise ValueError('lam must be nonzero: lam < 0 minimizes on M, lam > 0 uses linking.')
    if config.command == EXAMPLES and config.period is not None:
        if not config.period > 0:
            raise ValueError(f'period must be positive, got {config.period}.')
        ratio = config.period / constants.TWO_PI
        if config.which == SIGN_CHANGING and abs(ratio - round(ratio)) <= 1e-9:
            raise ValueError(f'period must not be a multiple of 2π, got {config.period}.')

    if config.k < 1:
        raise ValueError(f'k must satisfy k >= 1, got k = {config.k}.')
    if config.k_max < 1:
        raise ValueError(f'k_max must satisfy k_max >= 1, got k_max = {config.k_max}.')
    if config.resolution < 16 or config.resolution % 2:
        raise ValueError(f'resolution must be an even number >= 16, got {config.resolution}.')
    if 2 * config.k_max + 2 > config.resolution:
        raise ValueError(f'k_max = {config.k_max} needs resolution >= {2 * config.k_max + 2}.')
    if config.n_modes is not None and config.n_modes < 2 * config.k:
        raise ValueError(f'n_modes must be at least 2k = {2 * config.k}, got {config.n_modes}.')
    for name in ('tol', 'residual_tol', 'max_amplitude'):
        value = getattr(config, name)
        if value is not None and not value > 0:
            raise ValueError(f'{name} must be positive, got {value}.')
    if config.n_samples < 1:
        raise ValueError(f'n_samples must be positive, got {config.n_samples}.')
    return config


def parse_config(argv=None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    args.pop('action', None)
    values = {}
    if 'config' in args:
        values.update(load_config_file(args.pop('config')))
    values.update(args)

    for name in ('output', 'archive', 'rhs', 'field'):
        if values.get(name) is not None:
            values[name] = Path(values[name])
    config = RunConfig(**values)
    return validate(config)
