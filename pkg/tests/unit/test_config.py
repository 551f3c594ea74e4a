import json
import tempfile
from pathlib import Path
from shutil import rmtree
from unittest import TestCase

from fracperiodic import constants
from fracperiodic.cli.config import (BO, BRANCH, EXAMPLES, KERNEL, LARGE_PERIOD, OP, QUADRATURE, SIGN_CHANGING,
                                     SMALL_AMPLITUDE, SOLVE_VARIATIONAL, SPECTRAL, VERIFY_ALL, RunConfig,
                                     load_config_file, parse_config, validate)


class TestParse(TestCase):
    def setUp(self):
        self.root = Path(tempfile.mkdtemp())

    def tearDown(self):
        rmtree(self.root)

    def test_defaults(self):
        config = parse_config(['verify-all'])
        self.assertEqual(config.command, VERIFY_ALL)
        self.assertEqual(config.s, 0.5)
        self.assertEqual(config.seed, 0)
        self.assertEqual(config.output, Path('results'))

    def test_two_word_commands(self):
        self.assertEqual(parse_config(['kernel', 'dump', '--s', '0.3']).command, KERNEL)
        config = parse_config(['examples', 'run', '--which', 'bo'])
        self.assertEqual((config.command, config.which), (EXAMPLES, BO))

    def test_numbered_example_names(self):
        for name, which in (('7.1', SMALL_AMPLITUDE), ('7.2', SIGN_CHANGING), ('7.3', LARGE_PERIOD)):
            config = parse_config(['examples', 'run', '--which', name, '--p', '3'])
            self.assertEqual(config.which, which)
        with self.assertRaises(SystemExit):
            parse_config(['examples', 'run', '--which', '7.4'])

    def test_operator_backend_and_field(self):
        config = parse_config(['op', 'apply'])
        self.assertEqual((config.command, config.backend, config.field), (OP, QUADRATURE, None))
        config = parse_config(['op', 'apply', '--backend', 'spectral', '--field', 'in/u.json'])
        self.assertEqual((config.backend, config.field), (SPECTRAL, Path('in/u.json')))
        with self.assertRaises(SystemExit):
            parse_config(['op', 'apply', '--backend', 'finite-difference'])

    def test_numbered_name_from_config_file(self):
        path = self.root / 'run.json'
        path.write_text(json.dumps({'which': '7.3', 'p': 3.0}))
        self.assertEqual(parse_config(['examples', 'run', '--config', str(path)]).which, LARGE_PERIOD)

    def test_missing_action(self):
        with self.assertRaises(SystemExit):
            parse_config(['kernel'])

    def test_flags(self):
        config = parse_config(['branch', '--k', '2', '--f', 'u2', '--formulation', 'fixed-period',
                               '--archive', 'out/b.h5', '--max-amplitude', '0.5'])
        self.assertEqual(config.k, 2)
        self.assertEqual(config.f, 'u2')
        self.assertEqual(config.archive, Path('out/b.h5'))
        self.assertEqual(config.max_amplitude, 0.5)

    def test_config_file_then_flags(self):
        path = self.root / 'run.json'
        path.write_text(json.dumps({'s': 0.25, 'p': 2.5, 'lam': -3.0, 'output': 'elsewhere'}))
        config = parse_config(['solve-variational', '--config', str(path), '--lam', '-5'])
        self.assertEqual(config.command, SOLVE_VARIATIONAL)
        self.assertEqual((config.s, config.p, config.lam), (0.25, 2.5, -5.0))
        self.assertEqual(config.output, Path('elsewhere'))

    def test_unknown_config_key(self):
        path = self.root / 'run.json'
        path.write_text(json.dumps({'speed': 3}))
        with self.assertRaises(ValueError):
            load_config_file(path)

    def test_unreadable_config(self):
        path = self.root / 'run.json'
        path.write_text('{not json')
        with self.assertRaises(ValueError):
            load_config_file(path)
        with self.assertRaises(ValueError):
            load_config_file(self.root / 'missing.json')


class TestValidate(TestCase):
    def test_order_range(self):
        for s in (0.0, 1.0, 1.5):
            with self.assertRaisesRegex(ValueError, '0 < s < 1'):
                validate(RunConfig(command=KERNEL, s=s))

    def test_supercritical(self):
        config = RunConfig(command=SOLVE_VARIATIONAL, s=0.25, p=3.0, lam=-1.0)
        with self.assertRaisesRegex(ValueError, 'Supercritical exponent'):
            validate(config)

    def test_variational_needs_nonzero_lambda(self):
        with self.assertRaises(ValueError):
            validate(RunConfig(command=SOLVE_VARIATIONAL, p=3.0))
        with self.assertRaises(ValueError):
            validate(RunConfig(command=SOLVE_VARIATIONAL, p=3.0, lam=0.0))

    def test_examples_need_p(self):
        with self.assertRaisesRegex(ValueError, '--p'):
            validate(RunConfig(command=EXAMPLES, which=SMALL_AMPLITUDE))
        validate(RunConfig(command=EXAMPLES, which=BO))

    def test_benjamin_ono_order(self):
        with self.assertRaisesRegex(ValueError, '1/6'):
            validate(RunConfig(command=EXAMPLES, which=BO, s=0.1))

    def test_sign_changing_period(self):
        config = RunConfig(command=EXAMPLES, which=SIGN_CHANGING, p=3.0, period=2 * constants.TWO_PI)
        with self.assertRaisesRegex(ValueError, 'multiple of 2π'):
            validate(config)
        validate(RunConfig(command=EXAMPLES, which=SIGN_CHANGING, p=3.0, period=3.0))

    def test_large_period_subcritical(self):
        with self.assertRaises(ValueError):
            validate(RunConfig(command=EXAMPLES, which=LARGE_PERIOD, s=0.25, p=4.0))

    def test_branch_power_needs_p(self):
        with self.assertRaises(ValueError):
            validate(RunConfig(command=BRANCH, f='abs_power'))
        validate(RunConfig(command=BRANCH, f='abs_power', p=2.0))

    def test_resolution(self):
        with self.assertRaises(ValueError):
            validate(RunConfig(command=KERNEL, resolution=15))
        with self.assertRaises(ValueError):
            validate(RunConfig(command=KERNEL, resolution=16, k_max=8))

    def test_positive_tolerances(self):
        with self.assertRaises(ValueError):
            validate(RunConfig(command=BRANCH, tol=0.0))
        with self.assertRaises(ValueError):
            validate(RunConfig(command=KERNEL, n_samples=0))

    def test_unknown_example_or_backend(self):
        with self.assertRaisesRegex(ValueError, 'which'):
            validate(RunConfig(command=EXAMPLES, which='7.9', p=3.0))
        with self.assertRaisesRegex(ValueError, 'backend'):
            validate(RunConfig(command=OP, backend='finite-difference'))
