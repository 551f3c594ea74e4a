from unittest import TestCase

import numpy as np

from fracperiodic.problems.catalog import odd_power_minus
from fracperiodic.solvers.linear import MaxPrincipleReport
from fracperiodic.solvers.nonlinearities import cube, truncate_nonlinearity
from fracperiodic.space.fields import PeriodicField, SpectralField
from fracperiodic.storage.encoder import as_object, decode, encode


class TestEncode(TestCase):
    def test_int_to_text(self):
        i = 1000
        b = '1000'

        self.assertEqual(encode(i), b)

    def test_str_to_text(self):
        s = 'hello'
        b = '"hello"'

        self.assertEqual(encode(s), b)

    def test_float_to_text(self):
        d = 1.098409840984
        b = '1.098409840984'

        self.assertEqual(encode(d), b)

    def test_decode_text_to_int(self):
        b = '1234'
        i = 1234

        self.assertEqual(decode(b), i)

    def test_decode_bytes(self):
        self.assertEqual(decode(b'"howdy"'), 'howdy')

    def test_decode_failure(self):
        b = b'xwow'

        self.assertIsNone(decode(b))

    def test_decode_none(self):
        self.assertIsNone(decode(None))

    def test_numpy_scalars_and_arrays(self):
        data = {'count': np.int64(3), 'value': np.float64(0.25), 'flag': np.bool_(True), 'xs': np.arange(3.0)}

        self.assertEqual(decode(encode(data)), {'count': 3, 'flag': True, 'value': 0.25, 'xs': [0.0, 1.0, 2.0]})

    def test_sorted_keys(self):
        self.assertEqual(encode({'b': 1, 'a': 2}, indent=None), '{"a": 2, "b": 1}')

    def test_field_record(self):
        u = SpectralField.cosine(1, 2, 0.5)
        _u = encode(u, indent=None)

        self.assertEqual(_u, '{"__field__": {"a": [0.0, 0.5, 0.0], "b": [0.0, 0.0], "n_modes": 2}}')

    def test_field_decodes_exactly(self):
        u = SpectralField.random(8, np.random.default_rng(0))
        _u = decode(encode(u))

        self.assertIsInstance(_u, SpectralField)
        np.testing.assert_array_equal(_u.a, u.a)
        np.testing.assert_array_equal(_u.b, u.b)

    def test_periodic_record(self):
        u = PeriodicField(SpectralField.sine(1, 3), 3.5)
        _u = decode(encode({'u': u}))['u']

        self.assertIsInstance(_u, PeriodicField)
        self.assertEqual(_u.period, 3.5)
        self.assertEqual(float(_u(0.875)), float(u(0.875)))

    def test_mode_count_mismatch(self):
        with self.assertRaises(AssertionError):
            as_object({'__field__': {'n_modes': 3, 'a': [0.0, 1.0], 'b': [0.0]}})

    def test_problem_spec_as_description(self):
        spec = decode(encode(odd_power_minus(0.5, 3.0)))

        self.assertEqual(spec, {'family': 'odd-power-minus', 'lam': -1.0, 'nonlinearity': 'odd_power(3)', 'p': 3.0,
                                's': 0.5})

    def test_nonlinearity_names(self):
        self.assertEqual(encode([cube(), truncate_nonlinearity(cube())], indent=None), '["u3", "truncated(u3)"]')

    def test_dataclass(self):
        report = MaxPrincipleReport(s=0.5, n_samples=2, grid_minimum=0.1, rhs_minimum=0.0)

        self.assertEqual(decode(encode(report))['grid_minimum'], 0.1)

    def test_unknown_type(self):
        with self.assertRaises(TypeError):
            encode(object())
