import os
import tempfile
import unittest
from pathlib import Path
from shutil import rmtree

import numpy as np

from fracperiodic.problems.catalog import bifurcation
from fracperiodic.solvers.continuation import Branch, BranchPoint, ContinuationOptions, continue_branch
from fracperiodic.solvers.nonlinearities import cube
from fracperiodic.space.fields import SpectralField
from fracperiodic.storage import hdf5
from fracperiodic.storage.files import csv_text, read_csv, read_json, write_csv, write_json


class TestFiles(unittest.TestCase):
    def setUp(self):
        self.root = Path(tempfile.mkdtemp())

    def tearDown(self):
        rmtree(self.root)

    def test_json_round_trip_with_field(self):
        path = write_json(self.root / 'nested' / 'out.json', {'u': SpectralField.cosine(2, 3), 'n': 1})
        data = read_json(path)
        self.assertEqual(data['n'], 1)
        self.assertEqual(data['u'].a[2], 1.0)

    def test_no_temp_file_left(self):
        write_json(self.root / 'out.json', [1, 2])
        self.assertEqual(os.listdir(self.root), ['out.json'])

    def test_overwrite(self):
        path = self.root / 'out.json'
        write_json(path, 1)
        write_json(path, 2)
        self.assertEqual(read_json(path), 2)

    def test_failed_write_leaves_old_file(self):
        path = write_json(self.root / 'out.json', 'old')
        with self.assertRaises(TypeError):
            write_json(path, object())
        self.assertEqual(read_json(path), 'old')

    def test_csv_floats_round_trip(self):
        value = 0.1 + 0.2
        path = write_csv(self.root / 'table.csv', ('x', 'label'), [(value, 'a'), (2.0, 'b')])
        header, rows = read_csv(path)
        self.assertEqual(header, ['x', 'label'])
        self.assertEqual(float(rows[0][0]), value)
        self.assertEqual(rows[1][1], 'b')

    def test_csv_text_is_deterministic(self):
        self.assertEqual(csv_text(('a', 'b'), [(1, 0.5)]), 'a,b\n1,0.5\n')

    def test_csv_row_width_checked(self):
        with self.assertRaises(AssertionError):
            csv_text(('a', 'b'), [(1,)])


class TestHDF5(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.branch = continue_branch(bifurcation(0.5, cube()), 1, ContinuationOptions(n_modes=16, max_steps=6))

    def setUp(self):
        self.root = Path(tempfile.mkdtemp())
        self.path = self.root / 'branches.h5'

    def tearDown(self):
        rmtree(self.root)

    def test_group_name(self):
        self.assertEqual(hdf5.branch_group(self.branch), 'truncated(u3)/0.5/k1')

    def test_save_and_load(self):
        group = hdf5.save_branch(self.path, self.branch)
        loaded = hdf5.load_branch(self.path, group)

        self.assertEqual(loaded.k, 1)
        self.assertEqual(loaded.nonlinearity, self.branch.nonlinearity)
        self.assertEqual(loaded.folds, self.branch.folds)
        np.testing.assert_array_equal(loaded.lambdas(), self.branch.lambdas())
        np.testing.assert_array_equal(loaded.points[-1].field.a, self.branch.points[-1].field.a)

    def test_get_groups(self):
        self.assertEqual(hdf5.get_groups(self.path), [])
        hdf5.save_branch(self.path, self.branch, group_name='first')
        hdf5.save_branch(self.path, self.branch, group_name='second/run')
        self.assertEqual(sorted(hdf5.get_groups(self.path)), ['first', 'second/run'])

    def test_resave_replaces(self):
        hdf5.save_branch(self.path, self.branch, group_name='b')
        shorter = Branch(k=1, s=0.5, formulation='normal', nonlinearity='u3', bifurcation_value=0.5,
                         points=self.branch.points[:2])
        hdf5.save_branch(self.path, shorter, group_name='b')
        self.assertEqual(len(hdf5.load_branch(self.path, 'b').points), 2)

    def test_missing(self):
        self.assertIsNone(hdf5.load_branch(self.path, 'nothing'))
        hdf5.save_branch(self.path, self.branch, group_name='b')
        self.assertIsNone(hdf5.load_branch(self.path, 'nothing'))

    def test_delete(self):
        hdf5.save_branch(self.path, self.branch, group_name='b')
        hdf5.delete_branch(self.path, 'b')
        hdf5.delete_branch(self.path, 'b')
        self.assertEqual(hdf5.get_groups(self.path), [])

    def test_empty_branch_rejected(self):
        empty = Branch(k=1, s=0.5, formulation='normal', nonlinearity='u3', bifurcation_value=0.5)
        with self.assertRaises(AssertionError):
            hdf5.save_branch(self.path, empty)

    def test_lock_timeout(self):
        lock = hdf5.get_file_lock(self.path)
        lock.acquire()
        try:
            with self.assertRaises(TimeoutError):
                hdf5.save_branch(self.path, self.branch, timeout=0.01)
        finally:
            lock.release()

    def test_point_fields_survive(self):
        point = BranchPoint(lam=0.4, field=SpectralField.cosine(1, 16, 0.2), amplitude=0.2, residual=0.0, s=0.5)
        branch = Branch(k=1, s=0.5, formulation='normal', nonlinearity='u3', bifurcation_value=0.5, points=[point])
        hdf5.save_branch(self.path, branch)
        self.assertEqual(hdf5.load_branch(self.path, 'u3/0.5/k1').points[0].amplitude, 0.2)


if __name__ == '__main__':
    unittest.main()
