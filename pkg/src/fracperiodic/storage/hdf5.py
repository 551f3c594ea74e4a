import h5py
import numpy as np

from threading import Lock
from collections import defaultdict
from loguru import logger

from fracperiodic import constants
from fracperiodic.solvers.continuation import Branch, BranchPoint
from fracperiodic.space.fields import SpectralField

# A dictionary to maintain file-specific locks
file_locks = defaultdict(Lock)

ATTRS = ('k', 's', 'formulation', 'nonlinearity', 'bifurcation_value', 'symmetry')
DATASETS = ('lambdas', 'amplitudes', 'residuals', 'a', 'b', 'folds')


def get_file_lock(file_path):
    """Retrieve a lock for a specific file path."""
    return file_locks[str(file_path)]


def branch_group(branch: Branch):
    """nonlinearity/s/k, e.g. u3/0.5/k1."""
    return constants.HDF5_GROUP_SEPARATOR.join((branch.nonlinearity, f'{branch.s:g}', f'k{branch.k}'))


def get_groups(file_path):
    """Every group that holds a branch."""
    groups = []

    def visit(name, node):
        if isinstance(node, h5py.Group) and 'lambdas' in node:
            groups.append(name)

    try:
        with h5py.File(file_path, 'r') as f:
            f.visititems(visit)
    except OSError:
        # File doesn't exist
        return []
    return groups


def _write_branch_to_file(file, group_name, branch: Branch):
    if group_name in file:
        del file[group_name]
    grp = file.require_group(group_name)
    for attr in ATTRS:
        grp.attrs[attr] = getattr(branch, attr)

    points = branch.points
    grp.create_dataset('lambdas', data=np.array([p.lam for p in points]))
    grp.create_dataset('amplitudes', data=np.array([p.amplitude for p in points]))
    grp.create_dataset('residuals', data=np.array([p.residual for p in points]))
    grp.create_dataset('a', data=np.array([p.field.a for p in points]))
    grp.create_dataset('b', data=np.array([p.field.b for p in points]))
    grp.create_dataset('folds', data=np.array(branch.folds, dtype=int))


def save_branch(file_path, branch: Branch, group_name=None, timeout=constants.LOCK_TIMEOUT):
    """Write the branch under group_name (default nonlinearity/s/k), replacing an older copy."""
    assert branch.points, 'An empty branch has nothing to archive.'
    group_name = group_name or branch_group(branch)
    lock = get_file_lock(file_path)
    if lock.acquire(timeout=timeout):
        try:
            with h5py.File(file_path, 'a') as f:
                _write_branch_to_file(f, group_name, branch)
        finally:
            # Always release the lock after operation
            lock.release()
    else:
        raise TimeoutError("Lock acquisition timed out")
    logger.debug(f'Archived {len(branch.points)} points of branch k = {branch.k} in {file_path}:{group_name}.')
    return group_name


def load_branch(file_path, group_name):
    try:
        with h5py.File(file_path, 'r') as f:
            if group_name not in f:
                return None
            grp = f[group_name]
            attrs = {attr: grp.attrs[attr] for attr in ATTRS}
            data = {name: grp[name][()] for name in DATASETS}
    except OSError:
        # File doesn't exist
        return None

    attrs = {k: v.decode() if isinstance(v, bytes) else v for k, v in attrs.items()}
    s = float(attrs['s'])
    branch = Branch(k=int(attrs['k']), s=s, formulation=str(attrs['formulation']),
                    nonlinearity=str(attrs['nonlinearity']), bifurcation_value=float(attrs['bifurcation_value']),
                    folds=[int(i) for i in data['folds']], symmetry=str(attrs['symmetry']))
    for lam, amplitude, residual, a, b in zip(data['lambdas'], data['amplitudes'], data['residuals'],
                                              data['a'], data['b']):
        branch.points.append(BranchPoint(lam=float(lam), field=SpectralField(a, b), amplitude=float(amplitude),
                                         residual=float(residual), s=s))
    return branch


def delete_branch(file_path, group_name, timeout=constants.LOCK_TIMEOUT):
    lock = get_file_lock(file_path)
    if lock.acquire(timeout=timeout):
        try:
            with h5py.File(file_path, 'a') as f:
                try:
                    del f[group_name]
                except KeyError:
                    pass
        finally:
            lock.release()
    else:
        raise TimeoutError("Lock acquisition timed out")
