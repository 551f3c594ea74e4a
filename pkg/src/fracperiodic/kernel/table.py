from dataclasses import dataclass

import numpy as np
from cachetools import LRUCache, cached
from loguru import logger

from fracperiodic import constants
from fracperiodic.kernel.lattice import eval_H_period, normalization_constant
from fracperiodic.space.fields import FracOrder


@dataclass(frozen=True, eq=False)
class KernelTable:
    s: float
    n_pts: int
    period: float
    nodes: np.ndarray
    h_values: np.ndarray
    err_bounds: np.ndarray
    tail_bound: float
    normalization: float

    @property
    def spacing(self):
        return self.period / self.n_pts

    @property
    def normalized(self):
        return self.normalization * self.h_values

    @property
    def weights(self):
        """Trapezoid weights c_1 h H(z_m) of the punctured rule, m = 1..n_pts-1."""
        return self.spacing * self.normalized

    def rows(self):
        return [(float(z), float(h), float(e)) for z, h, e in zip(self.nodes, self.h_values, self.err_bounds)]


def _freeze(arr):
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@cached(cache=LRUCache(maxsize=constants.KERNEL_CACHE_SIZE))
def _build(s, n_pts, period):
    h = period / n_pts
    half = n_pts // 2
    # Values for m > n_pts/2 are mirrored so the table is exactly symmetric
    z_half = h * np.arange(1, half + 1)
    values_half, err_half = eval_H_period(z_half, s, period)

    values = np.concatenate([values_half, values_half[:half - 1][::-1]])
    errs = np.concatenate([err_half, err_half[:half - 1][::-1]])
    nodes = h * np.arange(1, n_pts)

    logger.debug(f'Built kernel table s = {s}, n_pts = {n_pts}, period = {period:.6g}.')
    return KernelTable(
        s=s,
        n_pts=n_pts,
        period=period,
        nodes=_freeze(nodes),
        h_values=_freeze(values),
        err_bounds=_freeze(errs),
        tail_bound=float(np.max(errs)),
        normalization=normalization_constant(s),
    )


def build_table(s, n_pts, period=constants.TWO_PI) -> KernelTable:
    """
    Tabulate H at the punctured-rule offsets z_m = m T/n_pts, m = 1..n_pts-1.

    The singular node z = 0 is never stored. Tables are cached per (s, n_pts, period).
    """
    assert n_pts >= 4, f'A kernel table needs n_pts >= 4, got {n_pts}.'
    assert n_pts % 2 == 0, f'A kernel table needs an even n_pts, got {n_pts}.'
    return _build(FracOrder.of(s).s, int(n_pts), float(period))
