from fracperiodic.kernel.lattice import eval_H, eval_H_period, normalization_constant
from fracperiodic.kernel.table import KernelTable, build_table
