"""Balanced truncation of K-power bilinear systems, intrusive and data-driven."""
from kpbt.benchmarks import build_paper_example, build_random_stable, scalar_example
from kpbt.bt import HankelSpectrum, bt_reduce, select_orders
from kpbt.datadriven import assemble_blocks, dd_reduce_complex
from kpbt.errors import (DimensionError, DivergenceError, GridError, IndefiniteError,
                         InstabilityError, KPowerError, MissingSampleError, NumericError,
                         RankError, SingularShiftError, SymmetryError)
from kpbt.gramians import GramianSet, cascade_gramians, solve_lyapunov, sqrt_factor
from kpbt.quadgrid import QuadGrid, build_grid, index_maps, required_tuples
from kpbt.realify import assemble_real_blocks, dd_reduce_real
from kpbt.simulate import builtin_input, integrate, relative_error
from kpbt.sysmodel import (BlockRealization, KPowerSystem, ReducedKPowerSystem, assemble_block,
                           build_system, spectral_abscissa)
from kpbt.transfer import SampleSet, batch_sample, conj_tuple, eval_hi_block, eval_hk

__version__ = "0.1.0"
