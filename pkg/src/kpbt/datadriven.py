"""Data-driven balanced truncation from samples of the k-th transfer function.

Every quantity the square-root method needs (the cross-Gramian-factor
products and their ``A``, ``N``, ``B``, ``C`` counterparts) is assembled from
``H_k`` values on the quadrature grid; no system matrix is touched.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from kpbt.bt import _check_orders, project, truncation_factors
from kpbt.errors import GridError
from kpbt.quadgrid import MultiIndexMap, QuadGrid, index_maps, mixed_frequencies
from kpbt.sysmodel import ReducedKPowerSystem
from kpbt.transfer import SampleSet

__all__ = [
    "SampleTensors",
    "LoewnerBlocks",
    "assemble_U",
    "assemble_Amat",
    "assemble_Nmat",
    "assemble_Bvec",
    "assemble_Cvec",
    "assemble_blocks",
    "dd_reduce_complex",
]


class SampleTensors:
    """Samples rearranged as dense tensors, one per mixed tuple type.

    ``T[m]`` has shape ``(g_1, ..., g_k)`` and holds ``H_k`` at ``lambda``
    nodes on levels ``1..m`` and ``mu`` nodes on levels ``m+1..k``.
    """

    def __init__(self, samples: SampleSet, grid: QuadGrid):
        if samples.k != grid.k:
            raise GridError(f"samples are for k={samples.k} but grid has {grid.k} levels")
        self.grid = grid
        self.T = []
        for m in range(grid.k + 1):
            w = mixed_frequencies(grid, m)
            keys = [tuple(row) for row in w.reshape(-1, grid.k).tolist()]
            self.T.append(samples.lookup(keys).reshape(w.shape[:-1]))

    def gather(self, m, col_idx, row_idx) -> np.ndarray:
        """``T[m]`` at (levels ``1..m`` from columns, the rest from rows), shape (rows, cols)."""
        index = tuple(col_idx[None, :, d] for d in range(col_idx.shape[1]))
        index += tuple(row_idx[:, None, e] for e in range(row_idx.shape[1]))
        return self.T[m][index]


def _tensors(data, grid):
    return data if isinstance(data, SampleTensors) else SampleTensors(data, grid)


def _prod_weights(weights, idx, first_level):
    out = np.ones(idx.shape[0])
    for e in range(idx.shape[1]):
        out = out * weights[first_level - 1 + e][idx[:, e]]
    return out


def _level_terms(j, data, grid, maps):
    """Samples, weights and nodes entering level ``j`` (1-based)."""
    maps = maps or index_maps(grid)
    S = _tensors(data, grid)
    rows, cols = maps.row_tuples(j), maps.col_tuples(j)
    H_mu = S.gather(j - 1, cols[:, :j - 1], rows)     # mu on levels j..k
    H_lam = S.gather(j, cols, rows[:, 1:])            # lambda on levels 1..j
    delta = np.outer(_prod_weights(grid.phi, rows, j), _prod_weights(grid.rho, cols, 1))
    mu = grid.mu[j - 1][rows[:, 0]][:, None]
    lam = grid.lam[j - 1][cols[:, j - 1]][None, :]
    diff = lam - mu
    if np.any(diff == 0):
        raise GridError(f"lambda and mu nodes coincide at level {j}")
    return H_mu, H_lam, delta, lam, mu, diff


def assemble_U(j, data, grid: QuadGrid, maps: MultiIndexMap | None = None) -> np.ndarray:
    """Sample-based ``R_jj^T L_jj`` (size ``Nbar_j x N_j``)."""
    H_mu, H_lam, delta, _, _, diff = _level_terms(j, data, grid, maps)
    return delta * (H_mu - H_lam) / (1j * diff)


def assemble_Amat(j, data, grid: QuadGrid, maps: MultiIndexMap | None = None) -> np.ndarray:
    """Sample-based ``R_jj^T A_j L_jj``."""
    H_mu, H_lam, delta, lam, mu, diff = _level_terms(j, data, grid, maps)
    return delta * (mu * H_mu - lam * H_lam) / diff


def assemble_Nmat(j, data, grid: QuadGrid, maps: MultiIndexMap | None = None) -> np.ndarray:
    """Sample-based ``R_{j+1,j+1}^T N_j L_jj`` for ``1 <= j < k``.

    The weight is the full ``phi`` product over levels ``j+1..k`` times the
    ``rho`` product over ``1..j``.
    """
    maps = maps or index_maps(grid)
    if not 1 <= j < grid.k:
        raise ValueError(f"coupling index must be in 1..{grid.k - 1}, got {j}")
    S = _tensors(data, grid)
    rows, cols = maps.row_tuples(j + 1), maps.col_tuples(j)
    w = np.outer(_prod_weights(grid.phi, rows, j + 1), _prod_weights(grid.rho, cols, 1))
    return w * S.gather(j, cols, rows)


def assemble_Bvec(data, grid: QuadGrid, maps: MultiIndexMap | None = None) -> np.ndarray:
    maps = maps or index_maps(grid)
    rows = maps.row_tuples(1)
    S = _tensors(data, grid)
    return _prod_weights(grid.phi, rows, 1) * S.gather(0, rows[:, :0], rows)[:, 0]


def assemble_Cvec(data, grid: QuadGrid, maps: MultiIndexMap | None = None) -> np.ndarray:
    maps = maps or index_maps(grid)
    cols = maps.col_tuples(grid.k)
    S = _tensors(data, grid)
    return _prod_weights(grid.rho, cols, 1) * S.gather(grid.k, cols, cols[:0, :0])[0]


@dataclass(frozen=True, eq=False)
class LoewnerBlocks:
    U: tuple
    A: tuple
    N: tuple
    B: np.ndarray
    C: np.ndarray


def assemble_blocks(samples, grid: QuadGrid) -> LoewnerBlocks:
    """All main terms of the data-driven method, sharing one sample lookup."""
    maps = index_maps(grid)
    S = _tensors(samples, grid)
    k = grid.k
    U = tuple(assemble_U(j, S, grid, maps) for j in range(1, k + 1))
    A = tuple(assemble_Amat(j, S, grid, maps) for j in range(1, k + 1))
    N = tuple(assemble_Nmat(j, S, grid, maps) for j in range(1, k))
    return LoewnerBlocks(U, A, N, assemble_Bvec(S, grid, maps), assemble_Cvec(S, grid, maps))


def reduce_blocks(blocks: LoewnerBlocks, orders, method) -> ReducedKPowerSystem:
    orders = _check_orders(orders, len(blocks.U))
    Wl, Vr, spec = truncation_factors(blocks.U, orders)
    return project(Wl, Vr, blocks.A, blocks.N, blocks.B, blocks.C, method, spec)


def dd_reduce_complex(samples, grid: QuadGrid, orders) -> ReducedKPowerSystem:
    """Data-driven BT in complex arithmetic; the reduced matrices are complex."""
    return reduce_blocks(assemble_blocks(samples, grid), orders, "dkbbt-complex")
