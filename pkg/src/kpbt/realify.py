"""Real-arithmetic data-driven balanced truncation on mirror-symmetric grids.

Rows and columns of the assembled matrices are grouped into pairs
``(t, -t)`` of mirrored multi-indices.  On such a pair the complex 2x2 blocks
have the form ``[[a, b], [conj(b), conj(a)]]`` and the unitary congruence
with ``J = [[1, -i], [1, i]] / sqrt(2)`` makes them real.  Here the real
blocks are computed directly from real and imaginary parts of the samples;
the ``J`` congruence itself is never formed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from kpbt.datadriven import LoewnerBlocks, SampleTensors, _prod_weights, _tensors, reduce_blocks
from kpbt.errors import GridError, SymmetryError
from kpbt.quadgrid import MultiIndexMap, QuadGrid, index_maps, partner_index
from kpbt.sysmodel import ReducedKPowerSystem

__all__ = [
    "PairPermutation",
    "pair_permutation",
    "realify_U_A",
    "realify_N",
    "realify_B_C",
    "assemble_real_blocks",
    "dd_reduce_real",
    "J",
]

J = np.array([[1, -1j], [1, 1j]]) / np.sqrt(2)

_E = np.array([[0.0, 1.0], [-1.0, 0.0]])
# row-major vec: vec(X D) = (I kron D^T) vec(X), vec(D X) = (D kron I) vec(X)
_K_RIGHT = np.kron(np.eye(2), _E.T)
_K_LEFT = np.kron(_E, np.eye(2))


@dataclass(frozen=True, eq=False)
class PairPermutation:
    """Ordering ``[rep_0, partner_0, rep_1, partner_1, ...]`` of positions.

    A representative is the multi-index whose highest-level node is positive;
    representatives appear in their natural (row/column) order.
    """

    level: int
    side: str
    order: np.ndarray
    reps: np.ndarray
    partners: np.ndarray


def _check_symmetric(grid: QuadGrid):
    for j in range(grid.k):
        for nodes, w in ((grid.lam[j], grid.rho[j]), (grid.mu[j], grid.phi[j])):
            g = nodes.size
            if g % 2:
                raise SymmetryError(f"level {j + 1} has an odd node count {g}")
            p = partner_index(np.arange(g), g)
            if not (np.array_equal(nodes[p], -nodes) and np.array_equal(w[p], w)):
                raise SymmetryError(f"level {j + 1} nodes/weights are not mirror-symmetric")


def pair_permutation(grid: QuadGrid, j, side, maps: MultiIndexMap | None = None) -> PairPermutation:
    """Pair rows (``side="row"``) or columns (``side="col"``) of level ``j``."""
    _check_symmetric(grid)
    maps = maps or index_maps(grid)
    if side == "row":
        tup = maps.row_tuples(j)
        shape = maps.mu_gammas[j - 1:]
    elif side == "col":
        tup = maps.col_tuples(j)[:, ::-1]
        shape = maps.lam_gammas[:j][::-1]
    else:
        raise ValueError(f"side must be 'row' or 'col', got {side!r}")
    gam = np.array(shape)
    neg = partner_index(tup, gam[None, :])
    pos_of_neg = np.ravel_multi_index(tuple(neg.T), shape)
    # the highest level is the last column of tup for rows, the first for (reversed) cols
    top = tup[:, -1] if side == "row" else tup[:, 0]
    top_gamma = gam[-1] if side == "row" else gam[0]
    reps = np.flatnonzero(top >= top_gamma // 2)
    partners = pos_of_neg[reps]
    order = np.stack([reps, partners], axis=1).reshape(-1)
    return PairPermutation(j, side, order, reps, partners)


def _real_block(a, b):
    """``J^* [[a, b], [conj b, conj a]] J`` written with real parts only."""
    ar, ai, br, bi = a.real, a.imag, b.real, b.imag
    return np.stack([np.stack([ar + br, ai - bi], -1),
                     np.stack([-ai - bi, ar - br], -1)], -2)


def _interleave(blocks):
    """(R, C, 2, 2) block array -> (2R, 2C) matrix."""
    R, C = blocks.shape[:2]
    return blocks.transpose(0, 2, 1, 3).reshape(2 * R, 2 * C)


def _pairs(grid, j, maps, side):
    p = pair_permutation(grid, j, side, maps)
    tup = maps.row_tuples(j) if side == "row" else maps.col_tuples(j)
    return tup[p.reps], tup[p.partners]


def realify_U_A(j, data, grid: QuadGrid, maps: MultiIndexMap | None = None):
    """Real counterparts of the level-``j`` ``U`` and ``A`` terms.

    Each 2x2 block ``(X, Y)`` solves ``X D_lam - Y = M_mu``,
    ``D_mu X - Y = M_lam`` with ``D_x = [[0, x], [-x, 0]]``; eliminating
    ``Y`` leaves the 4-unknown system ``X D_lam - D_mu X = M_mu - M_lam``,
    which is nonsingular whenever ``lambda**2 != mu**2``.
    """
    maps = maps or index_maps(grid)
    S = _tensors(data, grid)
    rows, _ = _pairs(grid, j, maps, "row")
    cols, cols_neg = _pairs(grid, j, maps, "col")
    h_mu1 = S.gather(j - 1, cols[:, :j - 1], rows)
    h_mu2 = S.gather(j - 1, cols_neg[:, :j - 1], rows)
    h_lam1 = S.gather(j, cols, rows[:, 1:])
    h_lam2 = S.gather(j, cols_neg, rows[:, 1:])
    delta = np.outer(_prod_weights(grid.phi, rows, j), _prod_weights(grid.rho, cols, 1))
    M_mu = delta[..., None, None] * _real_block(h_mu1, h_mu2)
    M_lam = delta[..., None, None] * _real_block(h_lam1, h_lam2)

    lam = grid.lam[j - 1][cols[:, j - 1]][None, :]
    mu = grid.mu[j - 1][rows[:, 0]][:, None]
    if np.any(lam ** 2 == mu ** 2):
        raise GridError(f"|lambda| == |mu| at level {j}: real block system is singular")
    K = lam[..., None, None] * _K_RIGHT - mu[..., None, None] * _K_LEFT
    rhs = (M_mu - M_lam).reshape(*M_mu.shape[:2], 4, 1)
    X = np.linalg.solve(K, rhs).reshape(M_mu.shape)
    D_lam = lam[..., None, None] * _E
    Y = X @ D_lam - M_mu
    return _interleave(X), _interleave(Y)


def realify_N(j, data, grid: QuadGrid, maps: MultiIndexMap | None = None) -> np.ndarray:
    """Real counterpart of the coupling term between levels ``j`` and ``j+1``."""
    maps = maps or index_maps(grid)
    if not 1 <= j < grid.k:
        raise ValueError(f"coupling index must be in 1..{grid.k - 1}, got {j}")
    S = _tensors(data, grid)
    rows, _ = _pairs(grid, j + 1, maps, "row")
    cols, cols_neg = _pairs(grid, j, maps, "col")
    w = np.outer(_prod_weights(grid.phi, rows, j + 1), _prod_weights(grid.rho, cols, 1))
    blk = _real_block(S.gather(j, cols, rows), S.gather(j, cols_neg, rows))
    return _interleave(w[..., None, None] * blk)


def realify_B_C(data, grid: QuadGrid, maps: MultiIndexMap | None = None):
    """Real input vector and output row: ``sqrt2 [Re b, -Im b]``, ``sqrt2 [Re c, Im c]``."""
    maps = maps or index_maps(grid)
    S = _tensors(data, grid)
    k = grid.k
    rows, _ = _pairs(grid, 1, maps, "row")
    cols, _ = _pairs(grid, k, maps, "col")
    b = _prod_weights(grid.phi, rows, 1) * S.gather(0, rows[:, :0], rows)[:, 0]
    c = _prod_weights(grid.rho, cols, 1) * S.gather(k, cols, cols[:0, :0])[0]
    r2 = np.sqrt(2.0)
    B = r2 * np.stack([b.real, -b.imag], axis=1).reshape(-1)
    C = r2 * np.stack([c.real, c.imag], axis=1).reshape(-1)
    return B, C


def assemble_real_blocks(samples, grid: QuadGrid) -> LoewnerBlocks:
    maps = index_maps(grid)
    S = samples if isinstance(samples, SampleTensors) else SampleTensors(samples, grid)
    UA = [realify_U_A(j, S, grid, maps) for j in range(1, grid.k + 1)]
    N = tuple(realify_N(j, S, grid, maps) for j in range(1, grid.k))
    B, C = realify_B_C(S, grid, maps)
    return LoewnerBlocks(tuple(u for u, _ in UA), tuple(a for _, a in UA), N, B, C)


def dd_reduce_real(samples, grid: QuadGrid, orders) -> ReducedKPowerSystem:
    """Data-driven BT carried out entirely on real matrices."""
    return reduce_blocks(assemble_real_blocks(samples, grid), orders, "dkbbt")
