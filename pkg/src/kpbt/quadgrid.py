"""Symmetric quadrature grids on the imaginary axis and multi-index bookkeeping.

Per level ``j`` a grid holds ``lambda`` nodes with weights ``rho`` (for the
controllability side) and ``mu`` nodes with weights ``phi`` (observability
side).  Node arrays use the layout ``[-x_1, ..., -x_g, x_1, ..., x_g]`` with
``x`` ascending and positive, so node ``i`` and node ``(i + g) mod 2g`` are
negatives of each other and carry the same weight.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from kpbt.errors import GridError

__all__ = [
    "DEFAULT_LAM_RANGE",
    "DEFAULT_MU_RANGE",
    "DEFAULT_GAMMA",
    "QuadGrid",
    "MultiIndexMap",
    "build_grid",
    "grid_from_spec",
    "trapezoid_widths",
    "trapezoid_weights",
    "index_maps",
    "mixed_frequencies",
    "required_tuples",
    "partner_index",
]

DEFAULT_LAM_RANGE = (1e-3, 1e3)
DEFAULT_MU_RANGE = (2e-3, 2e3)
DEFAULT_GAMMA = 40

SEPARATION_RTOL = 1e-8


@dataclass(frozen=True, eq=False)
class QuadGrid:
    lam: tuple
    mu: tuple
    rho: tuple
    phi: tuple
    lam_range: tuple
    mu_range: tuple

    @property
    def k(self) -> int:
        return len(self.lam)

    @property
    def lam_gammas(self) -> tuple:
        return tuple(len(x) for x in self.lam)

    @property
    def mu_gammas(self) -> tuple:
        return tuple(len(x) for x in self.mu)

    def spec(self) -> dict:
        """JSON-serialisable description that rebuilds this grid."""
        out = {"gammas": list(self.lam_gammas), "lam_range": list(self.lam_range),
               "mu_range": list(self.mu_range)}
        if self.mu_gammas != self.lam_gammas:
            out["mu_gammas"] = list(self.mu_gammas)
        return out


def partner_index(i, gamma):
    """Index of the node mirrored through the origin."""
    return (i + gamma // 2) % gamma


def trapezoid_widths(x) -> np.ndarray:
    """Trapezoid-rule widths for ascending nodes.

    Interior nodes get ``(x[i+1] - x[i-1]) / 2``, end nodes half of their
    adjacent interval.  A single node lumps the interval ``[0, x]``.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise GridError("need at least one node")
    if np.any(np.diff(x) <= 0):
        raise GridError("nodes must be strictly ascending")
    if x.size == 1:
        return x.copy()
    w = np.empty_like(x)
    w[0] = (x[1] - x[0]) / 2
    w[-1] = (x[-1] - x[-2]) / 2
    w[1:-1] = (x[2:] - x[:-2]) / 2
    return w


def trapezoid_weights(x) -> np.ndarray:
    """Square-root weights ``sqrt(w / (2 pi))`` for the half-axis integral.

    With the grid mirrored, ``sum(weight**2 * f(node))`` over both halves
    approximates ``(1 / 2 pi) * integral f(w) dw`` over the real line.
    """
    return np.sqrt(trapezoid_widths(x) / (2 * np.pi))


def _half_nodes(half, rng, what, level):
    lo, hi = (float(v) for v in rng)
    if not 0 < lo <= hi:
        raise GridError(f"{what} range must satisfy 0 < f_min <= f_max, got {rng}")
    if half > 1 and lo == hi:
        raise GridError(f"{what} range {rng} is a single point but level {level} needs {half}")
    return np.logspace(np.log10(lo), np.log10(hi), half)


def _mirror(x):
    return np.concatenate([-x, x])


def build_grid(gammas, lam_range=DEFAULT_LAM_RANGE, mu_range=DEFAULT_MU_RANGE,
               mu_gammas=None) -> QuadGrid:
    """Log-spaced, mirrored trapezoid grid with ``gammas[j]`` nodes per level.

    ``mu_gammas`` allows a different node count on the observability side
    (defaults to ``gammas``).  Raises :class:`GridError` for odd counts or if
    some ``|lambda|`` and ``|mu|`` on a level are not separated.
    """
    gammas = [int(g) for g in gammas]
    mu_gammas = gammas if mu_gammas is None else [int(g) for g in mu_gammas]
    if not gammas or len(mu_gammas) != len(gammas):
        raise GridError("need one node count per level on both sides")
    for side, gs in (("lambda", gammas), ("mu", mu_gammas)):
        for j, g in enumerate(gs):
            if g < 2 or g % 2:
                raise GridError(f"{side} node count at level {j + 1} must be even and >= 2, got {g}")
    lam, mu, rho, phi = [], [], [], []
    for j, (gl, gm) in enumerate(zip(gammas, mu_gammas)):
        xl = _half_nodes(gl // 2, lam_range, "lambda", j + 1)
        xm = _half_nodes(gm // 2, mu_range, "mu", j + 1)
        gap = np.abs(xl[:, None] - xm[None, :])
        scale = np.maximum(xl[:, None], xm[None, :])
        bad = np.argwhere(gap < SEPARATION_RTOL * scale)
        if bad.size:
            a, b = bad[0]
            raise GridError(f"grid collision at level {j + 1}: |lambda|={xl[a]:.17g} and "
                            f"|mu|={xm[b]:.17g} coincide")
        lam.append(_mirror(xl))
        mu.append(_mirror(xm))
        rl, rm = trapezoid_weights(xl), trapezoid_weights(xm)
        rho.append(np.concatenate([rl, rl]))
        phi.append(np.concatenate([rm, rm]))
    for arr in (*lam, *mu, *rho, *phi):
        arr.setflags(write=False)
    return QuadGrid(tuple(lam), tuple(mu), tuple(rho), tuple(phi),
                    tuple(float(v) for v in lam_range), tuple(float(v) for v in mu_range))


def grid_from_spec(spec) -> QuadGrid:
    """Build a grid from ``{"gammas", "lam_range", "mu_range"[, "mu_gammas"]}``."""
    if not isinstance(spec, dict) or "gammas" not in spec:
        raise GridError("grid spec must be an object with a 'gammas' list")
    try:
        return build_grid(spec["gammas"], tuple(spec.get("lam_range", DEFAULT_LAM_RANGE)),
                          tuple(spec.get("mu_range", DEFAULT_MU_RANGE)), spec.get("mu_gammas"))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, GridError):
            raise
        raise GridError(f"malformed grid spec: {exc}") from exc


class MultiIndexMap:
    """Row/column numbering of the assembled matrices at each level.

    Rows at level ``j`` enumerate observability multi-indices
    ``(i_j, ..., i_k)`` with ``i_k`` varying fastest; columns enumerate
    controllability multi-indices ``(i_1, ..., i_j)`` with ``i_1`` fastest.
    :meth:`h` and :meth:`l` take 1-based indices in level order and return
    1-based positions; the ``*_tuples`` arrays are 0-based.
    """

    def __init__(self, lam_gammas, mu_gammas):
        self.lam_gammas = tuple(lam_gammas)
        self.mu_gammas = tuple(mu_gammas)
        self.k = len(self.lam_gammas)

    def n_cols(self, j) -> int:
        return int(np.prod(self.lam_gammas[:j]))

    def n_rows(self, j) -> int:
        return int(np.prod(self.mu_gammas[j - 1:]))

    def h(self, j, idx) -> int:
        """Row of ``(i_j, ..., i_k)``: sum_d (i_d - 1) g_k...g_{d+1} + i_k."""
        g, k = self.mu_gammas, self.k
        idx = list(idx)
        if len(idx) != k - j + 1:
            raise ValueError(f"h({j}) takes {k - j + 1} indices")
        pos = idx[-1]
        for d in range(j, k):
            pos += (idx[d - j] - 1) * int(np.prod(g[d:]))
        return pos

    def l(self, j, idx) -> int:  # noqa: E743
        """Column of ``(i_1, ..., i_j)``: sum_d (i_d - 1) g_1...g_{d-1} + i_1."""
        g = self.lam_gammas
        idx = list(idx)
        if len(idx) != j:
            raise ValueError(f"l({j}) takes {j} indices")
        pos = idx[0]
        for d in range(2, j + 1):
            pos += (idx[d - 1] - 1) * int(np.prod(g[:d - 1]))
        return pos

    def row_tuples(self, j) -> np.ndarray:
        shape = self.mu_gammas[j - 1:]
        return np.stack(np.unravel_index(np.arange(self.n_rows(j)), shape), axis=1)

    def col_tuples(self, j) -> np.ndarray:
        shape = self.lam_gammas[:j][::-1]
        return np.stack(np.unravel_index(np.arange(self.n_cols(j)), shape), axis=1)[:, ::-1]

    def decode_h(self, j, pos) -> tuple:
        return tuple(int(i) + 1 for i in self.row_tuples(j)[pos - 1])

    def decode_l(self, j, pos) -> tuple:
        return tuple(int(i) + 1 for i in self.col_tuples(j)[pos - 1])


def index_maps(grid: QuadGrid) -> MultiIndexMap:
    return MultiIndexMap(grid.lam_gammas, grid.mu_gammas)


def mixed_frequencies(grid: QuadGrid, m) -> np.ndarray:
    """Frequencies with ``lambda`` nodes on levels ``1..m`` and ``mu`` above.

    Returns an array of shape ``(g_1, ..., g_k, k)`` (node counts of the side
    used on each level) whose last axis is the tuple ``(w_1, ..., w_k)``.
    """
    axes = [grid.lam[d] if d < m else grid.mu[d] for d in range(grid.k)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack(mesh, axis=-1)


def required_tuples(grid: QuadGrid) -> list:
    """Every frequency tuple the data-driven assembly reads, each once.

    The union over ``m = 0..k`` of tuples with ``lambda`` nodes on the first
    ``m`` levels and ``mu`` nodes on the rest; ``m = 0`` feeds the input term
    and ``m = k`` the output term.  Because the grid is mirror-symmetric the
    conjugated variants used by the real-arithmetic path are already in it.
    Tuples are complex, ``(i w_1, ..., i w_k)``, in a fixed order.
    """
    out = []
    for m in range(grid.k + 1):
        w = mixed_frequencies(grid, m).reshape(-1, grid.k)
        out.extend(tuple(1j * x for x in row) for row in w.tolist())
    return out
