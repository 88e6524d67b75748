"""Structure-preserving square-root balanced truncation of K-power systems."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from kpbt.errors import DimensionError, RankError
from kpbt.gramians import cascade_gramians
from kpbt.sysmodel import KPowerSystem, ReducedKPowerSystem, make_reduced

__all__ = ["HankelSpectrum", "bt_reduce", "bt_projections", "select_orders", "hankel_spectrum",
           "RANK_TOL"]

log = logging.getLogger(__name__)

RANK_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class HankelSpectrum:
    """Nonincreasing singular values per subsystem."""

    sigma: tuple

    def numerical_rank(self, j, tol=RANK_TOL) -> int:
        s = self.sigma[j]
        if s.size == 0 or s[0] == 0:
            return 0
        return int(np.count_nonzero(s > tol * s[0]))

    def __len__(self):
        return len(self.sigma)


def svd_signed(M):
    """Thin SVD with a deterministic phase per singular pair.

    Each left singular vector is scaled so that its largest-magnitude entry
    is real and nonnegative; the matching right vector gets the compensating
    phase, so ``U S Vh`` is unchanged.
    """
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    idx = np.argmax(np.abs(U), axis=0)
    piv = U[idx, np.arange(U.shape[1])]
    mag = np.abs(piv)
    ph = np.where(mag > 0, piv / np.where(mag > 0, mag, 1), 1)
    U = U * ph.conj()
    Vh = Vh * ph[:, None]
    return U, s, Vh


def _check_orders(orders, k):
    orders = tuple(int(r) for r in orders)
    if len(orders) != k:
        raise DimensionError(f"need {k} reduced orders, got {len(orders)}")
    if any(r < 1 for r in orders):
        raise RankError(f"reduced orders must be >= 1, got {orders}")
    return orders


def truncation_factors(Umats, orders, label="U"):
    """SVD each coupling matrix and return the left/right truncation factors.

    Returns ``(Wl, Vr, spectrum)`` with ``Wl[j] = S^{-1/2} U_1^H`` and
    ``Vr[j] = Y_1 S^{-1/2}`` for the leading ``orders[j]`` singular triplets.
    An order is rejected only if it exceeds the matrix size or hits an exactly
    zero singular value; orders beyond the numerical rank are allowed (they
    carry noise-level states) but logged.
    """
    Wl, Vr, sig = [], [], []
    for j, (M, r) in enumerate(zip(Umats, orders)):
        U, s, Vh = svd_signed(M)
        sig.append(s)
        if r > s.size:
            raise RankError(f"order r_{j + 1}={r} exceeds min dimension {s.size} of {label}_{j + 1}",
                            rank=s.size, sigma=s)
        if not s[r - 1] > 0:
            rank = int(np.count_nonzero(s > 0))
            raise RankError(f"order r_{j + 1}={r} exceeds the rank {rank} of {label}_{j + 1}",
                            rank=rank, sigma=s)
        num_rank = int(np.count_nonzero(s > RANK_TOL * s[0]))
        if r > num_rank:
            log.warning("r_%d=%d exceeds numerical rank %d of %s_%d (tol %.0e); trailing states "
                        "are at round-off level", j + 1, r, num_rank, label, j + 1, RANK_TOL)
        isq = 1.0 / np.sqrt(s[:r])
        Wl.append(isq[:, None] * U[:, :r].conj().T)
        Vr.append(Vh[:r].conj().T * isq)
    return Wl, Vr, HankelSpectrum(tuple(sig))


def project(Wl, Vr, Amats, Nmats, Bvec, Cvec, method, spectrum) -> ReducedKPowerSystem:
    """Apply the truncation factors to the (possibly sample-based) main terms."""
    k = len(Wl)
    A = [Wl[j] @ Amats[j] @ Vr[j] for j in range(k)]
    N = [Wl[j + 1] @ Nmats[j] @ Vr[j] for j in range(k - 1)]
    B = Wl[0] @ Bvec
    C = Cvec @ Vr[-1]
    return make_reduced(A, N, B, C, method=method, spectrum=spectrum.sigma)


def hankel_spectrum(sys: KPowerSystem) -> HankelSpectrum:
    g = cascade_gramians(sys, factor_tol=0.0)
    return HankelSpectrum(tuple(np.linalg.svd(R.T @ L, compute_uv=False)
                                for L, R in zip(g.L, g.R)))


def bt_projections(sys: KPowerSystem, orders):
    """Projection pairs ``(V_j, W_j^T)`` of square-root balancing, plus the spectrum.

    ``V_j = L_jj Y_j1 S_j1^{-1/2}`` and ``W_j^T = S_j1^{-1/2} U_j1^T R_jj^T``
    from the SVD ``R_jj^T L_jj = U S Y^T``; they satisfy ``W_j^T V_j = I``.
    """
    orders = _check_orders(orders, sys.k)
    g = cascade_gramians(sys, factor_tol=0.0)
    RtL = [R.T @ L for L, R in zip(g.L, g.R)]
    Wl, Vr, spec = truncation_factors(RtL, orders, label="R^T L")
    V = [L @ vr for L, vr in zip(g.L, Vr)]
    Wt = [wl @ R.T for wl, R in zip(Wl, g.R)]
    return V, Wt, spec


def bt_reduce(sys: KPowerSystem, orders):
    """Balanced truncation to orders ``r_1..r_k``.

    Parameters
    ----------
    sys
        Stable full-order system.
    orders
        Reduced dimension of each subsystem.

    Returns
    -------
    reduced
        :class:`ReducedKPowerSystem` with ``method="bt"``.
    spectrum
        Hankel singular values of every subsystem (all of them, not only
        the retained ones).

    Notes
    -----
    Gramian factors keep every positive eigen-direction so that orders past
    the 1e-14 numerical rank are still representable; see
    :func:`truncation_factors`.
    """
    V, Wt, spec = bt_projections(sys, orders)
    k = sys.k
    A = [Wt[j] @ sys.A[j] @ V[j] for j in range(k)]
    N = [Wt[j + 1] @ sys.N[j] @ V[j] for j in range(k - 1)]
    reduced = make_reduced(A, N, Wt[0] @ sys.B1, sys.Ck @ V[-1], method="bt",
                           spectrum=spec.sigma)
    return reduced, spec


def select_orders(spectrum: HankelSpectrum, rel_tol) -> tuple:
    """Smallest orders keeping every singular value above ``rel_tol * sigma_max``."""
    return tuple(max(1, int(np.count_nonzero(s > rel_tol * s[0]))) for s in spectrum.sigma)
