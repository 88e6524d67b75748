"""Dense Lyapunov solves and the subsystem Gramian cascade."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as spla

from kpbt.errors import DimensionError, IndefiniteError, InstabilityError, NumericError
from kpbt.sysmodel import KPowerSystem, ensure_stable

__all__ = ["GramianSet", "solve_lyapunov", "sqrt_factor", "cascade_gramians"]


def solve_lyapunov(A, W) -> np.ndarray:
    """Solve ``A X + X A^T + W = 0`` for Hurwitz ``A``.

    Bartels-Stewart through :func:`scipy.linalg.solve_continuous_lyapunov`
    (real Schur form plus a triangular Sylvester solve); the Hurwitz check
    comes first because the solver itself would happily return a non-PSD
    answer for an unstable ``A``.
    """
    A = np.asarray(A, dtype=float)
    W = np.asarray(W, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or W.shape != (n, n):
        raise DimensionError(f"A and W must be square of equal size, got {A.shape}, {W.shape}")
    try:
        ev = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise NumericError("eigenvalue computation failed") from exc
    if np.any(ev.real >= 0):
        raise InstabilityError(f"A is not Hurwitz (max Re(eig) = {ev.real.max():.3e})")
    try:
        X = spla.solve_continuous_lyapunov(A, -W)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericError("Schur-based Lyapunov solve failed") from exc
    return (X + X.T) / 2


def sqrt_factor(G, tol=1e-14, neg_tol=1e-12) -> np.ndarray:
    """Rank-revealing factor ``L`` with ``L L^T ~= G`` for symmetric PSD ``G``.

    Eigenvalues below ``-neg_tol * ||G||`` are treated as genuine
    indefiniteness; other negatives are clipped to zero.  Only eigenvalues
    above ``tol * lambda_max`` contribute a column (``tol=0`` keeps every
    strictly positive one).
    """
    G = np.asarray(G, dtype=float)
    lam, V = np.linalg.eigh((G + G.T) / 2)
    scale = max(np.abs(lam).max(initial=0.0), np.finfo(float).tiny)
    if lam.min(initial=0.0) < -neg_tol * scale:
        raise IndefiniteError(f"matrix is indefinite: min eigenvalue {lam.min():.3e}, "
                              f"max |eigenvalue| {scale:.3e}")
    lam = np.clip(lam, 0.0, None)
    keep = lam > tol * lam.max(initial=0.0)
    keep &= lam > 0
    order = np.argsort(lam[keep])[::-1]
    return V[:, keep][:, order] * np.sqrt(lam[keep][order])


@dataclass(frozen=True, eq=False)
class GramianSet:
    """Per-subsystem Gramians ``P[j]``, ``Q[j]`` and their factors."""

    P: tuple
    Q: tuple
    L: tuple
    R: tuple


def cascade_gramians(sys: KPowerSystem, factor_tol=1e-14) -> GramianSet:
    """Controllability (forward) and observability (backward) Gramian cascades.

    ``P_11`` solves the Lyapunov equation driven by ``B_1 B_1^T`` and each
    later ``P_jj`` is driven by ``N P N^T`` of its predecessor; the ``Q``
    cascade runs from ``C_k^T C_k`` backwards through ``N^T Q N``.
    """
    ensure_stable(sys)
    k = sys.k
    P = [solve_lyapunov(sys.A[0], np.outer(sys.B1, sys.B1))]
    for j in range(1, k):
        Nj = sys.N[j - 1]
        P.append(solve_lyapunov(sys.A[j], Nj @ P[-1] @ Nj.T))
    Q = [solve_lyapunov(sys.A[-1].T, np.outer(sys.Ck, sys.Ck))]
    for j in range(k - 2, -1, -1):
        Nj = sys.N[j]
        Q.insert(0, solve_lyapunov(sys.A[j].T, Nj.T @ Q[0] @ Nj))
    L = tuple(sqrt_factor(p, tol=factor_tol) for p in P)
    R = tuple(sqrt_factor(q, tol=factor_tol) for q in Q)
    return GramianSet(tuple(P), tuple(Q), L, R)
