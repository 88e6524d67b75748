"""Test systems: the two-subsystem tridiagonal benchmark and random stable families."""
from __future__ import annotations

import numpy as np

from kpbt.sysmodel import KPowerSystem, build_system

__all__ = ["build_paper_example", "build_random_stable", "tridiag", "scalar_example"]


def tridiag(n, diag, upper, lower) -> np.ndarray:
    return (np.diag(np.full(n, float(diag)))
            + np.diag(np.full(n - 1, float(upper)), 1)
            + np.diag(np.full(n - 1, float(lower)), -1))


def build_paper_example(n: int = 300) -> KPowerSystem:
    """Two coupled tridiagonal subsystems of order ``n`` each (``k = 2``).

    ``A_1 = tridiag(7, -10, 2)``, ``A_2 = tridiag(2, -5, 2)``,
    ``N_11 = tridiag(-1, 2, 1)`` (sub, main, super), ``B_1`` all ones and
    ``C_2`` the last unit row.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    A1 = tridiag(n, -10, 2, 7)
    A2 = tridiag(n, -5, 2, 2)
    N11 = tridiag(n, 2, 1, -1)
    C2 = np.zeros(n)
    C2[-1] = 1.0
    return build_system([A1, A2], [N11], np.ones(n), C2)


def scalar_example() -> KPowerSystem:
    """Smallest nontrivial case: ``k = 2``, every matrix 1x1, ``H_2 = 1/((s1+1)(s2+1))``."""
    return build_system([[[-1.0]], [[-1.0]]], [[[1.0]]], [1.0], [1.0])


def build_random_stable(k, dims, seed=0, margin=0.5) -> KPowerSystem:
    """Random system whose ``A_j`` are shifted so every eigenvalue has Re <= -margin."""
    dims = [int(d) for d in dims]
    if len(dims) != k:
        raise ValueError(f"dims must have length k={k}")
    rng = np.random.default_rng(seed)
    A = []
    for n in dims:
        M = rng.standard_normal((n, n))
        rad = np.abs(np.linalg.eigvals(M)).max()
        A.append(M - (rad + margin) * np.eye(n))
    N = [rng.standard_normal((dims[j + 1], dims[j])) / np.sqrt(dims[j]) for j in range(k - 1)]
    return build_system(A, N, rng.standard_normal(dims[0]), rng.standard_normal(dims[-1]),
                        check_stability=True)
