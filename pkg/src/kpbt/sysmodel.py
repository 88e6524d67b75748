"""K-power bilinear systems and their block bilinear realization.

A K-power system is the cascade

    x1' = A_1 x1 + B_1 u
    xj' = A_j xj + N_{j-1} x_{j-1} u,   j = 2..k
    y   = C_k xk

which, stacked, is a bilinear system ``x' = A x + N1 x u + B u`` with
block-diagonal ``A``, block-subdiagonal ``N1``, input only into the first
block and output only from the last.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from kpbt.errors import DimensionError, InstabilityError, NumericError

__all__ = [
    "KPowerSystem",
    "ReducedKPowerSystem",
    "BlockRealization",
    "build_system",
    "assemble_block",
    "extract_blocks",
    "spectral_abscissa",
    "ensure_stable",
]


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class KPowerSystem:
    """SISO K-power system with subsystem matrices ``A[j]``, couplings ``N[j]``.

    ``N[j]`` maps subsystem ``j`` into subsystem ``j + 1`` (0-based lists), so
    ``N[j].shape == (dims[j + 1], dims[j])``.  Arrays are read-only.
    ``stable`` is ``True``/``False`` if stability was checked at construction
    and ``None`` otherwise.
    """

    A: tuple
    N: tuple
    B1: np.ndarray
    Ck: np.ndarray
    stable: bool | None = None

    @property
    def k(self) -> int:
        return len(self.A)

    @property
    def dims(self) -> tuple:
        return tuple(a.shape[0] for a in self.A)

    @property
    def n(self) -> int:
        return sum(self.dims)

    @property
    def is_complex(self) -> bool:
        return any(np.iscomplexobj(m) for m in (*self.A, *self.N, self.B1, self.Ck))


@dataclass(frozen=True, eq=False)
class ReducedKPowerSystem(KPowerSystem):
    """Structure-preserving reduced model; same layout as :class:`KPowerSystem`.

    ``method`` names the reduction that produced it and ``spectrum`` holds the
    per-subsystem singular values that guided truncation.
    """

    method: str = ""
    spectrum: tuple = field(default=())

    @property
    def orders(self) -> tuple:
        return self.dims


@dataclass(frozen=True, eq=False)
class BlockRealization:
    """Stacked bilinear realization ``(A, N1, B, C)`` of a K-power system."""

    A: np.ndarray
    N1: np.ndarray
    B: np.ndarray
    C: np.ndarray
    dims: tuple

    @property
    def n(self) -> int:
        return self.A.shape[0]


def _validate(A_list, N_list, B1, Ck, dtype):
    if len(A_list) == 0:
        raise DimensionError("A_list is empty: a K-power system needs k >= 1 subsystems")
    k = len(A_list)
    A = []
    for j, a in enumerate(A_list):
        a = _frozen(a, dtype)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise DimensionError(f"A[{j}] must be a non-empty square matrix, got shape {a.shape}")
        A.append(a)
    dims = [a.shape[0] for a in A]
    if len(N_list) != k - 1:
        raise DimensionError(f"expected {k - 1} coupling matrices N for k={k}, got {len(N_list)}")
    N = []
    for j, m in enumerate(N_list):
        m = _frozen(m, dtype)
        if m.shape != (dims[j + 1], dims[j]):
            raise DimensionError(
                f"N[{j}] couples subsystem {j} into {j + 1} and must be "
                f"{dims[j + 1]}x{dims[j]}, got shape {m.shape}"
            )
        N.append(m)
    B1 = _frozen(B1, dtype).reshape(-1)
    if B1.shape != (dims[0],):
        raise DimensionError(f"B1 must have length n_1={dims[0]}, got {B1.size}")
    Ck = _frozen(Ck, dtype).reshape(-1)
    if Ck.shape != (dims[-1],):
        raise DimensionError(f"Ck must have length n_k={dims[-1]}, got {Ck.size}")
    return tuple(A), tuple(N), B1, Ck


def build_system(A_list, N_list, B1, Ck, check_stability=False) -> KPowerSystem:
    """Validate real subsystem matrices and return a :class:`KPowerSystem`.

    Parameters
    ----------
    A_list
        ``k`` square matrices ``A_j``.
    N_list
        ``k - 1`` coupling matrices, ``N_list[j]`` of shape ``(n_{j+1}, n_j)``.
    B1, Ck
        Input vector of length ``n_1`` and output row of length ``n_k``.
    check_stability
        If true, compute spectral abscissae and record the result in
        ``stable``.  No error is raised for unstable systems here.
    """
    for name, m in (("B1", B1), ("Ck", Ck), *((f"A[{j}]", a) for j, a in enumerate(A_list)),
                    *((f"N[{j}]", a) for j, a in enumerate(N_list))):
        if np.iscomplexobj(np.asarray(m)):
            raise DimensionError(f"{name} is complex; full-order systems must be real")
    A, N, B1, Ck = _validate(A_list, N_list, B1, Ck, float)
    sys = KPowerSystem(A, N, B1, Ck)
    if check_stability:
        stable = all(a < 0 for a in spectral_abscissa(sys))
        sys = KPowerSystem(A, N, B1, Ck, stable=stable)
    return sys


def make_reduced(A_list, N_list, B1, Ck, method="", spectrum=()) -> ReducedKPowerSystem:
    dtype = np.result_type(*(np.asarray(m) for m in (*A_list, *N_list, B1, Ck)), float)
    A, N, B1, Ck = _validate(A_list, N_list, B1, Ck, dtype)
    return ReducedKPowerSystem(A, N, B1, Ck, method=method, spectrum=tuple(spectrum))


def assemble_block(sys: KPowerSystem) -> BlockRealization:
    """Stack the subsystems into the block bilinear realization."""
    dims = sys.dims
    off = np.concatenate([[0], np.cumsum(dims)])
    n = int(off[-1])
    dtype = np.result_type(*sys.A, *sys.N, sys.B1, sys.Ck)
    A = np.zeros((n, n), dtype=dtype)
    N1 = np.zeros((n, n), dtype=dtype)
    for j, a in enumerate(sys.A):
        A[off[j]:off[j + 1], off[j]:off[j + 1]] = a
    for j, m in enumerate(sys.N):
        N1[off[j + 1]:off[j + 2], off[j]:off[j + 1]] = m
    B = np.zeros(n, dtype=dtype)
    B[:dims[0]] = sys.B1
    C = np.zeros(n, dtype=dtype)
    C[off[-2]:] = sys.Ck
    return BlockRealization(A, N1, B, C, tuple(dims))


def extract_blocks(block: BlockRealization) -> KPowerSystem:
    """Inverse of :func:`assemble_block`; off-pattern entries are ignored."""
    off = np.concatenate([[0], np.cumsum(block.dims)])
    k = len(block.dims)
    A = [block.A[off[j]:off[j + 1], off[j]:off[j + 1]] for j in range(k)]
    N = [block.N1[off[j + 1]:off[j + 2], off[j]:off[j + 1]] for j in range(k - 1)]
    B1 = block.B[:off[1]]
    Ck = block.C[off[-2]:]
    if np.iscomplexobj(block.A):
        return make_reduced(A, N, B1, Ck)
    return build_system(A, N, B1, Ck)


def spectral_abscissa(sys: KPowerSystem) -> list:
    """Largest real part of the eigenvalues of each ``A_j``."""
    out = []
    for j, a in enumerate(sys.A):
        try:
            ev = np.linalg.eigvals(a)
        except np.linalg.LinAlgError as exc:
            raise NumericError(f"eigenvalue computation failed for A[{j}]") from exc
        out.append(float(np.max(ev.real)))
    return out


def ensure_stable(sys: KPowerSystem) -> None:
    """Raise :class:`InstabilityError` unless every ``A_j`` is Hurwitz."""
    if sys.stable:
        return
    absc = spectral_abscissa(sys)
    bad = [j for j, a in enumerate(absc) if a >= 0]
    if bad:
        raise InstabilityError(
            f"subsystem(s) {bad} not Hurwitz (spectral abscissae {[absc[j] for j in bad]})"
        )
