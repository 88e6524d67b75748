"""Multivariate transfer functions of K-power systems and sample sets.

Frequency tuples are ordered by subsystem: ``s[0]`` drives ``A_1``,
``s[-1]`` drives ``A_k``, i.e. ``H_k(s) = C_k Phi(s_k) N ... Phi(s_1) B_1``.
"""
from __future__ import annotations

import warnings
from collections.abc import Iterable, Mapping

import numpy as np
import scipy.linalg as spla

from kpbt.errors import DimensionError, MissingSampleError, SingularShiftError
from kpbt.sysmodel import BlockRealization, KPowerSystem

__all__ = [
    "eval_hk",
    "eval_hi_block",
    "conj_tuple",
    "freq_key",
    "SampleSet",
    "TransferEvaluator",
    "batch_sample",
]


def _shift_lu(a, s, level):
    """LU factors of ``s I - a``; raises if the shift hits the spectrum."""
    m = s * np.eye(a.shape[0]) - a
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", spla.LinAlgWarning)
        lu, piv = spla.lu_factor(m, check_finite=False)
    d = np.abs(np.diag(lu))
    scale = np.abs(m).sum(axis=0).max()
    if not np.all(np.isfinite(d)) or d.min() <= a.shape[0] * np.finfo(float).eps * scale:
        raise SingularShiftError(level, s)
    return lu, piv


def eval_hk(sys: KPowerSystem, s) -> complex:
    """Evaluate the k-th transfer function by ``k`` sequential linear solves."""
    s = tuple(complex(x) for x in s)
    if len(s) != sys.k:
        raise DimensionError(f"H_k of a k={sys.k} system needs {sys.k} frequencies, got {len(s)}")
    v = sys.B1.astype(complex)
    for j, (a, sj) in enumerate(zip(sys.A, s)):
        if j > 0:
            v = sys.N[j - 1] @ v
        v = spla.lu_solve(_shift_lu(a, sj, j + 1), v, check_finite=False)
    return complex(sys.Ck @ v)


def eval_hi_block(block: BlockRealization, s) -> complex:
    """Evaluate ``C Phi(s_i, A) N1 ... N1 Phi(s_1, A) B`` on the stacked realization.

    For a K-power realization this vanishes for every ``i != k``.
    """
    s = tuple(complex(x) for x in s)
    if len(s) == 0:
        raise DimensionError("need at least one frequency")
    v = block.B.astype(complex)
    for j, sj in enumerate(s):
        if j > 0:
            v = block.N1 @ v
        v = spla.lu_solve(_shift_lu(block.A, sj, j + 1), v, check_finite=False)
    return complex(block.C @ v)


def conj_tuple(s) -> tuple:
    return tuple(complex(x).conjugate() for x in s)


def freq_key(s) -> tuple:
    """Sample-set key of a purely imaginary tuple: its imaginary parts."""
    key = []
    for x in s:
        x = complex(x)
        if x.real != 0.0:
            raise ValueError(f"sample frequencies must be purely imaginary, got {x}")
        key.append(x.imag)
    return tuple(key)


class SampleSet(Mapping):
    """Samples of ``H_k`` on the imaginary axis.

    Keys are tuples of angular frequencies ``(w_1, ..., w_k)`` meaning
    ``s_j = i w_j``; floats written with 17 significant digits read back to
    the identical double, so keys survive a CSV round trip exactly.
    Each entry carries a provenance tag (``"computed"`` or ``"imported"``).
    """

    def __init__(self, k, values=None, provenance="computed"):
        self.k = int(k)
        self._values = {}
        self._prov = {}
        if values:
            for key, val in values.items():
                self._add(key, val, provenance)

    def _add(self, key, value, provenance):
        key = tuple(float(w) for w in key)
        if len(key) != self.k:
            raise DimensionError(f"sample key {key} does not have length k={self.k}")
        self._values[key] = complex(value)
        self._prov[key] = provenance

    def __getitem__(self, key):
        try:
            return self._values[key]
        except KeyError:
            raise MissingSampleError([key]) from None

    def __iter__(self):
        return iter(self._values)

    def __len__(self):
        return len(self._values)

    def provenance(self, key) -> str:
        return self._prov[key]

    def at(self, s) -> complex:
        """Look up by complex tuple ``(i w_1, ..., i w_k)``."""
        return self[freq_key(s)]

    def lookup(self, keys) -> np.ndarray:
        """Vectorised lookup; raises one error listing every absent key."""
        keys = list(keys)
        missing = [kk for kk in keys if kk not in self._values]
        if missing:
            raise MissingSampleError(missing)
        return np.array([self._values[kk] for kk in keys], dtype=complex)

    def subset(self, keys) -> "SampleSet":
        out = SampleSet(self.k)
        for kk in keys:
            out._add(kk, self[kk], self._prov[kk])
        return out


class TransferEvaluator:
    """Batch evaluator of ``H_k`` that reuses work across tuples.

    Shifted-system factorizations are cached per (level, frequency), as are
    the partial products ``Phi(s_j) N ... Phi(s_1) B_1`` for every prefix and
    the left vectors ``C_k Phi(s_k) N_{k-1}`` of the last level.  All caching
    is a pure optimisation: values match :func:`eval_hk`.
    """

    def __init__(self, sys: KPowerSystem):
        self.sys = sys
        self._lu = {}
        self._prefix = {}
        self._left = {}

    def _factor(self, level, s):
        key = (level, s)
        if key not in self._lu:
            self._lu[key] = _shift_lu(self.sys.A[level], s, level + 1)
        return self._lu[key]

    def _prefix_vec(self, s):
        # s has length < k here
        if s in self._prefix:
            return self._prefix[s]
        j = len(s) - 1
        rhs = self.sys.B1.astype(complex) if j == 0 else self.sys.N[j - 1] @ self._prefix_vec(s[:-1])
        v = spla.lu_solve(self._factor(j, s[-1]), rhs, check_finite=False)
        self._prefix[s] = v
        return v

    def _left_vec(self, s):
        if s not in self._left:
            kk = self.sys.k - 1
            w = spla.lu_solve(self._factor(kk, s), self.sys.Ck.astype(complex), trans=1,
                              check_finite=False)
            self._left[s] = w @ self.sys.N[-1] if kk > 0 else w
        return self._left[s]

    def __call__(self, s) -> complex:
        s = tuple(complex(x) for x in s)
        if len(s) != self.sys.k:
            raise DimensionError(f"need {self.sys.k} frequencies, got {len(s)}")
        g = self._left_vec(s[-1])
        if self.sys.k == 1:
            return complex(g @ self.sys.B1)
        return complex(g @ self._prefix_vec(s[:-1]))


def batch_sample(source, tuples: Iterable) -> SampleSet:
    """Collect ``H_k`` at every requested (purely imaginary) tuple.

    ``source`` is either a :class:`KPowerSystem`, evaluated internally, or an
    existing :class:`SampleSet` (e.g. imported from CSV), in which case every
    requested tuple must already be present.
    """
    tuples = list(tuples)
    if isinstance(source, SampleSet):
        keys = [freq_key(t) for t in tuples]
        for kk in keys:
            if len(kk) != source.k:
                raise DimensionError(f"tuple {kk} does not have length k={source.k}")
        missing = [kk for kk in keys if kk not in source]
        if missing:
            raise MissingSampleError(missing)
        return source.subset(dict.fromkeys(keys))
    ev = TransferEvaluator(source)
    out = SampleSet(source.k)
    for t in tuples:
        kk = freq_key(t)
        if len(kk) != source.k:
            raise DimensionError(f"tuple {kk} does not have length k={source.k}")
        if kk not in out:
            out._add(kk, ev(t), "computed")
    return out
