import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kpbt.benchmarks import build_random_stable
from kpbt.errors import DimensionError, InstabilityError
from kpbt.sysmodel import (assemble_block, build_system, ensure_stable, extract_blocks,
                           make_reduced, spectral_abscissa)


def test_scalar_dims(fix_scalar):
    assert fix_scalar.k == 2
    assert fix_scalar.dims == (1, 1)
    assert fix_scalar.n == 2


def test_arrays_are_read_only(fix_scalar):
    with pytest.raises(ValueError):
        fix_scalar.A[0][0, 0] = 3.0


def test_k1_is_a_linear_system():
    sys = build_system([[[-2.0]]], [], [3.0], [4.0])
    assert sys.k == 1 and sys.N == ()


@pytest.mark.parametrize("bad", [
    dict(A=[[[-1.0]], [[-1.0]]], N=[], B=[1.0], C=[1.0]),
    dict(A=[[[-1.0]], [[-1.0, 0.0]]], N=[[[1.0]]], B=[1.0], C=[1.0]),
    dict(A=[[[-1.0]], [[-1.0]]], N=[[[1.0, 2.0]]], B=[1.0], C=[1.0]),
    dict(A=[[[-1.0]], [[-1.0]]], N=[[[1.0]]], B=[1.0, 2.0], C=[1.0]),
    dict(A=[[[-1.0]], [[-1.0]]], N=[[[1.0]]], B=[1.0], C=[1.0, 0.0]),
    dict(A=[], N=[], B=[1.0], C=[1.0]),
])
def test_dimension_errors(bad):
    with pytest.raises(DimensionError):
        build_system(bad["A"], bad["N"], bad["B"], bad["C"])


def test_complex_full_order_rejected():
    with pytest.raises(DimensionError):
        build_system([[[-1.0 + 1j]]], [], [1.0], [1.0])


def test_reduced_may_be_complex():
    red = make_reduced([[[-1.0 + 1j]]], [], [1.0], [1.0], method="x")
    assert red.is_complex and red.orders == (1,)


def test_spectral_abscissa_scalar(fix_scalar):
    assert spectral_abscissa(fix_scalar) == [-1.0, -1.0]


def test_unstable_is_flagged():
    sys = build_system([[[1.0]]], [], [1.0], [1.0], check_stability=True)
    assert spectral_abscissa(sys) == [1.0]
    assert sys.stable is False
    with pytest.raises(InstabilityError):
        ensure_stable(sys)


def test_benchmark_abscissae_negative(tridiag_bench):
    absc = spectral_abscissa(tridiag_bench)
    assert len(absc) == 2 and all(a < 0 for a in absc)


def test_block_pattern_is_exact(random_sys):
    blk = assemble_block(random_sys)
    off = np.concatenate([[0], np.cumsum(random_sys.dims)])
    maskA = np.zeros_like(blk.A, dtype=bool)
    maskN = np.zeros_like(blk.N1, dtype=bool)
    for j in range(random_sys.k):
        maskA[off[j]:off[j + 1], off[j]:off[j + 1]] = True
    for j in range(random_sys.k - 1):
        maskN[off[j + 1]:off[j + 2], off[j]:off[j + 1]] = True
    assert np.all(blk.A[~maskA] == 0.0)
    assert np.all(blk.N1[~maskN] == 0.0)
    assert np.all(blk.B[off[1]:] == 0.0)
    assert np.all(blk.C[:off[-2]] == 0.0)


def test_benchmark_block_shape(tridiag_bench):
    blk = assemble_block(tridiag_bench)
    assert blk.A.shape == (600, 600)
    assert np.count_nonzero(blk.A) == 2 * (3 * 300 - 2)
    assert np.count_nonzero(blk.N1) == 3 * 300 - 2
    assert np.count_nonzero(blk.N1[:300]) == 0


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10_000), st.data())
def test_block_roundtrip(k, seed, data):
    dims = data.draw(st.lists(st.integers(1, 5), min_size=k, max_size=k))
    sys = build_random_stable(k, dims, seed=seed)
    back = extract_blocks(assemble_block(sys))
    for a, b in zip(back.A + back.N + (back.B1, back.Ck), sys.A + sys.N + (sys.B1, sys.Ck)):
        assert np.array_equal(a, b)
