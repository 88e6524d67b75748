import numpy as np
import pytest

from kpbt.benchmarks import build_random_stable
from kpbt.datadriven import assemble_blocks, dd_reduce_complex
from kpbt.errors import SymmetryError
from kpbt.quadgrid import QuadGrid, build_grid, index_maps, required_tuples
from kpbt.realify import (J, assemble_real_blocks, dd_reduce_real, pair_permutation,
                          realify_B_C, realify_N, realify_U_A)
from kpbt.transfer import batch_sample, eval_hk
from oracles import quad_factors


def _samples(sys, grid):
    return batch_sample(sys, required_tuples(grid))


def _jdiag(m):
    return np.kron(np.eye(m // 2), J)


def _congruence(grid, blocks):
    """Complex blocks permuted into conjugate pairs and transformed by ``I kron J``."""
    k = grid.k
    rp = [pair_permutation(grid, j, "row").order for j in range(1, k + 1)]
    cp = [pair_permutation(grid, j, "col").order for j in range(1, k + 1)]

    def cong(M, r, c):
        M = M[np.ix_(r, c)]
        return _jdiag(M.shape[0]).conj().T @ M @ _jdiag(M.shape[1])

    U = [cong(blocks.U[j], rp[j], cp[j]) for j in range(k)]
    A = [cong(blocks.A[j], rp[j], cp[j]) for j in range(k)]
    N = [cong(blocks.N[j], rp[j + 1], cp[j]) for j in range(k - 1)]
    B = _jdiag(len(rp[0])).conj().T @ blocks.B[rp[0]]
    C = blocks.C[cp[-1]] @ _jdiag(len(cp[-1]))
    return U, A, N, B, C


CASES = [("scalar", None, [4, 4]), ("k2", (4, 3), [4, 2]), ("k3", (3, 2, 3), [2, 4, 2])]


@pytest.mark.parametrize("name,dims,gammas", CASES)
def test_matches_j_congruence(name, dims, gammas, fix_scalar):
    sys = fix_scalar if dims is None else build_random_stable(len(dims), dims, seed=3)
    grid = build_grid(gammas)
    S = _samples(sys, grid)
    real = assemble_real_blocks(S, grid)
    U, A, N, B, C = _congruence(grid, assemble_blocks(S, grid))
    for got, ref in zip(real.U + real.A + real.N + (real.B, real.C), U + A + N + [B, C]):
        scale = np.abs(ref).max()
        assert got.dtype == np.float64
        assert np.abs(ref.imag).max() <= 1e-12 * scale
        assert np.abs(got - ref.real).max() <= 1e-12 * scale


def test_singular_values_preserved():
    sys = build_random_stable(2, (5, 4), seed=4)
    grid = build_grid([6, 4])
    S = _samples(sys, grid)
    cplx, real = assemble_blocks(S, grid), assemble_real_blocks(S, grid)
    for a, b in zip(cplx.U, real.U):
        sa, sb = np.linalg.svd(a, compute_uv=False), np.linalg.svd(b, compute_uv=False)
        np.testing.assert_allclose(sb, sa, rtol=0, atol=1e-12 * sa[0])
    assert np.linalg.norm(real.B) == pytest.approx(np.linalg.norm(cplx.B), rel=1e-12)
    assert np.linalg.norm(real.C) == pytest.approx(np.linalg.norm(cplx.C), rel=1e-12)


def test_pair_permutation_examples():
    grid = build_grid([2, 2])
    p = pair_permutation(grid, 1, "row")
    tup = index_maps(grid).row_tuples(1)
    a, b = tup[p.order[0]], tup[p.order[1]]
    np.testing.assert_array_equal(grid.mu[0][b], -grid.mu[0][a])
    np.testing.assert_array_equal(grid.mu[1][b[1]], -grid.mu[1][a[1]])
    c = pair_permutation(grid, 1, "col")
    assert grid.lam[0][c.order[1]] == -grid.lam[0][c.order[0]]
    assert sorted(p.order) == list(range(4))


@pytest.mark.parametrize("j", [1, 2])
def test_permuted_factors_conjugate_adjacent(j, fix_scalar):
    grid = build_grid([4, 6])
    L, Rt = quad_factors(fix_scalar, grid)
    r = Rt[j - 1][pair_permutation(grid, j, "row").order]
    np.testing.assert_allclose(r[1::2], r[0::2].conj(), rtol=0, atol=1e-14)
    c = L[j - 1][:, pair_permutation(grid, j, "col").order]
    np.testing.assert_allclose(c[:, 1::2], c[:, 0::2].conj(), rtol=0, atol=1e-14)


def test_asymmetric_grid_rejected():
    lam = (np.array([-1.0, 2.0]),)
    mu = (np.array([-3.0, 3.0]),)
    w = (np.ones(2),)
    grid = QuadGrid(lam, mu, w, w, (1, 2), (3, 3))
    with pytest.raises(SymmetryError):
        pair_permutation(grid, 1, "row")


def test_parts_are_real(fix_scalar):
    grid = build_grid([4, 4])
    S = _samples(fix_scalar, grid)
    U, A = realify_U_A(1, S, grid)
    N = realify_N(1, S, grid)
    B, C = realify_B_C(S, grid)
    assert all(not np.iscomplexobj(x) for x in (U, A, N, B, C))
    assert U.shape == (16, 4) and N.shape == (4, 4) and B.shape == (16,) and C.shape == (16,)


def test_scalar_real_vs_complex(fix_scalar, rng):
    grid = build_grid([8, 8])
    S = _samples(fix_scalar, grid)
    real, cplx = dd_reduce_real(S, grid, (1, 1)), dd_reduce_complex(S, grid, (1, 1))
    assert real.method == "dkbbt" and not real.is_complex
    for _ in range(20):
        s = tuple(1j * rng.uniform(-10, 10, 2))
        ref = eval_hk(cplx, s)
        assert abs(eval_hk(real, s) - ref) <= 1e-8 * abs(ref)


def test_random_real_vs_complex(rng):
    sys = build_random_stable(3, (4, 3, 3), seed=12)
    grid = build_grid([6, 4, 4])
    S = _samples(sys, grid)
    orders = (3, 3, 2)
    real, cplx = dd_reduce_real(S, grid, orders), dd_reduce_complex(S, grid, orders)
    for x in real.A + real.N + (real.B1, real.Ck):
        assert x.dtype == np.float64
    for _ in range(20):
        s = tuple(1j * rng.uniform(-10, 10, 3))
        ref = eval_hk(cplx, s)
        assert abs(eval_hk(real, s) - ref) <= 1e-8 * abs(ref)
