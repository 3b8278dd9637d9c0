"""Unit tests for dense tensor primitives (contraction + truncating SVD)."""

import itertools

import numpy as np
import pytest

from mpodyn.errors import NumericError, ShapeError
from mpodyn.tensor_ops import SVD_TIE_RTOL, contract, singular_values, svd


def naive_contract(a, b, pairs):
    """Index-by-index reference contraction, independent of tensordot."""
    axes_a = [i for i, _ in pairs]
    axes_b = [j for _, j in pairs]
    free_a = [i for i in range(a.ndim) if i not in axes_a]
    free_b = [j for j in range(b.ndim) if j not in axes_b]
    out_shape = [a.shape[i] for i in free_a] + [b.shape[j] for j in free_b]
    out = np.zeros(out_shape, dtype=np.complex128)
    for idx_a in itertools.product(*[range(d) for d in a.shape]):
        for idx_b in itertools.product(*[range(d) for d in b.shape]):
            if any(idx_a[i] != idx_b[j] for i, j in pairs):
                continue
            pos = tuple(idx_a[i] for i in free_a) + tuple(idx_b[j] for j in free_b)
            out[pos] += a[idx_a] * b[idx_b]
    return out


def random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def test_contract_matches_naive_loops():
    rng = np.random.default_rng(7)
    cases = [
        ((2, 3), (3, 4), [(1, 0)]),
        ((2, 3, 4), (4, 3), [(2, 0), (1, 1)]),
        ((2, 2, 2), (2, 2, 2), [(0, 1)]),
        ((3, 2), (2, 3), [(0, 1), (1, 0)]),  # full contraction -> scalar
    ]
    for shape_a, shape_b, pairs in cases:
        a = random_complex(rng, shape_a)
        b = random_complex(rng, shape_b)
        got = contract(a, b, pairs)
        want = naive_contract(a, b, pairs)
        np.testing.assert_allclose(got, np.asarray(want), atol=1e-12)


def test_contract_rejects_bad_axes():
    a = np.zeros((2, 3))
    b = np.zeros((3, 2))
    with pytest.raises(ShapeError, match="out of range"):
        contract(a, b, [(2, 0)])
    with pytest.raises(ShapeError, match="repeated axis"):
        contract(a, b, [(0, 0), (0, 1)])
    with pytest.raises(ShapeError, match="cannot contract"):
        contract(a, b, [(0, 0)])


def test_svd_reconstructs_and_orders():
    rng = np.random.default_rng(11)
    for m, n in [(4, 4), (6, 3), (2, 8)]:
        mat = random_complex(rng, (m, n))
        res = svd(mat)
        np.testing.assert_allclose(
            res.u @ np.diag(res.singular_values) @ res.vh, mat, atol=1e-12
        )
        s = res.singular_values
        assert np.all(s[:-1] >= s[1:] - 1e-15)
        assert res.discarded_weight == 0.0
        # orthonormal factors
        np.testing.assert_allclose(
            res.u.conj().T @ res.u, np.eye(res.rank), atol=1e-12
        )
        np.testing.assert_allclose(
            res.vh @ res.vh.conj().T, np.eye(res.rank), atol=1e-12
        )


def test_svd_minimal_rank_exhaustive():
    """The kept rank is the smallest one satisfying the cutoff, checked
    against an exhaustive scan over all possible ranks."""
    rng = np.random.default_rng(3)
    for _ in range(20):
        mat = random_complex(rng, (6, 5))
        s = np.linalg.svd(mat, compute_uv=False)
        w = s**2
        total = w.sum()
        for cutoff in (0.5, 0.1, 1e-2, 1e-6, 0.0):
            res = svd(mat, weight_cutoff=cutoff)
            ranks_ok = [
                r for r in range(1, s.size + 1) if w[r:].sum() / total <= cutoff
            ]
            assert res.rank == min(ranks_ok)
            assert res.discarded_weight <= cutoff + 1e-15


def test_svd_tie_extension_keeps_degenerate_cluster():
    # Singular values (2, 1, 1, 1e-8): a cutoff separating 1 from 1e-8 must
    # not split the pair of exactly degenerate values.
    u = np.linalg.qr(np.random.default_rng(5).standard_normal((4, 4)))[0]
    v = np.linalg.qr(np.random.default_rng(6).standard_normal((4, 4)))[0]
    mat = u @ np.diag([2.0, 1.0, 1.0, 1e-8]) @ v
    total = 4.0 + 1.0 + 1.0 + 1e-16
    # cutoff that allows dropping one of the two 1.0 values plus the tail
    cutoff = (1.0 + 1e-16) / total + 1e-12
    res = svd(mat, weight_cutoff=cutoff)
    assert res.rank == 3  # tie pulls the second 1.0 back in
    # an explicit max_rank still wins over the tie rule
    res_capped = svd(mat, weight_cutoff=cutoff, max_rank=2)
    assert res_capped.rank == 2


def test_svd_max_rank_cap():
    rng = np.random.default_rng(13)
    mat = random_complex(rng, (5, 5))
    res = svd(mat, max_rank=2)
    assert res.rank == 2
    s = np.linalg.svd(mat, compute_uv=False)
    np.testing.assert_allclose(
        res.discarded_weight, (s[2:] ** 2).sum() / (s**2).sum(), rtol=1e-12
    )


def test_svd_zero_matrix_keeps_rank_one():
    res = svd(np.zeros((3, 4)), weight_cutoff=1e-6)
    assert res.rank == 1
    assert res.discarded_weight == 0.0
    np.testing.assert_allclose(res.singular_values, [0.0])


def test_svd_input_validation():
    with pytest.raises(ShapeError, match="expects a matrix"):
        svd(np.zeros((2, 2, 2)))
    with pytest.raises(NumericError, match="non-finite"):
        svd(np.array([[np.nan, 0.0], [0.0, 1.0]]))
    with pytest.raises(NumericError, match="max_rank"):
        svd(np.eye(2), max_rank=0)
    with pytest.raises(NumericError, match="weight_cutoff"):
        svd(np.eye(2), weight_cutoff=1.0)


def test_singular_values_full_spectrum():
    rng = np.random.default_rng(17)
    mat = random_complex(rng, (4, 6))
    np.testing.assert_allclose(
        singular_values(mat), np.linalg.svd(mat, compute_uv=False), rtol=1e-12
    )


def test_svd_rank_deterministic_under_degeneracy():
    # A matrix whose spectrum has an exactly repeated value near the cut:
    # re-running must give the same rank every time (tie rule, not backend
    # ordering, decides).
    diag = np.diag([1.0, 0.5, 0.5, 0.5 * (1.0 - 0.5 * SVD_TIE_RTOL)])
    ranks = {svd(diag, weight_cutoff=0.2).rank for _ in range(5)}
    assert len(ranks) == 1
