"""Unit tests for the vectorized density-matrix MPS container."""

import numpy as np
import pytest

from mpodyn.errors import DegenerateTraceError, ShapeError
from mpodyn.state import PHYS_DIM, DensityMPS


def random_operator(rng, sites, hermitian=True):
    dim = 2**sites
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    if hermitian:
        m = m + m.conj().T
    return m / np.linalg.norm(m)


def vec_interleaved(op, sites):
    """Flatten an operator to the site-major vector the MPS represents."""
    t = op.reshape((2,) * (2 * sites))
    perm = [ax for i in range(sites) for ax in (i, sites + i)]
    return t.transpose(perm).reshape(-1)


def test_computational_product_dense():
    for bits in ([0, 0], [1, 0, 1], [0, 1, 1, 0]):
        state = DensityMPS.computational_product(bits)
        ket = np.zeros(2 ** len(bits))
        ket[int("".join(map(str, bits)), 2)] = 1.0
        np.testing.assert_allclose(
            state.to_dense_operator(), np.outer(ket, ket), atol=1e-15
        )
        assert list(state.bond_dims) == [1] * (len(bits) - 1)
        assert state.trace() == pytest.approx(1.0)
        assert state.l2_norm() == pytest.approx(1.0)


def test_dense_round_trip():
    rng = np.random.default_rng(2)
    for sites in (2, 3, 4):
        op = random_operator(rng, sites, hermitian=False)
        state = DensityMPS.from_dense_operator(op, sites)
        np.testing.assert_allclose(state.to_dense_operator(), op, atol=1e-12)
        assert state.sites == sites
        assert all(d <= PHYS_DIM ** min(k, sites - k) for k, d in enumerate(state.bond_dims, 1))


def test_trace_norm_inner_against_dense():
    rng = np.random.default_rng(8)
    for _ in range(5):
        a_op = random_operator(rng, 3)
        b_op = random_operator(rng, 3)
        a = DensityMPS.from_dense_operator(a_op, 3)
        b = DensityMPS.from_dense_operator(b_op, 3)
        assert a.trace() == pytest.approx(np.trace(a_op), abs=1e-12)
        assert a.l2_norm() == pytest.approx(np.linalg.norm(a_op), abs=1e-12)
        # inner product is the doubled-space overlap <vec(a)|vec(b)>
        want = np.vdot(vec_interleaved(a_op, 3), vec_interleaved(b_op, 3))
        assert a.inner(b) == pytest.approx(want, abs=1e-12)
        assert a.l2_distance(b) == pytest.approx(np.linalg.norm(a_op - b_op), abs=1e-12)


def test_move_center_preserves_state_and_canonicalizes():
    rng = np.random.default_rng(21)
    op = random_operator(rng, 4)
    state = DensityMPS.from_dense_operator(op, 4)
    dense0 = state.to_dense_operator()
    for pos in (0, 2, 3, 1):
        state.move_center(pos)
        np.testing.assert_allclose(state.to_dense_operator(), dense0, atol=1e-12)
        center = state.center
        assert center is not None
        for k, t in enumerate(state.tensors):
            mat = t.reshape(-1, t.shape[2]) if k < center else t.reshape(t.shape[0], -1)
            if k < center:  # left-orthonormal
                np.testing.assert_allclose(
                    mat.conj().T @ mat, np.eye(t.shape[2]), atol=1e-12
                )
            elif k > center:  # right-orthonormal
                np.testing.assert_allclose(
                    mat @ mat.conj().T, np.eye(t.shape[0]), atol=1e-12
                )
        # with a canonical center the norm is just the center tensor's norm
        assert state.l2_norm() == pytest.approx(np.linalg.norm(op), abs=1e-12)


def test_schmidt_spectrum_matches_dense_svd():
    rng = np.random.default_rng(5)
    sites = 4
    op = random_operator(rng, sites)
    state = DensityMPS.from_dense_operator(op, sites)
    v = vec_interleaved(op, sites)
    for bond in range(1, sites):
        spec = state.schmidt_spectrum(bond)
        dense_s = np.linalg.svd(
            v.reshape(PHYS_DIM**bond, PHYS_DIM ** (sites - bond)), compute_uv=False
        )
        dense_s = dense_s[dense_s > 1e-14]
        np.testing.assert_allclose(
            np.sort(spec.values)[::-1][: dense_s.size], dense_s, atol=1e-12
        )
        w = spec.weights()
        assert w.sum() == pytest.approx(1.0)


def test_truncate_reports_exact_discarded_weight():
    rng = np.random.default_rng(31)
    sites = 5
    for trial in range(8):
        op = random_operator(rng, sites)
        state = DensityMPS.from_dense_operator(op, sites)
        delta = 10.0 ** rng.uniform(-8, -2)
        trunc, report = state.truncate(delta)
        assert len(report.bond_deltas) == sites - 1
        assert all(d <= delta + 1e-15 for d in report.bond_deltas)
        assert report.delta_sum == pytest.approx(sum(report.bond_deltas))
        assert list(trunc.bond_dims) == [int(r) for r in report.bond_ranks]
        assert report.pre_l2 == pytest.approx(state.l2_norm(), rel=1e-12)
        assert report.post_l2 == pytest.approx(trunc.l2_norm(), rel=1e-12)
        # the distance bound sqrt(2 sum delta) * |rho| holds exactly;
        # measure the distance densely to dodge inner-product cancellation
        dist = np.linalg.norm(state.to_dense_operator() - trunc.to_dense_operator())
        bound = np.sqrt(2.0 * report.delta_sum) * report.pre_l2
        assert dist <= bound * (1.0 + 1e-12) + 1e-13


def test_truncate_zero_cutoff_is_lossless():
    rng = np.random.default_rng(4)
    op = random_operator(rng, 4)
    state = DensityMPS.from_dense_operator(op, 4)
    trunc, report = state.truncate(0.0)
    np.testing.assert_allclose(trunc.to_dense_operator(), op, atol=1e-12)
    assert report.delta_sum == 0.0


def test_truncate_leaves_source_untouched():
    rng = np.random.default_rng(9)
    op = random_operator(rng, 4)
    state = DensityMPS.from_dense_operator(op, 4)
    before = state.to_dense_operator()
    state.truncate(1e-3)
    np.testing.assert_allclose(state.to_dense_operator(), before, atol=0)


def test_renormalize_restores_unit_trace():
    rng = np.random.default_rng(14)
    op = random_operator(rng, 3)
    op = op + 2.0 * np.eye(8)  # ensure a solidly nonzero trace
    state = DensityMPS.from_dense_operator(op, 3)
    renormed, factor = state.renormalize()
    assert renormed.trace() == pytest.approx(1.0, abs=1e-12)
    assert factor == pytest.approx(1.0 / np.trace(op).real, rel=1e-12)
    np.testing.assert_allclose(
        renormed.to_dense_operator(), op / np.trace(op).real, atol=1e-12
    )


def test_renormalize_rejects_traceless():
    op = np.diag([1.0, -1.0])  # traceless single... two-site via kron
    full = np.kron(op, np.eye(2))
    state = DensityMPS.from_dense_operator(full, 2)
    with pytest.raises(DegenerateTraceError):
        state.renormalize()


def test_operator_entanglement_limits():
    # product operators carry zero operator entanglement at every cut
    mixed = DensityMPS.from_dense_operator(np.eye(8) / 8.0, 3)
    pure = DensityMPS.computational_product([0, 1, 0])
    for cut in (1, 2):
        assert mixed.operator_entanglement(cut) == pytest.approx(0.0, abs=1e-12)
        assert pure.operator_entanglement(cut) == pytest.approx(0.0, abs=1e-12)
    # a Bell projector is maximally operator-entangled across the middle:
    # vec(rho) has 4 equal Schmidt values -> S_op = 2 bits
    bell = np.zeros((4, 4))
    for i in (0, 3):
        for j in (0, 3):
            bell[i, j] = 0.5
    state = DensityMPS.from_dense_operator(bell, 2)
    assert state.operator_entanglement(1) == pytest.approx(2.0, abs=1e-12)


def test_save_load_round_trip(tmp_path):
    rng = np.random.default_rng(23)
    op = random_operator(rng, 3)
    state = DensityMPS.from_dense_operator(op, 3)
    state.move_center(1)
    path = tmp_path / "state.npz"
    state.save(path)
    loaded = DensityMPS.load(path)
    assert loaded.sites == state.sites
    assert loaded.center == state.center
    for a, b in zip(loaded.tensors, state.tensors):
        np.testing.assert_array_equal(a, b)


def test_copy_is_independent_for_gauge_moves():
    rng = np.random.default_rng(27)
    op = random_operator(rng, 3)
    state = DensityMPS.from_dense_operator(op, 3)
    clone = state.copy()
    clone.move_center(0)
    # the copy's gauge move must not disturb the original's dense content
    np.testing.assert_allclose(state.to_dense_operator(), op, atol=1e-12)
    np.testing.assert_allclose(clone.to_dense_operator(), op, atol=1e-12)


def test_from_dense_rejects_bad_shapes():
    with pytest.raises(ShapeError):
        DensityMPS.from_dense_operator(np.zeros((3, 3)), 2)
