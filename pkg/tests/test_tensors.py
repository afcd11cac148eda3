import numpy as np
import pytest

from shallow2d.tensors import contract, haar_unitaries, haar_unitary, svd_truncate


def test_contract_identity_returns_vector():
    rng = np.random.default_rng(0)
    v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    out = contract(np.eye(2), [1], v, [0])
    np.testing.assert_allclose(out, v, atol=1e-15)


def test_contract_matches_triple_loop_matmul():
    rng = np.random.default_rng(1)
    a = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
    b = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    expected = np.zeros((2, 4), dtype=complex)
    for i in range(2):
        for j in range(4):
            for k in range(3):
                expected[i, j] += a[i, k] * b[k, j]
    np.testing.assert_allclose(contract(a, [1], b, [0]), expected, atol=1e-13)


def test_contract_with_own_conjugate_is_squared_norm():
    rng = np.random.default_rng(2)
    t = rng.standard_normal((2, 3, 2)) + 1j * rng.standard_normal((2, 3, 2))
    out = contract(t, [0, 1, 2], t.conj(), [0, 1, 2])
    assert out.shape == ()
    assert abs(out.imag) < 1e-12
    assert out.real == pytest.approx(np.sum(np.abs(t) ** 2))
    assert out.real >= 0


def test_contract_error_cases():
    with pytest.raises(ValueError):
        contract(np.eye(2), [0], np.eye(3), [0])
    with pytest.raises(IndexError):
        contract(np.eye(2), [5], np.eye(2), [0])


def test_contract_is_bilinear():
    rng = np.random.default_rng(3)
    for _ in range(5):
        a = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
        b = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
        alpha = rng.standard_normal() + 1j * rng.standard_normal()
        lhs = contract(alpha * a, [1], b, [0])
        rhs = alpha * contract(a, [1], b, [0])
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_svd_truncate_zero_budget_keeps_exact_values():
    out = svd_truncate(np.diag([1.0, 0.0]), weight_budget=0.0)
    assert out.discarded_weight == 0.0
    assert out.singular_values[0] == pytest.approx(1.0)
    assert len(out.singular_values) in (1, 2)


def test_svd_truncate_suffix_budget_rule():
    m = np.diag([0.8, 0.6])  # squared weights 0.64 and 0.36
    keep_both = svd_truncate(m, weight_budget=0.35)
    assert len(keep_both.singular_values) == 2
    assert keep_both.discarded_weight == 0.0
    drop_one = svd_truncate(m, weight_budget=0.37)
    assert len(drop_one.singular_values) == 1
    assert drop_one.discarded_weight == pytest.approx(0.36)


def test_svd_truncate_untruncated_reconstructs_input():
    rng = np.random.default_rng(4)
    m = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    out = svd_truncate(m, weight_budget=0.0)
    recon = out.left @ np.diag(out.singular_values) @ out.right
    assert np.max(np.abs(recon - m)) < 1e-10


def test_svd_truncate_reconstruction_error_equals_discard():
    rng = np.random.default_rng(5)
    m = rng.standard_normal((12, 9)) + 1j * rng.standard_normal((12, 9))
    m /= np.linalg.norm(m)
    out = svd_truncate(m, weight_budget=0.05)
    recon = out.left @ np.diag(out.singular_values) @ out.right
    err = np.linalg.norm(m - recon) ** 2
    assert err == pytest.approx(out.discarded_weight, rel=1e-10, abs=1e-14)


def test_svd_truncate_max_rank_and_isometries():
    rng = np.random.default_rng(6)
    m = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    out = svd_truncate(m, max_rank=5, weight_budget=0.0)
    assert out.rank == 5
    np.testing.assert_allclose(out.left.conj().T @ out.left, np.eye(5), atol=1e-10)
    np.testing.assert_allclose(out.right @ out.right.conj().T, np.eye(5), atol=1e-10)
    assert np.all(np.diff(out.singular_values) <= 1e-12)
    full = np.linalg.svd(m, compute_uv=False)
    assert out.discarded_weight == pytest.approx(np.sum(full[5:] ** 2), rel=1e-10)


def test_svd_truncate_degenerate_boundary_keeps_ties():
    # Equal trailing values: budget admits dropping one of them, but the tie
    # with the last kept value forces both to stay.
    m = np.diag([1.0, 0.5, 0.5])
    out = svd_truncate(m / np.linalg.norm(np.diag(m)), weight_budget=0.17)
    assert len(out.singular_values) == 3
    assert out.discarded_weight == 0.0


def test_full_svd_identity_on_random_sizes():
    rng = np.random.default_rng(7)
    for n, m in [(3, 5), (17, 17), (64, 64)]:
        a = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
        out = svd_truncate(a, weight_budget=0.0)
        recon = out.left @ np.diag(out.singular_values) @ out.right
        assert np.max(np.abs(recon - a)) < 1e-10


def test_haar_unitarity():
    for dim in (2, 4):
        u = haar_unitary(dim, np.random.default_rng(8))
        np.testing.assert_allclose(u.conj().T @ u, np.eye(dim), atol=1e-12)


def test_haar_seed_reproducibility():
    a = haar_unitary(4, np.random.default_rng(9))
    b = haar_unitary(4, np.random.default_rng(9))
    c = haar_unitary(4, np.random.default_rng(10))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_haar_fourth_moment_of_corner_entry():
    # q * E|U00|^4 = 2/(q+1) for U(q), so E|U00|^4 = 1/3 at q = 2.
    u = haar_unitaries(2, 1_000_000, np.random.default_rng(11))
    est = float(np.mean(np.abs(u[:, 0, 0]) ** 4))
    assert est == pytest.approx(1.0 / 3.0, abs=0.005)


def test_haar_second_moment_of_corner_entry():
    # Columns are unit vectors with exchangeable entries: E|U00|^2 = 1/q.
    u = haar_unitaries(2, 1_000_000, np.random.default_rng(12))
    est = float(np.mean(np.abs(u[:, 0, 0]) ** 2))
    assert est == pytest.approx(0.5, abs=0.005)


def test_haar_phase_fix_gives_uniform_marginal():
    # For U(2), |U00|^2 is uniform on [0,1]; a bad phase fix skews it.
    from scipy.stats import kstest

    n = 100_000
    u = haar_unitaries(2, n, np.random.default_rng(13))
    stat = kstest(np.abs(u[:, 0, 0]) ** 2, "uniform").statistic
    assert stat < 1.63 / np.sqrt(n)  # 1% critical value
