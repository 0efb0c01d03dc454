import numpy as np
import pytest

from conftest import crandn, random_hermitian, random_psd
from framelab.errors import (
    NotHermitian,
    NotPositiveSemidefinite,
    ShapeMismatch,
    SingularMatrix,
)
from framelab.linalg import (
    DEFAULT_TOL,
    TolerancePolicy,
    dft,
    hermitian_eig,
    kernel_basis,
    operator_norm,
    orthonormal_range,
    polar,
    pseudoinverse,
    psd_power,
    rank,
    rng_for,
    subspace_equal,
    svd,
)


class TestTolerancePolicy:
    def test_defaults(self):
        t = TolerancePolicy()
        assert t.rel_eq == 1e-9
        assert t.rank_rel == 1e-10
        assert t.psd_floor == 1e-10

    @pytest.mark.parametrize("bad", [{"rel_eq": 0.0}, {"rank_rel": -1e-3}, {"psd_floor": 1.0}])
    def test_rejects_out_of_range(self, bad):
        with pytest.raises(ValueError):
            TolerancePolicy(**bad)


class TestHermitianEig:
    def test_ones_matrix(self):
        # spectrum of [[1,1],[1,1]] is {0, 2}
        w, V = hermitian_eig([[1, 1], [1, 1]])
        assert np.allclose(w, [0.0, 2.0], atol=1e-14)
        s = 1 / np.sqrt(2)
        assert np.allclose(V[:, 0], [s, -s], atol=1e-14)
        assert np.allclose(V[:, 1], [s, s], atol=1e-14)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            hermitian_eig([[0, 1], [0, 0]])

    def test_rejects_non_square(self):
        with pytest.raises(ShapeMismatch):
            hermitian_eig(np.ones((2, 3)))

    def test_reconstruction_sweep(self):
        # oracle: V diag(w) V* rebuilds A
        rng = rng_for(2024, 1)
        for _ in range(200):
            d = int(rng.integers(1, 65))
            A = random_hermitian(rng, d)
            w, V = hermitian_eig(A)
            assert np.all(np.diff(w) >= -1e-12)
            err = np.linalg.norm((V * w[None, :]) @ V.conj().T - A)
            assert err <= 10 * DEFAULT_TOL.rel_eq * max(np.linalg.norm(A), 1.0)
            assert np.linalg.norm(V.conj().T @ V - np.eye(d)) <= 1e-12 * max(d, 1)

    def test_phase_convention(self):
        rng = rng_for(2024, 2)
        for _ in range(50):
            d = int(rng.integers(2, 12))
            _, V = hermitian_eig(random_hermitian(rng, d))
            for j in range(d):
                col = V[:, j]
                i = int(np.argmax(np.abs(col) > DEFAULT_TOL.rel_eq * np.abs(col).max()))
                assert abs(col[i].imag) <= 1e-12
                assert col[i].real > 0


class TestSvdRankPinv:
    def test_pinv_column_of_ones(self):
        # least squares inverse of (1,1)^T averages the coordinates
        P = pseudoinverse(np.array([[1.0], [1.0]]))
        assert np.allclose(P, [[0.5, 0.5]], atol=1e-14)

    def test_rank_values(self):
        rng = rng_for(2024, 3)
        v = crandn(rng, 5)
        assert rank(np.outer(v, v.conj())) == 1
        assert rank(crandn(rng, 5, 3)) == 3
        assert rank(np.zeros((4, 4))) == 0

    def test_moore_penrose_properties(self):
        rng = rng_for(2024, 4)
        for _ in range(60):
            m = int(rng.integers(1, 9))
            n = int(rng.integers(1, 9))
            r = int(rng.integers(1, min(m, n) + 1))
            A = crandn(rng, m, r) @ crandn(rng, r, n)
            P = pseudoinverse(A)
            assert np.allclose(A @ P @ A, A, atol=1e-9)
            assert np.allclose(P @ A @ P, P, atol=1e-9)
            assert np.allclose((A @ P).conj().T, A @ P, atol=1e-9)
            assert np.allclose((P @ A).conj().T, P @ A, atol=1e-9)

    def test_svd_factors(self):
        rng = rng_for(2024, 5)
        A = crandn(rng, 4, 7)
        U, s, V = svd(A)
        assert U.shape == (4, 4) and V.shape == (7, 7)
        assert np.all(np.diff(s) <= 1e-12)
        Smat = np.zeros((4, 7))
        Smat[:4, :4] = np.diag(s)
        assert np.allclose(U @ Smat @ V.conj().T, A, atol=1e-12)
        assert np.allclose(U.conj().T @ U, np.eye(4), atol=1e-12)
        assert np.allclose(V.conj().T @ V, np.eye(7), atol=1e-12)


class TestPsdPower:
    def test_inverse_sqrt_of_diagonal(self):
        out = psd_power(np.diag([4.0, 1.0]), -0.5)
        assert np.allclose(out, np.diag([0.5, 1.0]), atol=1e-14)

    def test_sqrt_roundtrip(self):
        rng = rng_for(2024, 6)
        for _ in range(50):
            d = int(rng.integers(1, 20))
            A = random_psd(rng, d)
            R = psd_power(A, 0.5)
            assert np.linalg.norm(R @ R - A) <= 10 * DEFAULT_TOL.rel_eq * max(np.linalg.norm(A), 1.0)

    def test_inverse_of_definite(self):
        rng = rng_for(2024, 7)
        A = random_psd(rng, 6) + 0.5 * np.eye(6)
        assert np.allclose(psd_power(A, -1.0) @ A, np.eye(6), atol=1e-9)

    def test_singular_negative_power(self):
        rng = rng_for(2024, 8)
        A = random_psd(rng, 5, r=3)
        with pytest.raises(SingularMatrix):
            psd_power(A, -1.0)

    def test_rejects_indefinite(self):
        with pytest.raises(NotPositiveSemidefinite):
            psd_power(np.diag([1.0, -1.0]), 0.5)

    def test_clamps_roundoff_negatives(self):
        A = np.diag([1.0, -5e-12])
        R = psd_power(A, 0.5)
        assert np.allclose(R, np.diag([1.0, 0.0]), atol=1e-6)


class TestPolar:
    def test_diagonal_sign_split(self):
        V, P = polar(np.diag([-2.0, 3.0]))
        assert np.allclose(V, np.diag([-1.0, 1.0]), atol=1e-14)
        assert np.allclose(P, np.diag([2.0, 3.0]), atol=1e-14)

    def test_zero_matrix_convention(self):
        V, P = polar(np.zeros((3, 3)))
        assert np.allclose(V, np.eye(3))
        assert np.allclose(P, 0)

    def test_factors_sweep(self):
        rng = rng_for(2024, 9)
        for k in range(60):
            d = int(rng.integers(1, 12))
            A = crandn(rng, d, d)
            if k % 3 == 0 and d > 1:
                A[:, 0] = A[:, 1]  # force rank deficiency
            V, P = polar(A)
            assert np.linalg.norm(V.conj().T @ V - np.eye(d)) <= 1e-11 * d
            assert np.linalg.norm(V @ P - A) <= 1e-10 * max(np.linalg.norm(A), 1.0)
            assert np.linalg.norm(P - P.conj().T) <= 1e-12 * max(np.linalg.norm(P), 1.0)
            assert np.min(np.linalg.eigvalsh((P + P.conj().T) / 2)) >= -1e-10


class TestDft:
    def test_delta_to_ones(self):
        assert np.allclose(dft([1, 0, 0, 0], -1), np.ones(4), atol=1e-14)

    def test_two_point(self):
        assert np.allclose(dft([0, 1], -1), [1, -1], atol=1e-14)

    def test_parseval_and_roundtrip(self):
        rng = rng_for(2024, 10)
        for _ in range(30):
            L = int(rng.integers(1, 64))
            x = crandn(rng, L)
            xh = dft(x, -1)
            assert abs(np.sum(np.abs(xh) ** 2) - L * np.sum(np.abs(x) ** 2)) <= 1e-9 * L
            assert np.allclose(dft(xh, 1) / L, x, atol=1e-12)

    def test_rejects_bad_sign(self):
        with pytest.raises(ValueError):
            dft([1, 0], 2)


class TestSubspaces:
    def test_basis_change_invariance(self):
        rng = rng_for(2024, 11)
        for _ in range(40):
            m = int(rng.integers(2, 10))
            k = int(rng.integers(1, m + 1))
            B = crandn(rng, m, k)
            T = crandn(rng, k, k) + 2 * np.eye(k)
            assert subspace_equal(B, B @ T)

    def test_distinct_subspaces(self):
        assert not subspace_equal(np.eye(3)[:, :1], np.eye(3)[:, 1:2])
        assert not subspace_equal(np.eye(3)[:, :1], np.eye(3)[:, :2])

    def test_zero_dimensional(self):
        assert subspace_equal(np.zeros((4, 2)), np.zeros((4, 1)))

    def test_ambient_mismatch(self):
        with pytest.raises(ShapeMismatch):
            subspace_equal(np.eye(3), np.eye(4))

    def test_kernel_basis(self):
        A = np.array([[1.0, 1.0]])
        K = kernel_basis(A)
        assert K.shape == (2, 1)
        assert np.allclose(A @ K, 0, atol=1e-12)
        assert np.allclose(K.conj().T @ K, np.eye(1), atol=1e-12)

    def test_orthonormal_range(self):
        rng = rng_for(2024, 12)
        B = crandn(rng, 6, 3)
        Q = orthonormal_range(B)
        assert Q.shape == (6, 3)
        assert np.allclose(Q.conj().T @ Q, np.eye(3), atol=1e-12)
        assert subspace_equal(Q, B)


class TestRngSplitting:
    def test_reproducible_and_disjoint(self):
        a = rng_for(7, 1).standard_normal(4)
        b = rng_for(7, 1).standard_normal(4)
        c = rng_for(7, 2).standard_normal(4)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)


def test_operator_norm_matches_top_singular_value():
    rng = rng_for(2024, 13)
    A = crandn(rng, 5, 7)
    s = np.linalg.svd(A, compute_uv=False)
    assert abs(operator_norm(A) - s[0]) <= 1e-12 * s[0]
