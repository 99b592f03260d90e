import numpy as np
import pytest

from coopswipt.errors import FactorizationError
from coopswipt.linalg import SOLVE_RTOL, cholesky, omp, solve_hermitian


def random_pd(rng, n, shift=1.0):
    b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return b @ b.conj().T + shift * np.eye(n)


class TestCholesky:
    def test_identity(self):
        assert np.array_equal(cholesky(np.eye(3)), np.eye(3))

    def test_scalar_square_root(self):
        assert cholesky(np.array([[4.0]]))[0, 0] == pytest.approx(2.0)

    def test_reconstruction_n20(self):
        rng = np.random.default_rng(0)
        r = random_pd(rng, 20)
        ell = cholesky(r)
        assert np.linalg.norm(ell @ ell.conj().T - r) <= 1e-10 * np.linalg.norm(r)

    def test_reconstruction_random_sizes(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            n = int(rng.integers(1, 65))
            r = random_pd(rng, n)
            ell = cholesky(r)
            assert np.linalg.norm(ell @ ell.conj().T - r) <= 1e-10 * np.linalg.norm(r)
            assert np.all(np.diag(ell).real > 0)
            assert np.all(np.diag(ell).imag == 0)
            assert np.array_equal(ell, np.tril(ell))

    def test_indefinite_reports_pivot(self):
        r = np.diag([1.0, -1.0, 2.0])
        with pytest.raises(FactorizationError) as info:
            cholesky(r)
        assert info.value.pivot == 1

    def test_non_hermitian_rejected(self):
        r = np.array([[1.0, 2.0], [0.5, 1.0]])
        with pytest.raises(ValueError, match="Hermitian"):
            cholesky(r)

    def test_hermitian_check_can_be_skipped(self):
        r = np.array([[2.0, 0.1], [0.10000001, 2.0]])
        ell = cholesky(r, check_hermitian=False)
        assert ell[0, 0] == pytest.approx(np.sqrt(2.0))

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            cholesky(np.ones((2, 3)))


class TestSolveHermitian:
    def test_identity(self):
        b = np.array([1.0 + 2j, -3.0])
        assert np.allclose(solve_hermitian(np.eye(2), b), b)

    def test_diagonal_scaling(self):
        x = solve_hermitian(2.0 * np.eye(2), np.array([4.0, 0.0]))
        assert np.allclose(x, [2.0, 0.0])

    def test_forward_multiply_oracle(self):
        rng = np.random.default_rng(2)
        r = random_pd(rng, 15)
        x0 = rng.standard_normal(15) + 1j * rng.standard_normal(15)
        x = solve_hermitian(r, r @ x0)
        assert np.linalg.norm(x - x0) <= 1e-8 * np.linalg.norm(x0)

    def test_residual_tolerance(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            n = int(rng.integers(2, 40))
            r = random_pd(rng, n)
            b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            x = solve_hermitian(r, b)
            assert np.linalg.norm(r @ x - b) <= SOLVE_RTOL * np.linalg.norm(b)


class TestOmp:
    def test_identity_measurement(self):
        sol = omp(np.eye(3), np.array([0.0, 2.0, 0.0]), 1)
        assert sol.support == [1]
        assert np.allclose(sol.vector, [0.0, 2.0, 0.0])
        assert sol.residual_norm == pytest.approx(0.0, abs=1e-15)

    def test_zero_target(self):
        sol = omp(np.eye(4), np.zeros(4), 3)
        assert sol.support == []
        assert sol.residual_norm_history == [0.0]
        assert np.array_equal(sol.vector, np.zeros(4))

    def test_dense_solve_oracle(self):
        rng = np.random.default_rng(4)
        a = rng.standard_normal((10, 10)) + 1j * rng.standard_normal((10, 10))
        y = rng.standard_normal(10) + 1j * rng.standard_normal(10)
        sol = omp(a, y, 10)
        direct = np.linalg.solve(a, y)
        assert sol.residual_norm <= 1e-10 * np.linalg.norm(y)
        assert np.linalg.norm(sol.vector - direct) <= 1e-8 * np.linalg.norm(direct)

    def test_orthogonal_support_recovery(self):
        rng = np.random.default_rng(5)
        a = np.linalg.qr(rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12)))[0]
        truth = {2, 7, 9}
        y = a[:, sorted(truth)] @ np.array([1.5, -2.0, 0.75 + 0.5j])
        sol = omp(a, y, 3)
        assert set(sol.support) == truth

    def test_residual_history_non_increasing(self):
        rng = np.random.default_rng(6)
        for _ in range(200):
            m = int(rng.integers(3, 20))
            n = int(rng.integers(3, 20))
            a = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
            y = rng.standard_normal(m) + 1j * rng.standard_normal(m)
            hist = omp(a, y, n).residual_norm_history
            slack = 1e-12 * hist[0]
            assert all(v <= u + slack for u, v in zip(hist, hist[1:]))

    def test_zero_columns_skipped(self):
        a = np.array([[0.0, 1.0], [0.0, 1.0]])
        sol = omp(a, np.array([1.0, 1.0]), 2)
        assert sol.support == [1]

    def test_normalization_affects_selection(self):
        # one strong-norm column aligned worse than a weak, better-aligned one
        a = np.array([[10.0, 1.0], [2.0, 1.0]])
        y = np.array([1.0, 1.0])
        normalized = omp(a, y, 1)
        raw = omp(a, y, 1, normalized=False)
        assert normalized.support == [1]
        assert raw.support == [0]

    def test_tie_breaks_to_lowest_index(self):
        a = np.array([[1.0, 1.0], [0.0, 0.0]])
        sol = omp(a, np.array([1.0, 0.0]), 1)
        assert sol.support == [0]

    def test_sparsity_bounds_rejected(self):
        a = np.eye(3)
        y = np.ones(3)
        with pytest.raises(ValueError):
            omp(a, y, 0)
        with pytest.raises(ValueError):
            omp(a, y, 4)

    def test_rank_deficient_support_flagged(self):
        # duplicated column: selecting both makes the support singular
        a = np.array([[1.0, 1.0, 0.5], [1.0, 1.0, -0.5], [0.0, 0.0, 1.0]])
        y = np.array([1.0, 0.5, 2.0])
        sol = omp(a, y, 3)
        if len(sol.support) == 3:
            assert sol.rank_deficient
        assert sol.residual_norm <= sol.residual_norm_history[0]

    def test_early_stop_on_tiny_residual(self):
        a = np.eye(5)
        y = np.zeros(5)
        y[3] = 1.0
        sol = omp(a, y, 5)
        assert sol.support == [3]
        assert len(sol.residual_norm_history) == 2
