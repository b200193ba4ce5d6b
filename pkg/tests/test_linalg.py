import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import det_bisection_roots, random_symmetric
from thompsonmodes.errors import IndexOutOfRange, NonPositiveDiagonal, NotDiagonal, NotSymmetric
from thompsonmodes.linalg import diag_power, principal_submatrix, sym_eigen


def check_eigen_invariants(a, res):
    n = a.shape[0]
    assert np.all(np.diff(res.values) >= 0)
    gram = res.vectors.T @ res.vectors
    assert np.max(np.abs(gram - np.eye(n))) <= 1e-10
    bound = 1e-9 * (np.max(np.abs(res.values)) + 1)
    for k in range(n):
        v = res.vectors[:, k]
        assert np.max(np.abs(a @ v - res.values[k] * v)) <= bound


class TestSymEigen:
    def test_diagonal(self):
        res = sym_eigen(np.diag([2.0, 1.0]))
        np.testing.assert_array_equal(res.values, [1.0, 2.0])
        np.testing.assert_array_equal(res.vectors, [[0.0, 1.0], [1.0, 0.0]])

    def test_swap_matrix(self):
        res = sym_eigen([[0.0, 1.0], [1.0, 0.0]])
        np.testing.assert_allclose(res.values, [-1.0, 1.0], atol=1e-15)
        np.testing.assert_allclose(np.abs(res.vectors), np.full((2, 2), 2**-0.5), atol=1e-15)

    def test_matches_determinant_roots(self):
        a = random_symmetric(np.random.default_rng(6), 6)
        res = sym_eigen(a)
        np.testing.assert_allclose(res.values, det_bisection_roots(a), rtol=0, atol=1e-9)
        check_eigen_invariants(a, res)

    def test_sign_convention(self):
        res = sym_eigen(random_symmetric(np.random.default_rng(3), 7))
        for k in range(7):
            col = res.vectors[:, k]
            assert col[np.argmax(np.abs(col))] > 0

    def test_sign_tie_goes_to_lowest_index(self):
        res = sym_eigen([[0.0, 1.0], [1.0, 0.0]])
        assert np.all(res.vectors[0] > 0)

    def test_deterministic(self):
        a = random_symmetric(np.random.default_rng(9), 8)
        r1, r2 = sym_eigen(a), sym_eigen(a)
        np.testing.assert_array_equal(r1.values, r2.values)
        np.testing.assert_array_equal(r1.vectors, r2.vectors)

    def test_input_untouched(self):
        a = random_symmetric(np.random.default_rng(1), 4)
        before = a.copy()
        sym_eigen(a)
        np.testing.assert_array_equal(a, before)

    def test_empty_and_scalar(self):
        empty = sym_eigen(np.zeros((0, 0)))
        assert empty.values.shape == (0,) and empty.vectors.shape == (0, 0)
        one = sym_eigen([[3.5]])
        assert one.values.tolist() == [3.5] and one.vectors.tolist() == [[1.0]]

    def test_zero_matrix(self):
        res = sym_eigen(np.zeros((3, 3)))
        np.testing.assert_array_equal(res.values, np.zeros(3))
        np.testing.assert_array_equal(res.vectors, np.eye(3))

    def test_rejects_asymmetric(self):
        with pytest.raises(NotSymmetric):
            sym_eigen([[1.0, 2.0], [2.1, 1.0]])

    def test_symmetry_tolerance_is_relative(self):
        a = np.array([[1.0, 2.0], [2.0 + 1e-13, 1.0]]) * 1e-18
        sym_eigen(a)
        with pytest.raises(NotSymmetric):
            sym_eigen(a, symmetry_tol=1e-15)

    def test_physical_scale(self):
        a = random_symmetric(np.random.default_rng(4), 5) * 1e-19
        check_eigen_invariants(a, sym_eigen(a))
        np.testing.assert_allclose(sym_eigen(a).values, np.linalg.eigvalsh(a), rtol=0, atol=1e-30)

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 10))
    def test_reconstruction(self, seed, n):
        a = random_symmetric(np.random.default_rng(seed), n)
        res = sym_eigen(a)
        check_eigen_invariants(a, res)
        rebuilt = res.vectors @ np.diag(res.values) @ res.vectors.T
        assert np.max(np.abs(a - rebuilt)) <= 1e-9 * (1 + np.max(np.abs(a)))

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 9))
    def test_cauchy_interlacing(self, seed, n):
        a = random_symmetric(np.random.default_rng(seed), n)
        lam = sym_eigen(a).values
        tol = 1e-10 * (lam[-1] - lam[0])
        for j in range(1, n + 1):
            mu = sym_eigen(principal_submatrix(a, j)).values
            assert np.all(lam[:-1] - tol <= mu) and np.all(mu <= lam[1:] + tol)


class TestPrincipalSubmatrix:
    def test_identity(self):
        np.testing.assert_array_equal(principal_submatrix(np.eye(3), 2), np.eye(2))

    def test_to_empty(self):
        assert principal_submatrix([[5.0]], 1).shape == (0, 0)

    def test_removes_row_and_column(self):
        a = np.arange(16.0).reshape(4, 4)
        np.testing.assert_array_equal(
            principal_submatrix(a, 2), [[0, 2, 3], [8, 10, 11], [12, 14, 15]]
        )

    def test_original_untouched(self):
        a = np.arange(9.0).reshape(3, 3)
        sub = principal_submatrix(a, 1)
        sub[0, 0] = -1
        assert a[1, 1] == 4.0

    @pytest.mark.parametrize("j", [0, 4, -1])
    def test_out_of_range(self, j):
        with pytest.raises(IndexOutOfRange):
            principal_submatrix(np.eye(3), j)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 8), data=st.data())
    def test_commutes_with_diagonal_product(self, seed, n, data):
        rng = np.random.default_rng(seed)
        c = np.diag(rng.uniform(0.1, 2.0, n))
        m = random_symmetric(rng, n)
        j = data.draw(st.integers(1, n))
        lhs = principal_submatrix(c @ m, j)
        rhs = principal_submatrix(c, j) @ principal_submatrix(m, j)
        np.testing.assert_array_equal(lhs, rhs)


class TestDiagPower:
    def test_square_root(self):
        np.testing.assert_array_equal(diag_power(np.diag([4.0, 9.0]), 0.5), np.diag([2.0, 3.0]))

    def test_inverse_square_root(self):
        np.testing.assert_allclose(diag_power(np.diag([4.0, 9.0]), -0.5), np.diag([0.5, 1 / 3]), rtol=1e-15)

    def test_half_squared_is_original(self):
        c = np.diag([6.3e-12, 5.2e-12, 1.0, 7.0])
        half = diag_power(c, 0.5)
        np.testing.assert_allclose(half @ half, c, rtol=1e-14)

    def test_not_diagonal(self):
        with pytest.raises(NotDiagonal):
            diag_power([[1.0, 0.1], [0.0, 1.0]], 0.5)

    def test_non_positive(self):
        with pytest.raises(NonPositiveDiagonal):
            diag_power(np.diag([1.0, 0.0]), 0.5)
