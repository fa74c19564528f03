import numpy as np
import pytest

from idr import (
    DimensionMismatch,
    InvalidK,
    NonFiniteInput,
    NonPositiveAlpha,
    l21_prox,
    solve_spd,
    symmetrize_nonneg,
    trace_projection,
)
from helpers import (
    beats_random_perturbations,
    gauss_jordan_inverse,
    kkt_trace_projection,
    make_spd,
)


class TestSolveSpd:
    def test_identity_system(self):
        B = np.arange(6.0).reshape(3, 2)
        np.testing.assert_array_equal(solve_spd(np.eye(3), B), B)

    def test_diagonal_scaling(self):
        V = solve_spd(2.0 * np.eye(2), np.array([[4.0], [6.0]]))
        np.testing.assert_allclose(V, [[2.0], [3.0]], atol=1e-14)

    def test_random_spd_against_gauss_jordan(self, rng):
        R = rng.standard_normal((8, 8))
        A = R @ R.T + 0.5 * np.eye(8)
        B = rng.standard_normal((8, 3))
        V = solve_spd(A, B)
        assert np.linalg.norm(A @ V - B) / np.linalg.norm(B) <= 1e-10
        np.testing.assert_allclose(V, gauss_jordan_inverse(A) @ B, rtol=1e-8, atol=1e-10)

    def test_right_side(self, rng):
        R = rng.standard_normal((6, 6))
        A = R @ R.T + np.eye(6)
        B = rng.standard_normal((4, 6))
        V = solve_spd(A, B, side="right")
        assert np.linalg.norm(V @ A - B) / np.linalg.norm(B) <= 1e-10

    @pytest.mark.parametrize("cond", [1e2, 1e4, 1e6, 1e8])
    def test_round_trip_up_to_cond_1e8(self, cond, rng):
        A = make_spd(12, cond, rng)
        V_true = rng.standard_normal((12, 4))
        B = A @ V_true
        V = solve_spd(A, B)
        assert np.linalg.norm(A @ V - B) / np.linalg.norm(B) <= 1e-10

    def test_pseudo_inverse_fallback_on_singular(self, rng):
        # rank-deficient PSD: Cholesky fails, pinv path must still solve
        # consistent systems
        Q, _ = np.linalg.qr(rng.standard_normal((5, 5)))
        A = (Q * [3.0, 2.0, 1.0, 0.0, 0.0]) @ Q.T
        A = (A + A.T) / 2
        V_true = rng.standard_normal((5, 2))
        B = A @ V_true
        V = solve_spd(A, B)
        assert np.linalg.norm(A @ V - B) <= 1e-8 * np.linalg.norm(B)

    def test_errors(self):
        with pytest.raises(NonFiniteInput):
            solve_spd(np.array([[1.0, 0.0], [0.0, np.nan]]), np.eye(2))
        with pytest.raises(NonFiniteInput):
            solve_spd(np.eye(2), np.array([[np.inf], [0.0]]))
        with pytest.raises(DimensionMismatch):
            solve_spd(np.eye(2), np.eye(3))
        with pytest.raises(DimensionMismatch):
            solve_spd(np.ones((2, 3)), np.eye(2))
        with pytest.raises(DimensionMismatch):
            solve_spd(np.eye(2), np.ones(2))
        with pytest.raises(ValueError):
            solve_spd(np.eye(2), np.eye(2), side="up")


class TestL21Prox:
    def test_shrinks_column(self):
        Q = np.array([[3.0], [4.0]])
        np.testing.assert_allclose(l21_prox(Q, 1.0), [[2.4], [3.2]], atol=1e-14)

    def test_kills_small_column(self):
        Q = np.array([[0.3], [0.4]])  # norm 0.5 < alpha
        np.testing.assert_array_equal(l21_prox(Q, 1.0), np.zeros((2, 1)))

    def test_random_probe_optimality(self, rng):
        Q = rng.standard_normal((4, 6))
        P = l21_prox(Q, 0.3)
        assert beats_random_perturbations(P, Q, 0.3, rng)

    def test_nonexpansive_on_random_pairs(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            d, n = rng.integers(1, 8), rng.integers(1, 8)
            alpha = float(rng.uniform(0.05, 2.0))
            Q1 = rng.standard_normal((d, n))
            Q2 = rng.standard_normal((d, n))
            lhs = np.linalg.norm(l21_prox(Q1, alpha) - l21_prox(Q2, alpha))
            assert lhs <= np.linalg.norm(Q1 - Q2) + 1e-12

    def test_columns_are_nonneg_multiples_of_input(self, rng):
        Q = rng.standard_normal((5, 7))
        P = l21_prox(Q, 0.7)
        for i in range(7):
            q, p = Q[:, i], P[:, i]
            scale = p @ q / (q @ q)
            assert scale >= 0.0
            np.testing.assert_allclose(p, scale * q, atol=1e-12)

    def test_errors(self):
        with pytest.raises(NonPositiveAlpha):
            l21_prox(np.ones((2, 2)), 0.0)
        with pytest.raises(NonPositiveAlpha):
            l21_prox(np.ones((2, 2)), -1.0)
        with pytest.raises(NonFiniteInput):
            l21_prox(np.array([[np.nan, 1.0]]), 1.0)
        with pytest.raises(DimensionMismatch):
            l21_prox(np.ones(3), 1.0)


class TestTraceProjection:
    def test_identity_already_feasible(self):
        np.testing.assert_array_equal(trace_projection(np.eye(3), 3), np.eye(3))

    def test_zero_matrix(self):
        D = trace_projection(np.zeros((4, 4)), 2)
        np.testing.assert_allclose(np.diag(D), 0.5)
        assert np.all(D[~np.eye(4, dtype=bool)] == 0.0)

    def test_matches_kkt_oracle(self, rng):
        M = rng.standard_normal((5, 5))
        D = trace_projection(M, 3)
        np.testing.assert_allclose(D, kkt_trace_projection(M, 3), atol=1e-9)

    def test_off_diagonals_bit_identical(self, rng):
        M = rng.standard_normal((6, 6))
        D = trace_projection(M, 2)
        off = ~np.eye(6, dtype=bool)
        assert np.array_equal(D[off], M[off])

    def test_trace_exact(self, rng):
        M = rng.standard_normal((9, 9)) * 10
        D = trace_projection(M, 4)
        assert abs(np.trace(D) - 4.0) <= 1e-12 * 9

    def test_idempotent(self, rng):
        M = rng.standard_normal((7, 7))
        once = trace_projection(M, 3)
        twice = trace_projection(once, 3)
        assert np.max(np.abs(twice - once)) <= 1e-12

    def test_preserves_symmetry(self, rng):
        M = rng.standard_normal((6, 6))
        M = M + M.T
        D = trace_projection(M, 2)
        assert np.array_equal(D, D.T)

    def test_errors(self):
        with pytest.raises(DimensionMismatch):
            trace_projection(np.ones((2, 3)), 1)
        with pytest.raises(InvalidK):
            trace_projection(np.eye(3), 0)
        with pytest.raises(InvalidK):
            trace_projection(np.eye(3), 4)
        with pytest.raises(InvalidK):
            trace_projection(np.eye(3), 1.5)


class TestSymmetrizeNonneg:
    def test_clip_then_average(self):
        S = np.array([[1.0, -2.0], [4.0, 1.0]])
        np.testing.assert_array_equal(symmetrize_nonneg(S), [[1.0, 2.0], [2.0, 1.0]])

    def test_fixed_point(self, rng):
        S = np.abs(rng.standard_normal((5, 5)))
        S = (S + S.T) / 2
        np.testing.assert_array_equal(symmetrize_nonneg(S), S)

    def test_all_negative(self):
        np.testing.assert_array_equal(symmetrize_nonneg(-np.eye(3)), np.zeros((3, 3)))

    def test_output_exactly_symmetric_nonneg(self, rng):
        S = rng.standard_normal((8, 8))
        P = symmetrize_nonneg(S)
        assert np.array_equal(P, P.T)
        assert np.all(P >= 0.0)

    def test_errors(self):
        with pytest.raises(DimensionMismatch):
            symmetrize_nonneg(np.ones((2, 3)))
