"""Dense kernels shared by the solver updates: SPD solves and proximal maps."""

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, InvalidK, NonFiniteInput, NonPositiveAlpha

# One refinement pass is usually a no-op; two keep the residual near machine
# precision even for condition numbers around 1e8.
_MAX_REFINE = 2
_REFINE_TOL = 1e-13


def _check_finite(name, M):
    if not np.all(np.isfinite(M)):
        raise NonFiniteInput(f"{name} contains NaN or Inf")


def solve_spd(A, B, side="left"):
    """Solve A @ V = B (side='left') or V @ A = B (side='right') for a
    symmetric positive definite A.

    Cholesky factorization plus iterative refinement; falls back to a
    pseudo-inverse if the factorization fails.  Symmetry of A is the
    caller's responsibility (only one triangle is factorized).
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"A must be square, got shape {A.shape}")
    if B.ndim != 2:
        raise DimensionMismatch(f"B must be 2-d, got shape {B.shape}")
    n = A.shape[0]
    if side == "left" and B.shape[0] != n:
        raise DimensionMismatch(f"A is {n}x{n} but B has {B.shape[0]} rows")
    if side == "right" and B.shape[1] != n:
        raise DimensionMismatch(f"A is {n}x{n} but B has {B.shape[1]} columns")
    _check_finite("A", A)
    _check_finite("B", B)

    if side == "right":
        # V A = B  <=>  A Vt = Bt for symmetric A
        return solve_spd(A, B.T, side="left").T

    try:
        factor = scipy.linalg.cho_factor(A, check_finite=False)
    except np.linalg.LinAlgError:
        return np.linalg.pinv(A, hermitian=True) @ B

    V = scipy.linalg.cho_solve(factor, B, check_finite=False)
    scale = np.linalg.norm(B)
    if scale > 0.0:
        for _ in range(_MAX_REFINE):
            R = B - A @ V
            if np.linalg.norm(R) <= _REFINE_TOL * scale:
                break
            V = V + scipy.linalg.cho_solve(factor, R, check_finite=False)
    return V


def l21_prox(Q, alpha):
    """Columnwise group shrinkage: the minimizer of

        alpha * ||P||_{2,1} + 1/2 * ||P - Q||_F^2.

    Columns with norm <= alpha collapse to zero; the others shrink toward
    the origin by alpha while keeping their direction.
    """
    Q = np.asarray(Q, dtype=float)
    if Q.ndim != 2:
        raise DimensionMismatch(f"Q must be 2-d, got shape {Q.shape}")
    if not np.isfinite(alpha) or alpha <= 0.0:
        raise NonPositiveAlpha(f"alpha must be a positive finite scalar, got {alpha}")
    _check_finite("Q", Q)
    norms = np.linalg.norm(Q, axis=0)
    scale = np.zeros_like(norms)
    hit = norms > alpha
    scale[hit] = (norms[hit] - alpha) / norms[hit]
    return Q * scale


def trace_projection(M, k):
    """Euclidean projection of a square matrix onto {D : trace(D) = k}.

    Only the diagonal moves: every diagonal entry is shifted by the uniform
    correction (k - trace(M)) / n, off-diagonal entries pass through
    untouched.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"M must be square, got shape {M.shape}")
    n = M.shape[0]
    if int(k) != k or k < 1 or k > n:
        raise InvalidK(f"k must be an integer in [1, {n}], got {k}")
    _check_finite("M", M)
    D = M.copy()
    diag = np.diag_indices(n)
    D[diag] += (k - float(np.trace(M))) / n
    return D


def symmetrize_nonneg(S):
    """Clip negative entries to zero, then average with the transpose."""
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DimensionMismatch(f"S must be square, got shape {S.shape}")
    P = np.maximum(S, 0.0)
    return (P + P.T) / 2.0
