"""Least-squares-regression baseline: dense self-expressive coefficients in
closed form."""

import numpy as np

from .errors import DimensionMismatch, InvalidConfig, NonFiniteInput
from .linalg import solve_spd


def lsr_solve(X, lam, zero_diag=False):
    """Minimize ||X - X Z||_F^2 + lam ||Z||_F^2 over n x n coefficients Z.

    With zero_diag the self-coefficient of every sample is eliminated
    exactly (column j is the ridge regression of sample j on the remaining
    samples), recovered from the unconstrained inverse in one shot:
    Z = I - P / diag(P) with P = (X'X + lam I)^{-1}, then a hard zero
    diagonal.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DimensionMismatch(f"X must be 2-d, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise NonFiniteInput("X contains NaN or Inf")
    if not np.isfinite(lam) or lam <= 0:
        raise InvalidConfig(f"lam must be positive, got {lam}")
    n = X.shape[1]
    xtx = X.T @ X
    A = xtx + lam * np.eye(n)
    if not zero_diag:
        return solve_spd(A, xtx, side="left")
    P = solve_spd(A, np.eye(n), side="left")
    Z = np.eye(n) - P / np.diag(P)[None, :]
    np.fill_diagonal(Z, 0.0)
    return Z
