"""Augmented-Lagrangian solver that learns reconstruction coefficient
matrices approximating normalized membership matrices.

The relaxed objective couples the coefficient matrix Z to a surrogate S that
is pushed toward the ideal structure (symmetric, non-negative, row sums one,
idempotent, trace equal to the cluster count) while a column-sparse term E
absorbs sample-specific corruption:

    min  ||Z - S||_F^2 + gamma * ||S - S C||_F^2 + lam * ||E||_{2,1}
    s.t. X = X Z + E,  S = C,  S = D,  1'C = 1',  trace(D) = k,
         S symmetric and non-negative.

All five block updates (Z, S, C, D, E) have closed forms; dual ascent on four
multipliers with a geometric penalty ramp enforces the constraints.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from threadpoolctl import threadpool_limits

from .errors import DimensionMismatch, IdrError, InvalidConfig, NonFiniteInput, NotNormalized
from .linalg import l21_prox, solve_spd, symmetrize_nonneg, trace_projection

_UNIT_NORM_TOL = 1e-8


@dataclass
class SolverConfig:
    """Hyper-parameters and schedule constants for :func:`solve_idr`.

    gamma weighs the idempotence surrogate, lam the column-sparse noise term,
    k is the number of clusters.  mu0/mu_max/rho drive the penalty ramp,
    epsilon is the feasibility tolerance of the stopping rule.
    """

    gamma: float
    lam: float
    k: int
    mu0: float = 1e-6
    mu_max: float = 1e4
    rho: float = 1.1
    epsilon: float = 1e-7
    maxiter: int = 500
    normalize: str = "auto"  # "auto": rescale off-norm columns with a warning; "strict": reject

    def validate(self, n=None):
        if not np.isfinite(self.gamma) or self.gamma <= 0:
            raise InvalidConfig(f"gamma must be positive, got {self.gamma}")
        if not np.isfinite(self.lam) or self.lam <= 0:
            raise InvalidConfig(f"lam must be positive, got {self.lam}")
        if int(self.k) != self.k or self.k < 1:
            raise InvalidConfig(f"k must be a positive integer, got {self.k}")
        if n is not None and self.k > n:
            raise InvalidConfig(f"k={self.k} exceeds the number of samples n={n}")
        if not 0 < self.mu0 <= self.mu_max:
            raise InvalidConfig(f"need 0 < mu0 <= mu_max, got mu0={self.mu0}, mu_max={self.mu_max}")
        if self.rho <= 1:
            raise InvalidConfig(f"rho must exceed 1, got {self.rho}")
        if self.epsilon <= 0:
            raise InvalidConfig(f"epsilon must be positive, got {self.epsilon}")
        if self.maxiter < 1:
            raise InvalidConfig(f"maxiter must be at least 1, got {self.maxiter}")
        if self.normalize not in ("auto", "strict"):
            raise InvalidConfig(f"normalize must be 'auto' or 'strict', got {self.normalize!r}")


@dataclass
class SolverState:
    """All iterates of one solver instance.

    Z, S, C, D are n x n, E is d x n.  Y1 (d x n), Y2 and Y4 (n x n) and the
    row vector Y3 (n,) are the multipliers of the four constraints; mu is the
    current penalty weight and h the iteration counter.
    """

    Z: np.ndarray
    S: np.ndarray
    C: np.ndarray
    D: np.ndarray
    E: np.ndarray
    Y1: np.ndarray
    Y2: np.ndarray
    Y3: np.ndarray
    Y4: np.ndarray
    mu: float
    h: int = 0

    @classmethod
    def zeros(cls, d, n, mu0):
        return cls(
            Z=np.zeros((n, n)),
            S=np.zeros((n, n)),
            C=np.zeros((n, n)),
            D=np.zeros((n, n)),
            E=np.zeros((d, n)),
            Y1=np.zeros((d, n)),
            Y2=np.zeros((n, n)),
            Y3=np.zeros(n),
            Y4=np.zeros((n, n)),
            mu=float(mu0),
        )


@dataclass
class ResidualHistory:
    """Per-iteration diagnostics recorded by :func:`solve_idr`.

    res_* are max-norm feasibility gaps, idres_Z is ||Z - Z^2||_F^2, and
    dZ/dS/dE are squared Frobenius norms of successive-iterate differences.
    """

    res_SC: list = field(default_factory=list)
    res_SD: list = field(default_factory=list)
    res_1C: list = field(default_factory=list)
    res_XZE: list = field(default_factory=list)
    idres_Z: list = field(default_factory=list)
    dZ: list = field(default_factory=list)
    dS: list = field(default_factory=list)
    dE: list = field(default_factory=list)

    COLUMNS = ("res_SC", "res_SD", "res_1C", "res_XZE", "idres_Z", "dZ", "dS", "dE")

    def __len__(self):
        return len(self.res_SC)


@dataclass
class SolverOutput:
    """Final iterates plus the convergence record of one run."""

    Z: np.ndarray
    S: np.ndarray
    E: np.ndarray
    iterations: int
    converged: bool
    history: ResidualHistory


def idempotent_residual(Z):
    """||Z - Z^2||_F^2, zero exactly when Z is idempotent."""
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 2 or Z.shape[0] != Z.shape[1]:
        raise DimensionMismatch(f"Z must be square, got shape {Z.shape}")
    R = Z - Z @ Z
    return float(np.sum(R * R))


def update_Z(state, X, mu, xtx=None):
    """Closed-form coefficient update: solve (2I + mu X'X) Z = rhs."""
    if xtx is None:
        xtx = X.T @ X
    n = xtx.shape[0]
    A = mu * xtx
    A[np.diag_indices(n)] += 2.0
    rhs = 2.0 * state.S + mu * (xtx - X.T @ state.E) + X.T @ state.Y1
    return solve_spd(A, rhs, side="left")


def update_S_raw(state, Zp, mu, gamma, eye=None):
    """Unconstrained surrogate update (right-side solve), before the
    clip-and-symmetrize step."""
    n = Zp.shape[0]
    if eye is None:
        eye = np.eye(n)
    G = eye - state.C
    A = 2.0 * gamma * (G @ G.T)
    A[np.diag_indices(n)] += 2.0 + 2.0 * mu
    rhs = 2.0 * Zp + mu * state.C - state.Y2 + mu * state.D - state.Y4
    return solve_spd(A, rhs, side="right")


def update_S(state, Zp, mu, gamma, eye=None):
    """Surrogate update followed by projection onto symmetric non-negative
    matrices (clip first, then average with the transpose)."""
    return symmetrize_nonneg(update_S_raw(state, Zp, mu, gamma, eye=eye))


def update_C(state, Sp, mu, gamma, ones_matrix=None):
    """Row-stochastic auxiliary update: solve the regularized system coupling
    the self-expression of S with the column-sum constraint."""
    n = Sp.shape[0]
    if ones_matrix is None:
        ones_matrix = np.ones((n, n))
    sts = Sp.T @ Sp
    A = 2.0 * gamma * sts
    A += mu * ones_matrix
    A[np.diag_indices(n)] += mu
    rhs = 2.0 * gamma * sts + state.Y2 - np.outer(np.ones(n), state.Y3) + mu * (Sp + ones_matrix)
    return solve_spd(A, rhs, side="left")


def update_D(state, Sp, mu, k):
    """Trace-constrained auxiliary update: project S + Y4/mu onto trace k."""
    return trace_projection(Sp + state.Y4 / mu, k)


def update_E(state, Zp, X, mu, lam, xz=None):
    """Column-sparse noise update via the l2,1 proximal map."""
    if xz is None:
        xz = X @ Zp
    return l21_prox(X - xz + state.Y1 / mu, lam / mu)


def update_multipliers(state, X, Zp, Sp, Cp, Dp, Ep, mu_max, rho, xz=None):
    """Dual ascent on all four multipliers plus the capped penalty ramp."""
    if xz is None:
        xz = X @ Zp
    mu = state.mu
    Y1 = state.Y1 + mu * (X - xz - Ep)
    Y2 = state.Y2 + mu * (Sp - Cp)
    Y3 = state.Y3 + mu * (Cp.sum(axis=0) - 1.0)
    Y4 = state.Y4 + mu * (Sp - Dp)
    return Y1, Y2, Y3, Y4, min(mu_max, rho * mu)


def _ensure_unit_columns(X, mode):
    norms = np.linalg.norm(X, axis=0)
    if np.max(np.abs(norms - 1.0)) <= _UNIT_NORM_TOL:
        return X
    if mode == "strict":
        raise NotNormalized(
            f"input columns must have unit l2 norm (max deviation {np.max(np.abs(norms - 1.0)):.3e})"
        )
    if np.any(norms == 0.0):
        raise NotNormalized("input contains an all-zero column, which cannot be normalized")
    warnings.warn("input columns were not unit-norm; rescaling", stacklevel=3)
    return X / norms


def _sumsq(M):
    return float(np.sum(M * M))


def solve_idr(X, config):
    """Run the alternating updates until all three feasibility gaps
    (||S-C||_inf, ||S-D||_inf, ||1'C-1'||_inf) drop below epsilon or the
    iteration budget runs out.

    X holds one sample per column and must have unit l2 columns; see
    ``config.normalize`` for how deviations are handled.  Non-convergence is
    reported through ``converged=False`` on the output, never raised.
    Deterministic: identical inputs give bit-identical histories.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DimensionMismatch(f"X must be 2-d, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise NonFiniteInput("X contains NaN or Inf")
    d, n = X.shape
    config.validate(n)
    X = _ensure_unit_columns(X, config.normalize)

    # Threaded BLAS loses badly on these small repeated factorizations and
    # can differ bit-wise between runs; keep the loop single-threaded and
    # leave parallelism to callers running independent instances.
    with threadpool_limits(limits=1, user_api="blas"):
        return _iterate(X, config)


def _iterate(X, config):
    d, n = X.shape
    xtx = X.T @ X
    eye = np.eye(n)
    ones_matrix = np.ones((n, n))
    state = SolverState.zeros(d, n, config.mu0)
    hist = ResidualHistory()
    eps = config.epsilon
    converged = False

    for h in range(1, config.maxiter + 1):
        mu = state.mu
        Zp = update_Z(state, X, mu, xtx=xtx)
        Sp = update_S(state, Zp, mu, config.gamma, eye=eye)
        Cp = update_C(state, Sp, mu, config.gamma, ones_matrix=ones_matrix)
        Dp = update_D(state, Sp, mu, config.k)
        xz = X @ Zp
        Ep = update_E(state, Zp, X, mu, config.lam, xz=xz)
        Y1, Y2, Y3, Y4, mu_next = update_multipliers(
            state, X, Zp, Sp, Cp, Dp, Ep, mu_max=config.mu_max, rho=config.rho, xz=xz
        )

        hist.res_SC.append(float(np.max(np.abs(Sp - Cp))))
        hist.res_SD.append(float(np.max(np.abs(Sp - Dp))))
        hist.res_1C.append(float(np.max(np.abs(Cp.sum(axis=0) - 1.0))))
        hist.res_XZE.append(float(np.max(np.abs(X - xz - Ep))))
        hist.idres_Z.append(idempotent_residual(Zp))
        hist.dZ.append(_sumsq(Zp - state.Z))
        hist.dS.append(_sumsq(Sp - state.S))
        hist.dE.append(_sumsq(Ep - state.E))

        state.Z, state.S, state.C, state.D, state.E = Zp, Sp, Cp, Dp, Ep
        state.Y1, state.Y2, state.Y3, state.Y4 = Y1, Y2, Y3, Y4
        state.mu = mu_next
        state.h = h

        for name, M in (("Z", Zp), ("S", Sp), ("C", Cp), ("D", Dp), ("E", Ep)):
            if not np.all(np.isfinite(M)):
                raise NonFiniteInput(f"solver produced non-finite {name} at iteration {h}")
        if abs(float(np.trace(Dp)) - config.k) > 1e-10 * n:
            raise IdrError(f"trace constraint drifted at iteration {h}")

        if hist.res_SC[-1] <= eps and hist.res_SD[-1] <= eps and hist.res_1C[-1] <= eps:
            converged = True
            break

    return SolverOutput(
        Z=state.Z,
        S=state.S,
        E=state.E,
        iterations=state.h,
        converged=converged,
        history=hist,
    )
