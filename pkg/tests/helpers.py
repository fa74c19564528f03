"""Independent oracles shared by the test modules.

Everything here deliberately avoids the library's own computational paths:
explicit Gauss-Jordan inverses, generic KKT solves, brute-force enumeration
and finite differences.
"""

import itertools

import numpy as np


def gauss_jordan_inverse(A):
    """Explicit matrix inverse by Gauss-Jordan elimination with partial
    pivoting (oracle for SPD solves)."""
    A = np.array(A, dtype=float)
    n = A.shape[0]
    aug = np.hstack([A, np.eye(n)])
    for col in range(n):
        pivot = col + np.argmax(np.abs(aug[col:, col]))
        aug[[col, pivot]] = aug[[pivot, col]]
        aug[col] = aug[col] / aug[col, col]
        for row in range(n):
            if row != col:
                aug[row] -= aug[row, col] * aug[col]
    return aug[:, n:]


def kkt_trace_projection(M, k):
    """Generic equality-constrained QP oracle for
    min ||D - M||_F^2 s.t. trace(D) = k: assemble and solve the dense KKT
    system over all n^2 entries plus one multiplier."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    m = n * n
    c = np.eye(n).ravel()  # gradient of trace(D) wrt vec(D)
    K = np.zeros((m + 1, m + 1))
    K[:m, :m] = 2.0 * np.eye(m)
    K[:m, m] = c
    K[m, :m] = c
    rhs = np.concatenate([2.0 * M.ravel(), [float(k)]])
    sol = np.linalg.solve(K, rhs)
    return sol[:m].reshape(n, n)


def l21_objective(P, Q, alpha):
    return alpha * np.linalg.norm(P, axis=0).sum() + 0.5 * np.sum((P - Q) ** 2)


def beats_random_perturbations(P_star, Q, alpha, rng, n_probes=10_000, radius=1e-2):
    """True when the candidate's objective value is <= the objective at every
    random perturbation of it within the given radius."""
    base = l21_objective(P_star, Q, alpha)
    d, n = P_star.shape
    dirs = rng.standard_normal((n_probes, d, n))
    dirs /= np.linalg.norm(dirs.reshape(n_probes, -1), axis=1)[:, None, None]
    radii = rng.uniform(0.0, radius, size=n_probes)[:, None, None]
    probes = P_star[None] + radii * dirs
    shifted = probes - Q[None]
    objs = alpha * np.linalg.norm(probes, axis=1).sum(axis=1) + 0.5 * np.sum(shifted**2, axis=(1, 2))
    return bool(np.all(base <= objs + 1e-12))


def fd_gradient(f, X0, step=1e-5):
    """Central-difference gradient of a scalar function of a matrix."""
    X0 = np.asarray(X0, dtype=float)
    grad = np.zeros_like(X0)
    it = np.nditer(X0, flags=["multi_index"])
    while not it.finished:
        ij = it.multi_index
        Xp = X0.copy()
        Xm = X0.copy()
        Xp[ij] += step
        Xm[ij] -= step
        grad[ij] = (f(Xp) - f(Xm)) / (2.0 * step)
        it.iternext()
    return grad


def brute_force_accuracy(truth, pred):
    """Exhaustive best-mapping accuracy: max over injective mappings of the
    padded label sets (feasible for <= 6 distinct labels)."""
    truth = np.asarray(truth).ravel()
    pred = np.asarray(pred).ravel()
    t_ids = np.unique(truth)
    p_ids = np.unique(pred)
    m = max(len(t_ids), len(p_ids))
    counts = np.zeros((m, m), dtype=int)
    for i, p in enumerate(p_ids):
        for j, t in enumerate(t_ids):
            counts[i, j] = int(np.sum((pred == p) & (truth == t)))
    best = 0
    for perm in itertools.permutations(range(m)):
        best = max(best, sum(counts[i, perm[i]] for i in range(m)))
    return best / truth.shape[0]


def exhaustive_min_ncut_bipartition(W):
    """Brute-force minimum normalized-cut bipartition of a small graph.

    Node 0 is pinned to side 0; returns the best labelling over all 2^(n-1)
    non-trivial splits.
    """
    n = W.shape[0]
    deg = W.sum(axis=1)
    best_val, best_labels = np.inf, None
    for bits in range(1, 2 ** (n - 1)):
        labels = np.zeros(n, dtype=int)
        for i in range(1, n):
            labels[i] = (bits >> (i - 1)) & 1
        if labels.sum() == 0 or labels.sum() == n:
            continue
        val = 0.0
        for c in (0, 1):
            mask = labels == c
            vol = deg[mask].sum()
            cut = W[np.ix_(mask, ~mask)].sum()
            val += cut / vol
        if val < best_val:
            best_val, best_labels = val, labels
    return best_labels, best_val


def make_spd(n, cond, rng):
    """SPD matrix with prescribed condition number (log-spaced spectrum,
    random orthogonal eigenvectors)."""
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    eigs = np.logspace(0.0, -np.log10(cond), n)
    return (Q * eigs) @ Q.T


def block_mask(sizes):
    """Boolean mask, True on the diagonal blocks of the given sizes."""
    n = int(np.sum(sizes))
    mask = np.zeros((n, n), dtype=bool)
    start = 0
    for s in sizes:
        mask[start : start + s, start : start + s] = True
        start += s
    return mask


def off_block_mass(M, sizes):
    """Share of |M|'s mass outside the ground-truth diagonal blocks."""
    mask = block_mask(sizes)
    A = np.abs(M)
    return float(A[~mask].sum() / A.sum())


def normalized_membership(sizes):
    """Block-diagonal matrix with each block 1/(block size)."""
    n = int(np.sum(sizes))
    A = np.zeros((n, n))
    start = 0
    for s in sizes:
        A[start : start + s, start : start + s] = 1.0 / s
        start += s
    return A


# Subproblem objectives for finite-difference stationarity checks.  Written
# in the completed-square form each update minimizes.


def objective_Z(Z, S, X, E, Y1, mu):
    R = X - X @ Z - E + Y1 / mu
    return np.sum((Z - S) ** 2) + 0.5 * mu * np.sum(R * R)


def objective_S(S, Zp, C, D, Y2, Y4, mu, gamma):
    return (
        np.sum((Zp - S) ** 2)
        + gamma * np.sum((S - S @ C) ** 2)
        + 0.5 * mu * np.sum((S - C + Y2 / mu) ** 2)
        + 0.5 * mu * np.sum((S - D + Y4 / mu) ** 2)
    )


def objective_C(C, Sp, Y2, Y3, mu, gamma):
    ones = np.ones(Sp.shape[0])
    return (
        gamma * np.sum((Sp - Sp @ C) ** 2)
        + 0.5 * mu * np.sum((Sp - C + Y2 / mu) ** 2)
        + 0.5 * mu * np.sum((ones @ C - ones + Y3 / mu) ** 2)
    )
