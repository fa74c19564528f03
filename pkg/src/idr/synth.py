"""Seeded synthetic union-of-subspaces data with optional column corruption."""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidFraction, InvalidSpec


@dataclass
class SynthSpec:
    """Recipe for a union-of-subspaces sample.

    Defaults draw 5 subspaces of dimension 5 in ambient dimension 20 with 50
    unit-norm points each; corruption_fraction selects the share of columns
    hit by Gaussian noise whose expected squared norm is noise_scale times
    the squared column norm.
    """

    num_subspaces: int = 5
    subspace_dim: int = 5
    ambient_dim: int = 20
    points_per: int = 50
    corruption_fraction: float = 0.0
    noise_scale: float = 0.3
    seed: int = 0

    @property
    def n_points(self):
        return self.num_subspaces * self.points_per

    def validate(self):
        if self.num_subspaces < 1:
            raise InvalidSpec(f"num_subspaces must be at least 1, got {self.num_subspaces}")
        if self.subspace_dim < 1 or self.subspace_dim > self.ambient_dim:
            raise InvalidSpec(
                f"subspace_dim must lie in [1, ambient_dim={self.ambient_dim}], got {self.subspace_dim}"
            )
        if self.points_per < 1:
            raise InvalidSpec(f"points_per must be at least 1, got {self.points_per}")
        if not 0.0 <= self.corruption_fraction <= 1.0:
            raise InvalidSpec(f"corruption_fraction must lie in [0, 1], got {self.corruption_fraction}")
        if self.noise_scale < 0:
            raise InvalidSpec(f"noise_scale must be non-negative, got {self.noise_scale}")


def generate(spec):
    """Draw the data matrix (ambient_dim x n) and ground-truth labels.

    Each subspace gets an orthonormal basis (QR of a Gaussian draw) and
    points_per Gaussian coefficient vectors; columns are scaled to unit
    norm.  A positive corruption_fraction routes through :func:`corrupt`
    with a seed derived from the spec seed.  Deterministic given the seed.
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    blocks = []
    for _ in range(spec.num_subspaces):
        basis, _ = np.linalg.qr(rng.standard_normal((spec.ambient_dim, spec.subspace_dim)))
        coeffs = rng.standard_normal((spec.subspace_dim, spec.points_per))
        blocks.append(basis @ coeffs)
    X = np.hstack(blocks)
    X = X / np.linalg.norm(X, axis=0, keepdims=True)
    labels = np.repeat(np.arange(spec.num_subspaces), spec.points_per)
    if spec.corruption_fraction > 0.0:
        X = corrupt(X, spec.corruption_fraction, spec.noise_scale, seed=spec.seed + 1)
    return X, labels


def corrupt(X, p, noise_scale, seed=0):
    """Add zero-mean Gaussian noise to a random floor(p * n) subset of columns.

    Per-entry variance is noise_scale * ||x||_2^2 / d, so the expected
    squared noise norm per column is noise_scale * ||x||_2^2.  Touched
    columns are rescaled back to unit norm; untouched columns pass through
    bit-identical.
    """
    if not np.isfinite(p) or not 0.0 <= p <= 1.0:
        raise InvalidFraction(f"p must lie in [0, 1], got {p}")
    if noise_scale < 0:
        raise InvalidSpec(f"noise_scale must be non-negative, got {noise_scale}")
    X = np.array(X, dtype=float, copy=True)
    if X.ndim != 2:
        raise DimensionMismatch(f"X must be 2-d, got shape {X.shape}")
    d, n = X.shape
    count = int(p * n)
    if count == 0:
        return X
    rng = np.random.default_rng(seed)
    chosen = rng.choice(n, size=count, replace=False)
    for j in chosen:
        x = X[:, j] + _noise_vector(rng, X[:, j], noise_scale)
        nrm = np.linalg.norm(x)
        if nrm > 0.0:
            x = x / nrm
        X[:, j] = x
    return X


def _noise_vector(rng, x, noise_scale):
    """Gaussian noise with per-entry variance noise_scale * ||x||^2 / len(x),
    so E||noise||^2 = noise_scale * ||x||^2."""
    sigma = np.sqrt(noise_scale / x.shape[0]) * np.linalg.norm(x)
    return rng.normal(0.0, sigma, size=x.shape[0])
