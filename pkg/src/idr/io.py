"""Matrix and label CSV round trips used by the CLI and the sweep harness."""

import numpy as np

from .errors import DimensionMismatch


def dump_matrix(M, path):
    """Write a dense matrix as CSV, one row per line, 17 significant digits
    (lossless for doubles)."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {M.shape}")
    np.savetxt(path, M, fmt="%.17g", delimiter=",")


def load_matrix(path):
    """Inverse of :func:`dump_matrix`."""
    return np.loadtxt(path, delimiter=",", ndmin=2)


def dump_labels(labels, path):
    """Write integer labels as a one-column CSV without header."""
    np.savetxt(path, np.asarray(labels, dtype=int), fmt="%d")


def load_labels(path):
    """Inverse of :func:`dump_labels`."""
    return np.loadtxt(path, dtype=int, ndmin=1)
