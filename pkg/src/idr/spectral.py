"""Affinity construction and normalized spectral partitioning (the graph-cut
stage of the pipeline)."""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg
from sklearn.cluster import KMeans

from .errors import DimensionMismatch, InvalidK
from .metrics import segmentation_accuracy

# Keeps isolated vertices from zeroing a degree.
_DEGREE_FLOOR = 1e-12


def build_affinity(Z):
    """Symmetric non-negative edge weights from a coefficient matrix:
    W_ij = (|Z_ij| + |Z_ji|) / 2."""
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 2 or Z.shape[0] != Z.shape[1]:
        raise DimensionMismatch(f"Z must be square, got shape {Z.shape}")
    A = np.abs(Z)
    return (A + A.T) / 2.0


def spectral_partition(W, k, seed=0):
    """Partition a graph into k groups with the normalized-Laplacian
    embedding plus k-means.

    Takes the k eigenvectors of the k smallest eigenvalues of
    I - D^{-1/2} W D^{-1/2}, row-normalizes them, and runs k-means
    (k-means++ init, 20 restarts, 300 iterations) keeping the lowest-cost
    restart.  Deterministic given the seed.
    """
    W = np.asarray(W, dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise DimensionMismatch(f"W must be square, got shape {W.shape}")
    n = W.shape[0]
    if int(k) != k or k < 1 or k > n:
        raise InvalidK(f"k must be an integer in [1, {n}], got {k}")
    k = int(k)

    deg = np.maximum(W.sum(axis=1), _DEGREE_FLOOR)
    inv_sqrt = 1.0 / np.sqrt(deg)
    L = np.eye(n) - inv_sqrt[:, None] * W * inv_sqrt[None, :]
    L = (L + L.T) / 2.0
    _, vecs = scipy.linalg.eigh(L, subset_by_index=[0, k - 1])
    norms = np.linalg.norm(vecs, axis=1)
    norms[norms == 0.0] = 1.0
    embedding = vecs / norms[:, None]

    km = KMeans(n_clusters=k, init="k-means++", n_init=20, max_iter=300, random_state=seed)
    return km.fit_predict(embedding).astype(int)


def normalized_cut_value(W, labels):
    """Sum over clusters of cut(cluster, rest) / volume(cluster); lower is a
    better partition.  Empty clusters contribute nothing."""
    W = np.asarray(W, dtype=float)
    labels = np.asarray(labels).ravel()
    deg = np.maximum(W.sum(axis=1), _DEGREE_FLOOR)
    value = 0.0
    for c in np.unique(labels):
        mask = labels == c
        vol = deg[mask].sum()
        cut = W[np.ix_(mask, ~mask)].sum()
        value += cut / max(vol, _DEGREE_FLOOR)
    return float(value)


@dataclass
class ClusterSelection:
    """Partitions of both solver graphs plus which one was picked."""

    labels_Z: np.ndarray
    labels_S: np.ndarray
    chosen: str  # "Z" or "S"
    ncut_Z: float
    ncut_S: float
    sa_Z: Optional[float] = None
    sa_S: Optional[float] = None

    @property
    def labels(self):
        return self.labels_Z if self.chosen == "Z" else self.labels_S


def cluster_from_solver(output, k, seed=0, ground_truth=None):
    """Cluster both graphs produced by a solver run and pick a winner.

    With ground truth the more accurate labelling wins; without it the lower
    normalized-cut value decides.  Ties go to the graph built from Z.  Both
    label vectors are always returned.
    """
    G1 = build_affinity(output.Z)
    G2 = build_affinity(output.S)
    labels_Z = spectral_partition(G1, k, seed=seed)
    labels_S = spectral_partition(G2, k, seed=seed)
    ncut_Z = normalized_cut_value(G1, labels_Z)
    ncut_S = normalized_cut_value(G2, labels_S)
    if ground_truth is not None:
        sa_Z = segmentation_accuracy(ground_truth, labels_Z)
        sa_S = segmentation_accuracy(ground_truth, labels_S)
        chosen = "S" if sa_S > sa_Z else "Z"
        return ClusterSelection(labels_Z, labels_S, chosen, ncut_Z, ncut_S, sa_Z, sa_S)
    chosen = "S" if ncut_S < ncut_Z else "Z"
    return ClusterSelection(labels_Z, labels_S, chosen, ncut_Z, ncut_S)
