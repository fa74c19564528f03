"""Clustering agreement scores under the best label matching."""

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import LengthMismatch


def segmentation_accuracy(truth, pred):
    """Fraction of points whose predicted label maps to their true label
    under the accuracy-maximizing injective relabelling.

    The optimal mapping is found exactly as a maximum-weight assignment on
    the confusion matrix (padded square when the two label sets differ in
    size), so the score is invariant to any renaming of either labelling.
    """
    truth = np.asarray(truth).ravel()
    pred = np.asarray(pred).ravel()
    if truth.shape[0] != pred.shape[0]:
        raise LengthMismatch(f"label vectors differ in length: {truth.shape[0]} vs {pred.shape[0]}")
    if truth.shape[0] == 0:
        raise LengthMismatch("label vectors are empty")
    _, t_inv = np.unique(truth, return_inverse=True)
    _, p_inv = np.unique(pred, return_inverse=True)
    m = max(t_inv.max(), p_inv.max()) + 1
    conf = np.zeros((m, m), dtype=np.int64)
    np.add.at(conf, (p_inv, t_inv), 1)
    rows, cols = linear_sum_assignment(conf, maximize=True)
    return float(conf[rows, cols].sum()) / truth.shape[0]


def segmentation_error(truth, pred):
    """Complement of :func:`segmentation_accuracy`."""
    return 1.0 - segmentation_accuracy(truth, pred)
