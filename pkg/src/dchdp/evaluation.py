"""F-measure of a clustering against ground-truth classes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .flat_dp import NOISE, ClusterAssignment


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts of true class (rows) against predicted cluster (columns).

    The last column counts points labelled as noise.
    """

    classes: np.ndarray
    clusters: np.ndarray
    counts: np.ndarray

    @property
    def class_sizes(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def cluster_sizes(self) -> np.ndarray:
        return self.counts[:, :-1].sum(axis=0)


def confusion_matrix(pred, truth) -> ConfusionMatrix:
    pred = _labels(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape:
        raise ValueError(f"prediction has {pred.size} points, truth has {truth.size}")
    classes, t_idx = np.unique(truth, return_inverse=True)
    clusters = np.unique(pred[pred != NOISE])
    p_idx = np.searchsorted(clusters, pred)
    p_idx[pred == NOISE] = clusters.size
    counts = np.zeros((classes.size, clusters.size + 1), dtype=np.int64)
    np.add.at(counts, (t_idx.ravel(), p_idx.ravel()), 1)
    return ConfusionMatrix(classes, clusters, counts)


def _labels(pred) -> np.ndarray:
    if isinstance(pred, ClusterAssignment):
        return pred.labels
    return np.asarray(pred, dtype=np.int64)


def f_scores(cm: ConfusionMatrix) -> np.ndarray:
    """Per class/cluster F1 table, shape ``(classes, clusters)`` without noise."""
    hits = cm.counts[:, :-1].astype(float)
    size_pred = cm.cluster_sizes[None, :]
    size_true = cm.class_sizes[:, None]
    # F1 = 2 * hits / (|cluster| + |class|)
    return 2.0 * hits / (size_pred + size_true)


def f_measure(pred, truth) -> float:
    """Mean over true classes of the F1 of each class's matched cluster.

    Clusters are matched one-to-one to classes so that the total F1 is
    maximal; noise is never matched, and a class left without a cluster
    scores 0.
    """
    cm = confusion_matrix(pred, truth)
    if cm.clusters.size == 0:
        return 0.0
    # columns in an order fixed by their counts alone, so that renaming
    # clusters cannot change which of several equally good matchings wins
    table = f_scores(cm)[:, np.lexsort(cm.counts[::-1, :-1])]
    rows, cols = linear_sum_assignment(table, maximize=True)
    return float(table[rows, cols].sum() / cm.classes.size)
