"""Flat density-peak clustering: top-k mode selection and link propagation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .density import DensityProfile, DistanceIndex
from .peaks import NO_LINK, PeakStats, local_contrast

NOISE = -1


@dataclass(frozen=True)
class ClusterAssignment:
    """Per-point labels in ``1..k`` with ``NOISE`` (-1) for unclustered points."""

    labels: np.ndarray
    k: int
    modes: Optional[np.ndarray] = None

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        if self.modes is not None:
            modes = np.asarray(self.modes, dtype=np.int64)
            modes.setflags(write=False)
            object.__setattr__(self, "modes", modes)

    @property
    def n(self) -> int:
        return self.labels.size

    @property
    def noise_count(self) -> int:
        return int(np.count_nonzero(self.labels == NOISE))

    def clusters(self) -> list[np.ndarray]:
        """Member indices of clusters ``1..k`` in label order."""
        return [np.flatnonzero(self.labels == c) for c in range(1, self.k + 1)]


def _rescale(values: np.ndarray) -> np.ndarray:
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        # a constant factor carries no ranking information
        return np.ones_like(values, dtype=float)
    return (values - lo) / (hi - lo)


def mode_scores(stats: PeakStats, rescale: bool = True) -> np.ndarray:
    """Ranking score per point: density factor times delta.

    With ``rescale`` both factors are min-max mapped to [0, 1] first so they
    carry equal weight; otherwise the raw gamma is returned.
    """
    if not rescale:
        return np.asarray(stats.gamma, dtype=float)
    return _rescale(stats.score.astype(float)) * _rescale(stats.delta)


def select_modes(stats: PeakStats, k: int, rescale: bool = True) -> np.ndarray:
    """The ``k`` highest-scoring points; ties go to the earlier density rank."""
    n = stats.n
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    score = mode_scores(stats, rescale)
    ranked = np.lexsort((stats.rank, -score))
    return ranked[:k]


def assign_from_modes(stats: PeakStats, modes: Sequence[int]) -> ClusterAssignment:
    """Label every point with the mode its eta chain reaches first.

    Modes are numbered ``1..k`` by density rank. One pass in density order
    suffices because a point's eta always precedes it.
    """
    modes = np.unique(np.asarray(modes, dtype=np.int64))
    modes = modes[np.argsort(stats.rank[modes])]
    n = stats.n
    labels = np.zeros(n, dtype=np.int64)
    labels[modes] = np.arange(1, modes.size + 1)
    for x in stats.order:
        if labels[x]:
            continue
        parent = stats.eta[x]
        if parent == NO_LINK:
            raise ValueError(f"point {x} has no eta link and is not a selected mode")
        labels[x] = labels[parent]
    return ClusterAssignment(labels, int(modes.size), modes)


def dp_cluster(stats: PeakStats, k: int, rescale: bool = True) -> ClusterAssignment:
    """Density-peak clustering with ``k`` modes chosen by score."""
    if stats.variant == "connected":
        raise ValueError("flat DP needs plain or local-contrast peak statistics")
    return assign_from_modes(stats, select_modes(stats, k, rescale))


def dp_noise(
    assignment: ClusterAssignment,
    index: DistanceIndex,
    profile: DensityProfile,
    epsilon: float | None = None,
) -> ClusterAssignment:
    """Relabel low-density members near other clusters as noise.

    For each cluster, the border region is its members within ``epsilon``
    (default: the profile's) of a point in another cluster. Members whose
    count is strictly below the highest count in that region become noise.
    Clusters with an empty border region are left alone.
    """
    labels = assignment.labels
    if np.any(labels == NOISE):
        raise ValueError("assignment already contains noise")
    eps = profile.epsilon if epsilon is None else float(epsilon)
    counts = profile.counts
    out = labels.copy()
    for c in range(1, assignment.k + 1):
        members = np.flatnonzero(labels == c)
        others = np.flatnonzero(labels != c)
        if others.size == 0:
            continue
        near = (index.distances[np.ix_(members, others)] <= eps).any(axis=1)
        if not near.any():
            continue
        threshold = counts[members[near]].max()
        out[members[counts[members] < threshold]] = NOISE
    return ClusterAssignment(out, assignment.k, assignment.modes)


def lcdp_cluster(
    index: DistanceIndex, profile: DensityProfile, K: int, k: int, rescale: bool = True
) -> ClusterAssignment:
    """Density-peak clustering ranked by local contrast instead of density."""
    return dp_cluster(local_contrast(index, profile, K), k, rescale)
