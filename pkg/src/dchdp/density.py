"""Pairwise distances and epsilon-neighbourhood density estimation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial.distance import cdist

METRICS = ("euclidean", "manhattan")
_SCIPY_METRIC = {"euclidean": "euclidean", "manhattan": "cityblock"}

# rows per block when building the distance matrix
_TILE = 256


class DegenerateDatasetError(ValueError):
    """Raised when every point coincides, so no length scale exists."""


@dataclass(frozen=True)
class Dataset:
    """An ``n x d`` point matrix with optional ground-truth labels."""

    points: np.ndarray
    labels: Optional[np.ndarray] = None
    name: str = ""

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2:
            raise ValueError(f"points must be a 2-D array, got shape {pts.shape}")
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError("dataset must contain at least one point of dimension >= 1")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.labels is not None:
            lab = np.asarray(self.labels)
            if lab.shape != (pts.shape[0],):
                raise ValueError(
                    f"labels has shape {lab.shape}, expected ({pts.shape[0]},)"
                )
            lab.setflags(write=False)
            object.__setattr__(self, "labels", lab)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class DistanceIndex:
    """Full symmetric distance matrix of a dataset."""

    distances: np.ndarray
    metric: str = "euclidean"
    max_distance: float = field(init=False)

    def __post_init__(self):
        self.distances.setflags(write=False)
        object.__setattr__(self, "max_distance", float(self.distances.max()))

    @property
    def n(self) -> int:
        return self.distances.shape[0]


@dataclass(frozen=True)
class DensityProfile:
    """Self-inclusive neighbourhood counts and the strict density order.

    ``order`` sorts points by count descending, then index ascending, and
    ``rank[i]`` is the position of point ``i`` in ``order``. "Higher density"
    everywhere in this package means "earlier in ``order``".
    """

    epsilon: float
    counts: np.ndarray
    order: np.ndarray = field(init=False)
    rank: np.ndarray = field(init=False)

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        order = strict_order(counts)
        rank = np.empty_like(order)
        rank[order] = np.arange(order.size)
        for arr in (counts, order, rank):
            arr.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "rank", rank)

    @property
    def mode(self) -> int:
        """Index of the global density mode under the tie-break."""
        return int(self.order[0])


def strict_order(*keys_desc: np.ndarray) -> np.ndarray:
    """Indices sorted by each key descending in turn, then by index ascending."""
    n = len(keys_desc[0])
    # np.lexsort sorts by the last key first
    sort_keys = [np.arange(n)] + [-np.asarray(k) for k in reversed(keys_desc)]
    return np.lexsort(sort_keys).astype(np.int64)


def pairwise_distances(dataset, metric: str = "euclidean") -> DistanceIndex:
    """Materialise the full ``n x n`` distance matrix.

    ``dataset`` may be a :class:`Dataset` or anything convertible to a 2-D
    float array. Only tiles on or above the diagonal are computed; each is
    mirrored, so the matrix is exactly symmetric.
    """
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; choose from {METRICS}")
    points = dataset.points if isinstance(dataset, Dataset) else _as_points(dataset)
    n = points.shape[0]
    if n == 0:
        raise ValueError("dataset is empty")
    dist = np.empty((n, n), dtype=float)
    name = _SCIPY_METRIC[metric]
    for i in range(0, n, _TILE):
        rows = points[i:i + _TILE]
        for j in range(i, n, _TILE):
            tile = cdist(rows, points[j:j + _TILE], name)
            dist[i:i + _TILE, j:j + _TILE] = tile
            dist[j:j + _TILE, i:i + _TILE] = tile.T
    np.fill_diagonal(dist, 0.0)
    return DistanceIndex(dist, metric)


def _as_points(points) -> np.ndarray:
    try:
        arr = np.asarray(points, dtype=float)
    except ValueError as exc:
        raise ValueError(f"points have inconsistent dimensionality: {exc}") from exc
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ValueError(f"points must form a 2-D array, got shape {arr.shape}")
    return arr


def resolve_epsilon(index: DistanceIndex, fraction: float) -> float:
    """Convert a fraction of the maximum pairwise distance into a length."""
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"epsilon fraction must lie in (0, 1], got {fraction}")
    if index.max_distance <= 0.0:
        raise DegenerateDatasetError("all points are identical; maximum distance is 0")
    return fraction * index.max_distance


def neighborhood_counts(index: DistanceIndex, epsilon: float) -> DensityProfile:
    """Count points within ``epsilon`` of each point, the point itself included.

    The ``1 / (n V_eps^d)`` normaliser of the density estimate is a constant
    and is dropped; raw counts are the density proxy.
    """
    if not epsilon > 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    counts = np.count_nonzero(index.distances <= epsilon, axis=1)
    return DensityProfile(float(epsilon), counts)
