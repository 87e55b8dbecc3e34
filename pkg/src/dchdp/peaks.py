"""Per-point peak statistics: nearest higher-density neighbour, delta, gamma.

Three variants share one record type:

* ``plain``: the neighbour is the nearest point of higher density.
* ``connected``: the neighbour must also be density connected to the point;
  points without such a neighbour get no link and fall back to their
  maximum distance.
* ``local_contrast``: density is replaced by the local contrast count, the
  number of a point's K nearest neighbours it out-ranks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .connectivity import ComponentMap
from .density import DensityProfile, DistanceIndex, strict_order

NO_LINK = -1

# target element count of the temporary row blocks
_BLOCK_ELEMS = 262_144

VARIANTS = ("plain", "connected", "local_contrast")


@dataclass(frozen=True)
class PeakStats:
    """Per-point (eta, delta, gamma) with the density order they were built on.

    ``eta[i] == NO_LINK`` marks a point without a higher-density neighbour.
    ``score`` is the density factor of gamma (counts, or local contrast).
    """

    eta: np.ndarray
    delta: np.ndarray
    gamma: np.ndarray
    score: np.ndarray
    order: np.ndarray
    rank: np.ndarray
    variant: str

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        for arr in (self.eta, self.delta, self.gamma, self.score, self.order, self.rank):
            arr.setflags(write=False)

    @property
    def n(self) -> int:
        return self.eta.size

    @property
    def has_link(self) -> np.ndarray:
        return self.eta != NO_LINK


def _row_blocks(n: int):
    step = max(1, _BLOCK_ELEMS // max(n, 1))
    for start in range(0, n, step):
        yield np.arange(start, min(start + step, n))


def _nearest_earlier(index: DistanceIndex, order, rank, cmap: ComponentMap | None = None,
                     exclusive: bool = True):
    """For every point, the nearest point placed earlier in ``order``.

    Distance ties go to the earlier order position. With ``cmap`` the
    candidates are further restricted to density-connected points.
    """
    n = index.n
    eta = np.full(n, NO_LINK, dtype=np.int64)
    delta = np.empty(n, dtype=float)
    positions = np.arange(n)
    for rows in _row_blocks(n):
        dist = index.distances[rows][:, order]
        allowed = positions[None, :] < rank[rows][:, None]
        if cmap is not None:
            allowed &= cmap.connected_block(rows, exclusive)[:, order]
        masked = np.where(allowed, dist, np.inf)
        # argmin returns the first minimum, i.e. the earliest order position
        best = np.argmin(masked, axis=1)
        found = allowed.any(axis=1)
        eta[rows[found]] = order[best[found]]
        delta[rows] = np.where(found, masked[np.arange(rows.size), best], dist.max(axis=1))
    return eta, delta


def eta_delta_gamma(index: DistanceIndex, profile: DensityProfile) -> PeakStats:
    """Nearest higher-density neighbour, its distance, and ``count * delta``.

    The global mode has no neighbour; its delta is its largest distance to
    any point.
    """
    eta, delta = _nearest_earlier(index, profile.order, profile.rank)
    counts = profile.counts
    return PeakStats(eta, delta, counts * delta, counts.copy(),
                     profile.order, profile.rank, "plain")


def eta_delta_gamma_connected(
    index: DistanceIndex, profile: DensityProfile, cmap: ComponentMap,
    resolve_borders: bool = True,
) -> PeakStats:
    """Like :func:`eta_delta_gamma` but only over density-connected candidates.

    A border point within reach of cores from two components is connected
    to both, which lets links hop between components through border points.
    ``resolve_borders`` (the default) ties each border point to the
    component of its nearest core instead; pass ``False`` for the plain
    pairwise predicate.
    """
    if cmap.n != index.n:
        raise ValueError("component map and distance index disagree on n")
    eta, delta = _nearest_earlier(index, profile.order, profile.rank, cmap, resolve_borders)
    counts = profile.counts
    return PeakStats(eta, delta, counts * delta, counts.copy(),
                     profile.order, profile.rank, "connected")


def local_contrast_counts(index: DistanceIndex, profile: DensityProfile, K: int) -> np.ndarray:
    """How many of its K nearest neighbours each point out-ranks in density.

    Neighbours exclude the point itself; distance ties among neighbours go
    to the higher-density candidate, and "out-ranks" uses the strict order.
    """
    n = index.n
    if not 1 <= K <= n - 1:
        raise ValueError(f"K must lie in [1, {n - 1}], got {K}")
    rank = profile.rank
    lc = np.empty(n, dtype=np.int64)
    for rows in _row_blocks(n):
        dist = index.distances[rows].copy()
        dist[np.arange(rows.size), rows] = -np.inf  # self sorts first
        tie = np.broadcast_to(rank, dist.shape)
        nearest = np.lexsort((tie, dist), axis=1)[:, 1:K + 1]
        lc[rows] = np.count_nonzero(rank[nearest] > rank[rows][:, None], axis=1)
    return lc


def local_contrast(index: DistanceIndex, profile: DensityProfile, K: int) -> PeakStats:
    """Peak statistics with local contrast standing in for density.

    The order becomes (LC desc, count desc, index asc); eta, delta and
    ``gamma = LC * delta`` are rebuilt on it.
    """
    lc = local_contrast_counts(index, profile, K)
    order = strict_order(lc, profile.counts)
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    eta, delta = _nearest_earlier(index, order, rank)
    return PeakStats(eta, delta, lc * delta, lc, order, rank, "local_contrast")


def follow_links(stats: PeakStats, start: int, max_hops: int | None = None) -> list[int]:
    """The chain of eta links from ``start`` until a point without a link.

    Raises ``RuntimeError`` on a cycle or when ``max_hops`` is exceeded.
    """
    limit = stats.n - 1 if max_hops is None else max_hops
    path = [int(start)]
    seen = {int(start)}
    while stats.eta[path[-1]] != NO_LINK:
        nxt = int(stats.eta[path[-1]])
        if nxt in seen:
            raise RuntimeError(f"eta links cycle at point {nxt}")
        if len(path) > limit:
            raise RuntimeError(f"eta chain from {start} exceeds {limit} hops")
        path.append(nxt)
        seen.add(nxt)
    return path
