"""DBSCAN on top of the shared connectivity components."""

from __future__ import annotations

import numpy as np

from .connectivity import build_components
from .density import DistanceIndex, neighborhood_counts
from .flat_dp import NOISE, ClusterAssignment


def dbscan(index: DistanceIndex, epsilon: float, min_pts: int) -> ClusterAssignment:
    """Core components become clusters; border points join the nearest core.

    ``min_pts`` counts the point itself. A border point with several
    equally near cores takes the densest one (earliest in the strict
    order). Clusters are numbered by the density rank of their densest
    core.
    """
    if not epsilon > 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if min_pts < 1:
        raise ValueError(f"min_pts must be at least 1, got {min_pts}")
    profile = neighborhood_counts(index, epsilon)
    cmap = build_components(index, epsilon, min_pts, profile)

    labels = np.full(index.n, NOISE, dtype=np.int64)
    core = cmap.core_flags
    labels[core] = cmap.core_component[core] + 1
    core_idx = np.flatnonzero(core)
    if core_idx.size == 0:
        return ClusterAssignment(labels, 0, np.empty(0, dtype=np.int64))

    # cores in density order so argmin breaks distance ties toward density
    core_idx = core_idx[np.argsort(profile.rank[core_idx])]
    border = np.flatnonzero(~core & cmap.membership.any(axis=1))
    if border.size:
        dist = index.distances[np.ix_(border, core_idx)]
        nearest = core_idx[np.argmin(dist, axis=1)]
        labels[border] = labels[nearest]
    modes = np.array(
        [core_idx[np.argmax(labels[core_idx] == c)] for c in range(1, cmap.component_count + 1)],
        dtype=np.int64,
    )
    return ClusterAssignment(labels, cmap.component_count, modes)
