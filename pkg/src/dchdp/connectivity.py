"""Density-connectivity as core-point components with border membership.

Two points are density connected iff there is a chain of hops of length at
most ``epsilon_connect`` between them whose interior points are all core
(count >= tau); a single hop needs one core endpoint. Every such chain runs
through one connected component of the core graph, so the predicate reduces
to "the two points share a component membership", where a core point belongs
to its own component and any point belongs to the component of every core
point within ``epsilon_connect`` of it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .density import DensityProfile, DistanceIndex

# target element count of the temporary row blocks
_BLOCK_ELEMS = 262_144


@dataclass(frozen=True)
class ComponentMap:
    """Core flags, core components and per-point component memberships.

    ``membership`` is an ``n x component_count`` boolean matrix; row ``i``
    marks the components point ``i`` belongs to. ``core_component[i]`` is the
    component of core point ``i`` and ``-1`` for non-core points.
    ``assigned[i]`` picks a single component per point: its own for a core,
    the one of the nearest core (ties to the densest) for a border point, and
    ``-1`` for a point with no membership.
    Components are numbered by the density rank of their densest core point.
    """

    epsilon_connect: float
    tau: int
    core_flags: np.ndarray
    core_component: np.ndarray
    membership: np.ndarray
    assigned: np.ndarray
    component_count: int = field(init=False)

    def __post_init__(self):
        for arr in (self.core_flags, self.core_component, self.membership, self.assigned):
            arr.setflags(write=False)
        object.__setattr__(self, "component_count", int(self.membership.shape[1]))

    @property
    def n(self) -> int:
        return self.core_flags.size

    def memberships(self, i: int) -> frozenset:
        return frozenset(np.flatnonzero(self.membership[i]).tolist())

    def connected_to(self, x: int) -> np.ndarray:
        """Boolean mask of every point density connected with ``x``."""
        comps = np.flatnonzero(self.membership[x])
        if comps.size == 0:
            return np.zeros(self.n, dtype=bool)
        return self.membership[:, comps].any(axis=1)

    def connected_block(self, rows: np.ndarray, exclusive: bool = False) -> np.ndarray:
        """Connectivity rows for a block of points, shape ``(len(rows), n)``.

        With ``exclusive`` each point counts as a member of its assigned
        component only, which makes the relation transitive.
        """
        if exclusive:
            mine = self.assigned[rows][:, None]
            return (mine == self.assigned[None, :]) & (mine >= 0)
        if self.component_count == 0:
            return np.zeros((len(rows), self.n), dtype=bool)
        left = self.membership[rows].astype(np.float32)
        return (left @ self.membership.T.astype(np.float32)) > 0.5


def build_components(
    index: DistanceIndex, epsilon_connect: float, tau: int, profile: DensityProfile
) -> ComponentMap:
    """Connected components of the core graph plus border memberships.

    A point is core iff its count in ``profile`` is at least ``tau``. Core
    points within ``epsilon_connect`` of each other are linked; a non-core
    point joins every component owning a core point within
    ``epsilon_connect`` of it (possibly none, possibly several).
    """
    if not epsilon_connect > 0.0:
        raise ValueError(f"epsilon_connect must be positive, got {epsilon_connect}")
    if tau < 0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    n = index.n
    if profile.counts.size != n:
        raise ValueError("density profile and distance index disagree on n")

    core = profile.counts >= tau
    core_idx = np.flatnonzero(core)
    core_component = np.full(n, -1, dtype=np.int64)
    if core_idx.size == 0:
        return ComponentMap(
            float(epsilon_connect), int(tau), core, core_component,
            np.zeros((n, 0), dtype=bool), np.full(n, -1, dtype=np.int64),
        )

    m = core_idx.size
    dist = index.distances

    def core_block(lo, hi):
        if m == n:
            return dist[lo:hi, lo:]
        return dist[np.ix_(core_idx[lo:hi], core_idx[lo:])]

    # core graph, upper triangle only, in cache-sized row blocks
    src, dst = [], []
    lo = 0
    while lo < m:
        hi = min(m, lo + max(1, _BLOCK_ELEMS // (m - lo)))
        r, c = np.nonzero(core_block(lo, hi) <= epsilon_connect)
        keep = c > r
        src.append(r[keep] + lo)
        dst.append(c[keep] + lo)
        lo = hi
    src, dst = np.concatenate(src), np.concatenate(dst)
    graph = csr_matrix((np.ones(src.size, dtype=bool), (src, dst)), shape=(m, m))
    n_comp, raw = connected_components(graph, directed=False)

    # renumber components by the density rank of their densest core
    best_rank = np.full(n_comp, np.iinfo(np.int64).max)
    np.minimum.at(best_rank, raw, profile.rank[core_idx])
    relabel = np.empty(n_comp, dtype=np.int64)
    relabel[np.argsort(best_rank, kind="stable")] = np.arange(n_comp)
    comp = relabel[raw]
    core_component[core_idx] = comp

    membership = np.zeros((n, n_comp), dtype=bool)
    membership[core_idx, comp] = True
    others = np.flatnonzero(~core)
    step = max(1, _BLOCK_ELEMS // m)
    for lo in range(0, others.size, step):
        rows = others[lo:lo + step]
        r, c = np.nonzero(dist[np.ix_(rows, core_idx)] <= epsilon_connect)
        membership[rows[r], comp[c]] = True

    assigned = core_component.copy()
    border = np.flatnonzero(~core & membership.any(axis=1))
    if border.size:
        by_rank = np.argsort(profile.rank[core_idx], kind="stable")
        nearest = np.argmin(index.distances[np.ix_(border, core_idx[by_rank])], axis=1)
        assigned[border] = comp[by_rank][nearest]
    return ComponentMap(
        float(epsilon_connect), int(tau), core, core_component, membership, assigned
    )


def is_connected(x: int, y: int, cmap: ComponentMap) -> bool:
    """Density-connectivity predicate between two points."""
    return bool(np.any(cmap.membership[x] & cmap.membership[y]))
