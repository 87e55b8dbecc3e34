"""Hierarchical density-peak clustering and its density-connected variant.

Every point starts as its own cluster and its own mode. Points that own a
link (an eta, or an eta restricted to density-connected candidates) are
absorbed one at a time in increasing gamma order: the cluster whose mode is
absorbed merges into the cluster holding the absorbed point's link, at a
height equal to its gamma. In the density-connected variant several clusters
can survive this phase; one final step joins them all at
``1.1 * max(gamma)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .flat_dp import ClusterAssignment
from .peaks import NO_LINK, PeakStats

FINAL_HEIGHT_FACTOR = 1.1


class MergeRecord(NamedTuple):
    step: int
    absorbed_mode: int
    target_cluster: int
    height: float


@dataclass(frozen=True)
class Dendrogram:
    """Ordered merge records plus the trace needed to replay any prefix.

    ``target_cluster`` in a record is the mode (densest point) of the
    cluster that absorbs. ``links[i]`` is the point ``i`` was linked to when
    absorbed, and ``absorbed_step[i]`` the 1-based step, or 0 for points
    that survive to the final step (``roots``, sorted by density rank).
    """

    n_leaves: int
    merges: tuple
    final_height: float
    links: np.ndarray
    absorbed_step: np.ndarray
    rank: np.ndarray
    roots: np.ndarray

    def __post_init__(self):
        for arr in (self.links, self.absorbed_step, self.rank, self.roots):
            arr.setflags(write=False)

    @property
    def heights(self) -> np.ndarray:
        return np.array([m.height for m in self.merges], dtype=float)

    @property
    def top(self) -> int:
        return int(self.roots[0])

    @property
    def n_groups(self) -> int:
        """Clusters left before the final step."""
        return int(self.roots.size)

    def final_records(self) -> list[MergeRecord]:
        """The final step written as merges of every other root into the top."""
        step0 = len(self.merges) + 1
        return [
            MergeRecord(step0 + i, int(r), self.top, self.final_height)
            for i, r in enumerate(self.roots[1:])
        ]


def _agglomerate(stats: PeakStats) -> Dendrogram:
    n = stats.n
    eta = stats.eta
    rank = stats.rank
    candidates = np.flatnonzero(eta != NO_LINK)
    # smallest gamma first; among equal gamma the least dense goes first so
    # that survivors are exactly the top-ranked modes of flat selection
    merge_order = candidates[np.lexsort((-rank[candidates], stats.gamma[candidates]))]

    parent = np.arange(n)

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    absorbed_step = np.zeros(n, dtype=np.int64)
    merges = []
    for step, z in enumerate(merge_order.tolist(), start=1):
        if find(z) != z:
            raise RuntimeError(f"point {z} is no longer the mode of its cluster")
        target = find(int(eta[z]))
        if rank[target] >= rank[z]:
            raise RuntimeError(f"merge target {target} is not denser than {z}")
        parent[z] = target
        absorbed_step[z] = step
        merges.append(MergeRecord(step, z, int(target), float(stats.gamma[z])))

    roots = np.flatnonzero(absorbed_step == 0)
    roots = roots[np.argsort(rank[roots])]
    gmax = float(stats.gamma.max()) if n else 0.0
    return Dendrogram(
        n_leaves=n,
        merges=tuple(merges),
        final_height=FINAL_HEIGHT_FACTOR * gmax,
        links=eta.copy(),
        absorbed_step=absorbed_step,
        rank=rank.copy(),
        roots=roots,
    )


def hierarchical_dp(stats: PeakStats) -> Dendrogram:
    """Dendrogram of hierarchical DP from plain peak statistics.

    Only the global mode lacks a link, so all points end in one cluster
    after ``n - 1`` merges.
    """
    if stats.variant != "plain":
        raise ValueError("hierarchical DP expects plain peak statistics")
    return _agglomerate(stats)


def dc_hdp(stats: PeakStats) -> Dendrogram:
    """Dendrogram of density-connected hierarchical DP.

    ``stats`` must come from
    :func:`~dchdp.peaks.eta_delta_gamma_connected`; points without a
    density-connected link never get absorbed before the final step, so
    groups that are not density connected only meet at the top.
    """
    if stats.variant != "connected":
        raise ValueError("DC-HDP expects density-connected peak statistics")
    return _agglomerate(stats)


def partition_after(dendrogram: Dendrogram, n_merges: int) -> np.ndarray:
    """Cluster mode of every point after the first ``n_merges`` merges.

    Merges beyond the pre-final ones collapse everything into the top mode.
    """
    n = dendrogram.n_leaves
    if n_merges > len(dendrogram.merges):
        return np.full(n, dendrogram.top, dtype=np.int64)
    active = (dendrogram.absorbed_step > 0) & (dendrogram.absorbed_step <= n_merges)
    pointer = np.where(active, dendrogram.links, np.arange(n))
    # pointer jumping; links always lead to denser points so this terminates
    while True:
        nxt = pointer[pointer]
        if np.array_equal(nxt, pointer):
            return pointer
        pointer = nxt


def _assignment(dendrogram: Dendrogram, modes_of: np.ndarray) -> ClusterAssignment:
    modes = np.unique(modes_of)
    modes = modes[np.argsort(dendrogram.rank[modes])]
    lookup = np.zeros(dendrogram.n_leaves, dtype=np.int64)
    lookup[modes] = np.arange(1, modes.size + 1)
    return ClusterAssignment(lookup[modes_of], int(modes.size), modes)


def cut(dendrogram: Dendrogram, k: int) -> ClusterAssignment:
    """Flat clustering with ``k`` clusters taken from the dendrogram.

    When ``k`` falls strictly between 1 and the number of groups that
    survive to the final step, it cannot be reached one merge at a time;
    the coarsest level with at least ``k`` clusters (all survivors) is
    returned instead.
    """
    n = dendrogram.n_leaves
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    if k == 1:
        n_merges = len(dendrogram.merges) + 1
    else:
        n_merges = n - max(k, dendrogram.n_groups)
    return _assignment(dendrogram, partition_after(dendrogram, n_merges))


def cut_threshold(dendrogram: Dendrogram, threshold: float) -> ClusterAssignment:
    """Apply every merge whose height is strictly below ``threshold``."""
    if threshold < 0:
        raise ValueError(f"threshold must be non-negative, got {threshold}")
    heights = dendrogram.heights
    n_merges = int(np.searchsorted(heights, threshold, side="left"))
    if n_merges == len(heights) and dendrogram.final_height < threshold:
        n_merges += 1
    return _assignment(dendrogram, partition_after(dendrogram, n_merges))


# -- text serialisation ----------------------------------------------------


def to_merge_table(dendrogram: Dendrogram) -> str:
    """One ``step absorbed_mode target_cluster height`` line per merge.

    Comment lines carry the leaf count, the density order and the step at
    which the final collapse starts.
    """
    order = np.argsort(dendrogram.rank)
    lines = [
        f"# n_leaves {dendrogram.n_leaves}",
        f"# final_height {dendrogram.final_height!r}",
        f"# final_step {len(dendrogram.merges) + 1}",
        "# order " + " ".join(map(str, order.tolist())),
        "step\tabsorbed_mode\ttarget_cluster\theight",
    ]
    for rec in list(dendrogram.merges) + dendrogram.final_records():
        lines.append(f"{rec.step}\t{rec.absorbed_mode}\t{rec.target_cluster}\t{rec.height!r}")
    return "\n".join(lines) + "\n"


def from_merge_table(text: str) -> Dendrogram:
    """Rebuild a dendrogram from :func:`to_merge_table` output.

    Links are replaced by the target cluster modes, which yields the same
    partitions for every cut.
    """
    meta = {}
    records = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(" ")
            meta[key] = value
            continue
        if line.startswith("step"):
            continue
        step, absorbed, target, height = line.split("\t")
        records.append(MergeRecord(int(step), int(absorbed), int(target), float(height)))
    try:
        n = int(meta["n_leaves"])
        final_height = float(meta["final_height"])
        final_step = int(meta["final_step"])
        order = np.array(meta["order"].split(), dtype=np.int64)
    except KeyError as exc:
        raise ValueError(f"merge table lacks header field {exc}") from exc
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)
    links = np.full(n, NO_LINK, dtype=np.int64)
    absorbed_step = np.zeros(n, dtype=np.int64)
    merges = []
    for rec in records:
        if rec.step >= final_step:
            continue
        links[rec.absorbed_mode] = rec.target_cluster
        absorbed_step[rec.absorbed_mode] = rec.step
        merges.append(rec)
    roots = np.flatnonzero(absorbed_step == 0)
    roots = roots[np.argsort(rank[roots])]
    return Dendrogram(n, tuple(merges), final_height, links, absorbed_step, rank, roots)


def to_newick(dendrogram: Dendrogram, precision: int = 6) -> str:
    """Nested-parenthesis tree with leaf indices and internal-node heights."""
    fmt = f"{{:.{precision}g}}"
    text = {i: str(i) for i in range(dendrogram.n_leaves)}
    for rec in dendrogram.merges:
        inner = text.pop(rec.absorbed_mode)
        text[rec.target_cluster] = (
            f"({text[rec.target_cluster]},{inner}){fmt.format(rec.height)}"
        )
    roots = dendrogram.roots.tolist()
    if len(roots) == 1:
        return text[roots[0]] + ";"
    body = ",".join(text[r] for r in roots)
    return f"({body}){fmt.format(dendrogram.final_height)};"
