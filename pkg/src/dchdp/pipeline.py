"""Run configurations, single runs and parameter sweeps for every algorithm."""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .connectivity import build_components
from .dbscan import dbscan
from .density import Dataset, DistanceIndex, neighborhood_counts, pairwise_distances, resolve_epsilon
from .evaluation import f_measure
from .flat_dp import ClusterAssignment, dp_cluster
from .hierarchy import Dendrogram, cut, dc_hdp, hierarchical_dp
from .peaks import eta_delta_gamma, eta_delta_gamma_connected, local_contrast

ALGORITHMS = ("dp", "lcdp", "dbscan", "hdp", "dchdp")

# parameters each algorithm sweeps over, in report column order
SWEEP_PARAMS = {
    "dp": ("eps", "k"),
    "lcdp": ("eps", "knn", "k"),
    "dbscan": ("eps", "minpts"),
    "hdp": ("eps", "k"),
    "dchdp": ("eps", "ceps", "tau", "k"),
}


def _frange(start, stop, step):
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return tuple(float(round(start + i * step, 10)) for i in range(max(count, 0)))


DEFAULT_GRID = {
    "eps": _frange(0.005, 0.30, 0.005),
    "k": tuple(range(2, 51)),
    "tau": tuple(range(2, 51)),
    "minpts": tuple(range(2, 21)),
    "knn": tuple(range(2, 51)),
}


@dataclass(frozen=True)
class RunConfig:
    """One clustering run. ``eps_frac`` is a fraction of the max distance.

    ``connect_eps_frac`` defaults to ``eps_frac``. ``rescale`` selects flat
    DP modes on min-max rescaled factors; turn it off for raw gamma.
    """

    algo: str
    eps_frac: float
    k: Optional[int] = None
    tau: Optional[int] = None
    min_pts: Optional[int] = None
    knn: Optional[int] = None
    connect_eps_frac: Optional[float] = None
    rescale: bool = True

    def __post_init__(self):
        if self.algo not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algo!r}; choose from {ALGORITHMS}")
        required = {
            "dp": ("k",),
            "lcdp": ("k", "knn"),
            "dbscan": ("min_pts",),
            "hdp": (),
            "dchdp": ("tau",),
        }[self.algo]
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.algo} requires parameter(s): {', '.join(missing)}")


@dataclass
class RunResult:
    assignment: Optional[ClusterAssignment]
    dendrogram: Optional[Dendrogram] = None
    epsilon: float = 0.0
    extras: dict = field(default_factory=dict)


def run(index: DistanceIndex, config: RunConfig) -> RunResult:
    """Execute ``config`` on a precomputed distance index.

    Hierarchical algorithms return their dendrogram and, when ``k`` is set,
    the ``k``-cut as the assignment.
    """
    eps = resolve_epsilon(index, config.eps_frac)
    if config.algo == "dbscan":
        return RunResult(dbscan(index, eps, config.min_pts), epsilon=eps)
    profile = neighborhood_counts(index, eps)
    if config.algo == "dp":
        stats = eta_delta_gamma(index, profile)
        return RunResult(dp_cluster(stats, config.k, config.rescale), epsilon=eps)
    if config.algo == "lcdp":
        stats = local_contrast(index, profile, config.knn)
        return RunResult(dp_cluster(stats, config.k, config.rescale), epsilon=eps)
    if config.algo == "hdp":
        tree = hierarchical_dp(eta_delta_gamma(index, profile))
    else:
        ceps_frac = config.connect_eps_frac or config.eps_frac
        cmap = build_components(index, resolve_epsilon(index, ceps_frac), config.tau, profile)
        tree = dc_hdp(eta_delta_gamma_connected(index, profile, cmap))
    assignment = cut(tree, config.k) if config.k is not None else None
    return RunResult(assignment, tree, eps)


def run_dataset(dataset: Dataset, config: RunConfig, metric: str = "euclidean") -> RunResult:
    return run(pairwise_distances(dataset, metric), config)


# -- sweeps -----------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    params: tuple
    f_measure: float


@dataclass
class SweepReport:
    algo: str
    columns: tuple
    rows: list

    @property
    def best(self) -> SweepRow:
        """Highest score; ties go to the first row in report order."""
        return max(self.rows, key=lambda r: r.f_measure) if self.rows else None

    def to_tsv(self) -> str:
        best = self.best
        lines = ["\t".join(self.columns + ("f_measure", "best"))]
        for row in self.rows:
            cells = [_fmt(v) for v in row.params]
            cells += [f"{row.f_measure:.6f}", "*" if row is best else ""]
            lines.append("\t".join(cells))
        return "\n".join(lines) + "\n"


def _fmt(value) -> str:
    return f"{value:g}" if isinstance(value, float) else str(value)


def resolve_grid(algo: str, grid: dict | None = None) -> dict:
    """Complete a partial grid with the defaults for ``algo``."""
    if algo not in SWEEP_PARAMS:
        raise ValueError(f"unknown algorithm {algo!r}")
    grid = dict(grid or {})
    unknown = set(grid) - set(SWEEP_PARAMS[algo])
    if unknown:
        raise ValueError(f"{algo} does not sweep over: {', '.join(sorted(unknown))}")
    out = {}
    for name in SWEEP_PARAMS[algo]:
        if name == "ceps":
            values = grid.get("ceps")
        else:
            values = grid.get(name, DEFAULT_GRID[name])
        if values is not None and len(values) == 0:
            raise ValueError(f"grid for {name!r} is empty")
        cast = float if name in ("eps", "ceps") else int
        out[name] = None if values is None else tuple(sorted(cast(v) for v in values))
    return out


def _sweep_eps(index, truth, algo, eps_frac, grid):
    n = index.n
    ks = [k for k in grid.get("k") or () if k <= n]
    eps = resolve_epsilon(index, eps_frac)
    rows = []
    if algo == "dbscan":
        for m in grid["minpts"]:
            rows.append(SweepRow((eps_frac, m), f_measure(dbscan(index, eps, m), truth)))
        return rows
    profile = neighborhood_counts(index, eps)
    if algo == "dp":
        stats = eta_delta_gamma(index, profile)
        for k in ks:
            rows.append(SweepRow((eps_frac, k), f_measure(dp_cluster(stats, k), truth)))
    elif algo == "lcdp":
        for knn in grid["knn"]:
            if knn > n - 1:
                continue
            stats = local_contrast(index, profile, knn)
            for k in ks:
                rows.append(SweepRow((eps_frac, knn, k), f_measure(dp_cluster(stats, k), truth)))
    elif algo == "hdp":
        tree = hierarchical_dp(eta_delta_gamma(index, profile))
        for k in ks:
            rows.append(SweepRow((eps_frac, k), f_measure(cut(tree, k), truth)))
    elif algo == "dchdp":
        for ceps_frac in grid["ceps"] or (eps_frac,):
            ceps = resolve_epsilon(index, ceps_frac)
            for tau in grid["tau"]:
                cmap = build_components(index, ceps, tau, profile)
                tree = dc_hdp(eta_delta_gamma_connected(index, profile, cmap))
                for k in ks:
                    score = f_measure(cut(tree, k), truth)
                    rows.append(SweepRow((eps_frac, ceps_frac, tau, k), score))
    return rows


def sweep(dataset_or_index, truth, algo: str, grid: dict | None = None,
          jobs: int = 1, metric: str = "euclidean") -> SweepReport:
    """Score every grid point with the F-measure against ``truth``.

    Rows come back sorted by parameter tuple regardless of ``jobs``.
    """
    grid = resolve_grid(algo, grid)
    if truth is None:
        raise ValueError("a sweep needs ground-truth labels")
    index = (dataset_or_index if isinstance(dataset_or_index, DistanceIndex)
             else pairwise_distances(dataset_or_index, metric))
    truth = np.asarray(truth)
    tasks = [(index, truth, algo, e, grid) for e in grid["eps"]]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(lambda t: _sweep_eps(*t), tasks))
    else:
        chunks = [_sweep_eps(*t) for t in tasks]
    rows = sorted(itertools.chain.from_iterable(chunks), key=lambda r: r.params)
    columns = SWEEP_PARAMS[algo]
    return SweepReport(algo, columns, rows)
