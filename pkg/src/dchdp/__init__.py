"""Density-peak, DBSCAN and density-connected hierarchical DP clustering."""

from .connectivity import ComponentMap, build_components, is_connected
from .data_io import generate, load_csv, min_max_normalize, write_csv
from .dbscan import dbscan
from .density import (
    Dataset,
    DensityProfile,
    DistanceIndex,
    neighborhood_counts,
    pairwise_distances,
    resolve_epsilon,
)
from .evaluation import f_measure
from .flat_dp import NOISE, ClusterAssignment, dp_cluster, dp_noise, lcdp_cluster
from .hierarchy import Dendrogram, cut, cut_threshold, dc_hdp, hierarchical_dp
from .peaks import PeakStats, eta_delta_gamma, eta_delta_gamma_connected, local_contrast

__all__ = [
    "ClusterAssignment", "ComponentMap", "Dataset", "Dendrogram", "DensityProfile",
    "DistanceIndex", "NOISE", "PeakStats", "build_components", "cut", "cut_threshold",
    "dbscan", "dc_hdp", "dp_cluster", "dp_noise", "eta_delta_gamma",
    "eta_delta_gamma_connected", "f_measure", "generate", "hierarchical_dp",
    "is_connected", "lcdp_cluster", "load_csv", "local_contrast", "min_max_normalize",
    "neighborhood_counts", "pairwise_distances", "resolve_epsilon", "write_csv",
]
