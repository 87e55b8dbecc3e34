import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from dchdp import NOISE, Dataset, dbscan, is_connected, build_components, neighborhood_counts, pairwise_distances
from helpers import LINE, point_sets


def test_line_example():
    index = pairwise_distances(LINE)
    result = dbscan(index, 0.15, 2)
    assert result.labels.tolist() == [1, 1, 1, 2, 2]
    assert result.modes.tolist() == [1, 3]
    assert result.noise_count == 0


def test_min_pts_one_gives_distance_components():
    index = pairwise_distances(LINE)
    result = dbscan(index, 0.15, 1)
    assert result.labels.tolist() == [1, 1, 1, 2, 2]
    assert dbscan(index, 0.05, 1).labels.tolist() == [1, 2, 3, 4, 5]


def test_noise_and_parameter_errors():
    index = pairwise_distances(LINE)
    assert dbscan(index, 0.15, 4).labels.tolist() == [NOISE] * 5
    with pytest.raises(ValueError):
        dbscan(index, 0.0, 2)
    with pytest.raises(ValueError):
        dbscan(index, 0.1, 0)


def test_border_tie_goes_to_denser_core():
    # 0.5 is equidistant from the cores 0.3 and 0.7; the right group is denser
    pts = Dataset(np.array([0.1, 0.2, 0.3, 0.5, 0.7, 0.75, 0.8, 0.85]))
    index = pairwise_distances(pts)
    result = dbscan(index, 0.2 + 1e-9, 3)
    assert result.labels[3] == result.labels[4]


@settings(max_examples=80, deadline=None)
@given(point_sets(max_n=25), st.floats(0.1, 1.5), st.integers(1, 6))
def test_matches_brute_force(points, eps, min_pts):
    index = pairwise_distances(Dataset(points))
    result = dbscan(index, eps, min_pts)
    D = oracles.distances(points)
    assert result.labels.tolist() == oracles.dbscan(D, eps, min_pts)
    # every clustered non-core point has a core point of its cluster within reach
    cnt = np.array(oracles.counts(D, eps))
    core = cnt >= min_pts
    for i in np.flatnonzero((result.labels != NOISE) & ~core):
        near = core & (index.distances[i] <= eps) & (result.labels == result.labels[i])
        assert near.any()


@settings(max_examples=40, deadline=None)
@given(point_sets(max_n=25), st.floats(0.1, 1.5), st.integers(1, 6))
def test_members_connected_to_their_mode(points, eps, min_pts):
    index = pairwise_distances(Dataset(points))
    result = dbscan(index, eps, min_pts)
    cmap = build_components(index, eps, min_pts, neighborhood_counts(index, eps))
    for label, mode in enumerate(result.modes, start=1):
        for x in np.flatnonzero(result.labels == label):
            assert is_connected(int(x), int(mode), cmap)
