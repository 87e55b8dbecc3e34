"""Seeded random datasets and hypothesis strategies shared by the tests."""

from __future__ import annotations

import numpy as np
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dchdp import Dataset, pairwise_distances, neighborhood_counts, resolve_epsilon

LINE = Dataset(np.array([0.0, 0.1, 0.2, 0.9, 1.0]), name="line5")


def random_dataset(seed: int, n_max: int = 200, d_max: int = 5, n_min: int = 2) -> Dataset:
    """Blobs, uniform noise or an integer lattice (the latter is full of ties)."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_min, n_max + 1))
    d = int(rng.integers(1, d_max + 1))
    kind = seed % 3
    if kind == 0:
        centres = rng.uniform(0, 1, (int(rng.integers(1, 5)), d))
        pts = centres[rng.integers(0, len(centres), n)] + rng.normal(0, rng.uniform(0.01, 0.1), (n, d))
    elif kind == 1:
        pts = rng.uniform(0, 1, (n, d))
    else:
        pts = rng.integers(0, 6, (n, d)).astype(float)
    return Dataset(pts, name=f"random{seed}")


def line_setup(eps=0.15):
    index = pairwise_distances(LINE)
    return index, neighborhood_counts(index, eps)


def setup(dataset, eps_frac):
    index = pairwise_distances(dataset)
    if index.max_distance == 0:
        return index, None
    return index, neighborhood_counts(index, resolve_epsilon(index, eps_frac))


# coordinates on a coarse lattice so that count and distance ties are common
def point_sets(min_n=1, max_n=25, max_d=3):
    return st.integers(1, max_d).flatmap(
        lambda d: arrays(
            np.float64,
            st.tuples(st.integers(min_n, max_n), st.just(d)),
            elements=st.integers(0, 8).map(lambda v: v / 4),
        )
    )


eps_fractions = st.sampled_from([0.05, 0.1, 0.2, 0.3, 0.5, 1.0])
