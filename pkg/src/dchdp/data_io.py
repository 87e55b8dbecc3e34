"""Dataset loading, min-max normalisation and synthetic benchmark generators.

Generators draw from ``numpy.random.Generator(PCG64(seed))`` (the stream
behind ``numpy.random.default_rng``), with normals from numpy's ziggurat
sampler; the draw sequence of each family is fixed below, so a given
``(family, n, seed)`` always yields bitwise-identical points.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .density import Dataset

FAMILIES = ("two_rings", "three_clusters", "three_gaussians", "two_squares")
DEFAULT_SIZES = {
    "two_rings": 1500,
    "three_clusters": 900,
    "three_gaussians": 1500,
    "two_squares": 1100,
}


class DataError(ValueError):
    """Malformed or unusable input data."""


class ParseError(DataError):
    pass


class StructuralError(DataError):
    pass


class EmptyDatasetError(DataError):
    pass


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def _looks_like_header(rows: list[list[str]]) -> bool:
    first = [_is_number(c) for c in rows[0]]
    if len(rows) == 1:
        return not any(first)
    # a text cell above a numeric one; text label columns stay text throughout
    return any(not a and _is_number(b) for a, b in zip(first, rows[1]))


def _parse_labels(cells: list[str]) -> np.ndarray:
    try:
        return np.array([int(c) for c in cells], dtype=np.int64)
    except ValueError:
        return np.array(cells)


def load_csv(path, delimiter: str = ",", label_column: int | None = -1,
             header: bool | None = None) -> Dataset:
    """Read a delimited numeric table.

    ``label_column`` names the column holding class labels (default: the
    last one); ``None`` means the file has no labels. ``header=None``
    treats the first row as a header when it has text where the second row
    has a number, or, for a single row, when it has no number at all.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(fh, delimiter=delimiter) if r and any(c.strip() for c in r)]
    if rows and (header or (header is None and _looks_like_header(rows))):
        rows = rows[1:]
    if not rows:
        raise EmptyDatasetError(f"{path}: no data rows")
    width = len(rows[0])
    for i, row in enumerate(rows, start=1):
        if len(row) != width:
            raise StructuralError(f"{path}: data row {i} has {len(row)} fields, expected {width}")

    columns = list(range(width))
    labels = None
    if label_column is not None:
        lab_col = columns[label_column]
        columns.remove(lab_col)
        labels = _parse_labels([row[lab_col].strip() for row in rows])
    if not columns:
        raise StructuralError(f"{path}: no coordinate columns")
    points = np.empty((len(rows), len(columns)), dtype=float)
    for i, row in enumerate(rows):
        for j, col in enumerate(columns):
            try:
                points[i, j] = float(row[col])
            except ValueError:
                raise ParseError(
                    f"{path}: non-numeric value {row[col]!r} at data row {i + 1}, column {col + 1}"
                ) from None
    return Dataset(points, labels, path.stem)


def write_csv(dataset: Dataset, path, header: bool = True) -> None:
    """Write points (shortest round-trip float repr) and labels, if any, last."""
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if header:
            names = [f"x{j}" for j in range(dataset.d)]
            if dataset.labels is not None:
                names.append("label")
            writer.writerow(names)
        for i in range(dataset.n):
            row = [repr(float(v)) for v in dataset.points[i]]
            if dataset.labels is not None:
                row.append(str(dataset.labels[i]))
            writer.writerow(row)


def min_max_normalize(dataset: Dataset) -> Dataset:
    """Map each attribute affinely onto [0, 1]; constant attributes become 0."""
    pts = dataset.points
    lo = pts.min(axis=0)
    span = pts.max(axis=0) - lo
    safe = np.where(span > 0, span, 1.0)
    scaled = np.where(span > 0, (pts - lo) / safe, 0.0)
    return Dataset(scaled, dataset.labels, dataset.name)


# -- synthetic families ------------------------------------------------------


def _split(n: int, weights) -> list[int]:
    sizes = [int(round(n * w)) for w in weights[:-1]]
    sizes.append(n - sum(sizes))
    return sizes


def _two_rings(n, rng):
    sizes = _split(n, [0.5, 0.5])
    pts, labels = [], []
    for label, (size, radius) in enumerate(zip(sizes, (0.22, 0.45)), start=1):
        angle = rng.uniform(0.0, 2 * np.pi, size)
        r = radius + rng.normal(0.0, 0.01, size)
        pts.append(np.column_stack([0.5 + r * np.cos(angle), 0.5 + r * np.sin(angle)]))
        labels.append(np.full(size, label))
    return pts, labels


def _three_gaussians(n, rng):
    # two dense clusters close enough that their valley is denser than the
    # peak of the sparse one, so no single density threshold separates all three
    specs = [((0.25, 0.70), 0.03), ((0.39, 0.70), 0.03), ((0.60, 0.30), 0.10)]
    sizes = _split(n, [1 / 3, 1 / 3, 1 / 3])
    pts, labels = [], []
    for label, (size, (centre, sigma)) in enumerate(zip(sizes, specs), start=1):
        pts.append(rng.normal(centre, sigma, (size, 2)))
        labels.append(np.full(size, label))
    return pts, labels


def _two_squares(n, rng):
    big, bump, small = _split(n, [0.82, 0.03, 0.15])
    big_pts = rng.uniform(0.05, 0.65, (big, 2))
    # dense strip on the edge of the big square that faces the small one
    bump_pts = np.column_stack([rng.uniform(0.62, 0.65, bump), rng.uniform(0.50, 0.65, bump)])
    small_pts = rng.uniform(0.75, 0.95, (small, 2))
    pts = [np.vstack([big_pts, bump_pts]), small_pts]
    labels = [np.full(big + bump, 1), np.full(small, 2)]
    return pts, labels


def _three_clusters(n, rng):
    flat, left, right, g1, g2 = _split(n, [0.2, 0.08, 0.0533, 1 / 3, 1 / 3])
    strip = [
        np.column_stack([rng.uniform(0.1, 0.9, flat), rng.uniform(0.75, 0.85, flat)]),
        np.column_stack([np.clip(rng.normal(0.25, 0.04, left), 0.1, 0.9),
                         rng.uniform(0.75, 0.85, left)]),
        np.column_stack([np.clip(rng.normal(0.75, 0.04, right), 0.1, 0.9),
                         rng.uniform(0.75, 0.85, right)]),
    ]
    pts = [np.vstack(strip), rng.normal((0.3, 0.3), 0.05, (g1, 2)),
           rng.normal((0.7, 0.3), 0.05, (g2, 2))]
    labels = [np.full(flat + left + right, 1), np.full(g1, 2), np.full(g2, 3)]
    return pts, labels


_GENERATORS = {
    "two_rings": _two_rings,
    "three_clusters": _three_clusters,
    "three_gaussians": _three_gaussians,
    "two_squares": _two_squares,
}


def generate(family: str, n: int | None = None, seed: int = 0) -> Dataset:
    """Labelled synthetic dataset from one of :data:`FAMILIES`."""
    if family not in _GENERATORS:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")
    n = DEFAULT_SIZES[family] if n is None else int(n)
    if n < 10:
        raise ValueError(f"n must be at least 10, got {n}")
    rng = np.random.default_rng(seed)
    pts, labels = _GENERATORS[family](n, rng)
    return Dataset(np.vstack(pts), np.concatenate(labels).astype(np.int64), family)
