"""Sweep DC-HDP (and optionally other algorithms) on a labelled CSV file.

    python scripts/real_data.py path/to/iris.csv --algos dchdp dp
    python scripts/real_data.py --iris          # scikit-learn's bundled copy
"""

import argparse

import numpy as np

from dchdp import Dataset, load_csv, min_max_normalize
from dchdp.pipeline import sweep

GRIDS = {
    "dchdp": {"tau": tuple(range(2, 51)), "k": tuple(range(2, 11))},
    "dp": {"k": tuple(range(2, 11))},
    "lcdp": {"knn": (5, 10, 20, 50), "k": tuple(range(2, 11))},
    "dbscan": {"minpts": tuple(range(2, 21))},
    "hdp": {"k": tuple(range(2, 11))},
}


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("path", nargs="?", help="CSV with the class label in the last column")
    parser.add_argument("--iris", action="store_true", help="use scikit-learn's Iris copy")
    parser.add_argument("--algos", nargs="+", default=["dchdp"], choices=sorted(GRIDS))
    parser.add_argument("--eps-step", type=float, default=0.005)
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()

    if args.iris:
        from sklearn.datasets import load_iris
        iris = load_iris()
        ds = Dataset(iris.data, iris.target, "iris")
    elif args.path:
        ds = load_csv(args.path)
    else:
        parser.error("give a CSV path or --iris")
    ds = min_max_normalize(ds)
    eps = tuple(np.round(np.arange(args.eps_step, 0.30 + 1e-9, args.eps_step), 4))
    for algo in args.algos:
        best = sweep(ds, ds.labels, algo, {"eps": eps, **GRIDS[algo]}, jobs=args.jobs).best
        print(f"{ds.name} {algo}: best F {best.f_measure:.3f} at {best.params}")


if __name__ == "__main__":
    main()
