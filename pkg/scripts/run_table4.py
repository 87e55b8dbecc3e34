"""Best sweep F-measure of every algorithm on the four synthetic families.

    python scripts/run_table4.py --seed 1 --eps-step 0.01 --out table4.tsv
"""

import argparse
import time

import numpy as np

from dchdp import generate, min_max_normalize, pairwise_distances
from dchdp.data_io import FAMILIES
from dchdp.pipeline import sweep

ALGOS = ("dp", "lcdp", "dbscan", "hdp", "dchdp")


def grids(eps_step: float, max_k: int):
    eps = tuple(np.round(np.arange(eps_step, 0.30 + 1e-9, eps_step), 4))
    ks = tuple(range(2, max_k + 1))
    return {
        "dp": {"eps": eps, "k": ks},
        "lcdp": {"eps": eps, "k": ks, "knn": (5, 10, 20, 50)},
        "dbscan": {"eps": eps, "minpts": tuple(range(2, 21))},
        "hdp": {"eps": eps, "k": ks},
        "dchdp": {"eps": eps, "tau": (2, 3, 5, 10, 20), "k": ks},
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--eps-step", type=float, default=0.01)
    parser.add_argument("--max-k", type=int, default=10)
    parser.add_argument("--algos", nargs="+", default=list(ALGOS), choices=ALGOS)
    parser.add_argument("--families", nargs="+", default=list(FAMILIES), choices=FAMILIES)
    parser.add_argument("--out", help="write the table as TSV")
    args = parser.parse_args()

    grid = grids(args.eps_step, args.max_k)
    rows = []
    print("family\t" + "\t".join(args.algos))
    for family in args.families:
        ds = min_max_normalize(generate(family, seed=args.seed))
        index = pairwise_distances(ds)
        scores = []
        for algo in args.algos:
            start = time.perf_counter()
            best = sweep(index, ds.labels, algo, grid[algo]).best
            scores.append(best.f_measure)
            print(f"  {family} {algo}: {best.f_measure:.3f} at {best.params} "
                  f"({time.perf_counter() - start:.1f}s)", flush=True)
        rows.append((family, scores))
        print(family + "\t" + "\t".join(f"{s:.3f}" for s in scores), flush=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("family\t" + "\t".join(args.algos) + "\n")
            for family, scores in rows:
                fh.write(family + "\t" + "\t".join(f"{s:.4f}" for s in scores) + "\n")


if __name__ == "__main__":
    main()
