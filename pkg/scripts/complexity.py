"""Wall time of one DC-HDP run against n, with the ratio between doublings.

    python scripts/complexity.py --sizes 750 1500 3000 --repeats 3
"""

import argparse
import statistics
import time

from dchdp import generate, min_max_normalize
from dchdp.pipeline import RunConfig, run_dataset


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[750, 1500, 3000])
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--family", default="three_gaussians")
    parser.add_argument("--eps-frac", type=float, default=0.05)
    parser.add_argument("--tau", type=int, default=3)
    args = parser.parse_args()

    config = RunConfig("dchdp", args.eps_frac, k=3, tau=args.tau)
    previous = None
    print("n\tmedian_s\tratio")
    for n in args.sizes:
        ds = min_max_normalize(generate(args.family, n, seed=1))
        run_dataset(ds, config)
        times = []
        for _ in range(args.repeats):
            start = time.perf_counter()
            run_dataset(ds, config)
            times.append(time.perf_counter() - start)
        median = statistics.median(times)
        ratio = f"{median / previous:.2f}" if previous else "-"
        print(f"{n}\t{median:.4f}\t{ratio}", flush=True)
        previous = median


if __name__ == "__main__":
    main()
