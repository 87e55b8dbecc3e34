"""Command-line front end.

Subcommands: ``gen`` (synthetic data), ``cluster`` (one run, labels and
dendrogram export), ``sweep`` (F-measure over a parameter grid) and
``eval`` (F-measure of a label file). Exit codes: 0 success, 2 usage
error, 3 data error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

import numpy as np

from . import data_io
from .density import DegenerateDatasetError, METRICS, pairwise_distances
from .evaluation import f_measure
from .hierarchy import cut_threshold, to_merge_table, to_newick
from .pipeline import ALGORITHMS, SWEEP_PARAMS, RunConfig, run, sweep

log = logging.getLogger("dchdp")

EXIT_USAGE = 2
EXIT_DATA = 3


class UsageError(Exception):
    pass


def parse_grid(spec: str) -> dict:
    """Parse ``name=values;name=values``.

    ``values`` is a comma list or an inclusive ``start:stop[:step]`` range
    (step defaults to 1). ``eps``/``ceps`` are floats, the rest integers.
    """
    grid = {}
    for part in filter(None, (p.strip() for p in spec.split(";"))):
        name, sep, body = part.partition("=")
        name = name.strip()
        if not sep or not name:
            raise UsageError(f"bad grid entry {part!r}; expected name=values")
        cast = float if name in ("eps", "ceps") else int
        body = body.strip()
        try:
            if ":" in body:
                pieces = [float(v) for v in body.split(":")]
                if len(pieces) not in (2, 3):
                    raise ValueError
                start, stop = pieces[:2]
                step = pieces[2] if len(pieces) == 3 else 1.0
                if step <= 0:
                    raise ValueError
                count = int(np.floor((stop - start) / step + 1e-9)) + 1
                values = [cast(round(start + i * step, 10)) for i in range(max(count, 0))]
            else:
                values = [cast(v) for v in body.split(",") if v.strip()]
        except ValueError:
            raise UsageError(f"bad values for grid parameter {name!r}: {body!r}") from None
        if not values:
            raise UsageError(f"grid parameter {name!r} has no values")
        grid[name] = tuple(values)
    if not grid and spec.strip():
        raise UsageError(f"empty grid specification {spec!r}")
    return grid


def _load(path, normalize: bool, labels: bool = True):
    dataset = data_io.load_csv(path, label_column=-1 if labels else None)
    return data_io.min_max_normalize(dataset) if normalize else dataset


def _check_output(path: Path, force: bool):
    if path.exists() and not force:
        raise UsageError(f"{path} exists; pass --force to overwrite")


def cmd_gen(args):
    out = Path(args.out)
    _check_output(out, args.force)
    dataset = data_io.generate(args.family, args.n, args.seed)
    data_io.write_csv(dataset, out)
    print(f"wrote {dataset.n} points to {out}")


def cmd_cluster(args):
    if args.eps_frac is None:
        raise UsageError("--eps-frac is required")
    needs = {"dp": ["k"], "lcdp": ["k", "knn"], "dbscan": ["minpts"], "dchdp": ["tau"], "hdp": []}
    for name in needs[args.algo]:
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required for --algo {args.algo}")
    for name in ("k", "knn", "minpts"):
        value = getattr(args, name)
        if value is not None and value < 1:
            raise UsageError(f"--{name} must be at least 1, got {value}")
    if args.tau is not None and args.tau < 0:
        raise UsageError(f"--tau must be non-negative, got {args.tau}")
    if not 0 < args.eps_frac <= 1:
        raise UsageError(f"--eps-frac must lie in (0, 1], got {args.eps_frac}")
    hierarchical = args.algo in ("hdp", "dchdp")
    if args.dendrogram and not hierarchical:
        raise UsageError("--dendrogram only applies to hdp and dchdp")

    dataset = _load(args.input, not args.no_normalize, labels=args.labels)
    if args.k is not None and args.k > dataset.n:
        raise UsageError(f"--k must not exceed the number of points ({dataset.n})")
    config = RunConfig(
        args.algo, args.eps_frac, k=args.k, tau=args.tau, min_pts=args.minpts,
        knn=args.knn, connect_eps_frac=args.connect_eps_frac, rescale=not args.raw_gamma,
    )
    try:
        result = run(pairwise_distances(dataset, args.metric), config)
    except ValueError as exc:
        if isinstance(exc, (DegenerateDatasetError, data_io.DataError)):
            raise
        raise UsageError(str(exc)) from None

    assignment = result.assignment
    if hierarchical and args.threshold is not None:
        assignment = cut_threshold(result.dendrogram, args.threshold)
    if args.dendrogram:
        Path(args.dendrogram).write_text(to_merge_table(result.dendrogram))
    if args.newick:
        Path(args.newick).write_text(to_newick(result.dendrogram) + "\n")
    if assignment is not None:
        if args.out:
            with Path(args.out).open("w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["index", "label"])
                writer.writerows(enumerate(assignment.labels.tolist()))
        msg = f"{assignment.k} clusters, {assignment.noise_count} noise points"
        if dataset.labels is not None:
            msg += f", F-measure {f_measure(assignment, dataset.labels):.6f}"
        print(msg)
    elif args.out:
        raise UsageError("--out needs --k or --threshold for hierarchical algorithms")


def cmd_sweep(args):
    grid = parse_grid(args.grid) if args.grid else {}
    allowed = set(SWEEP_PARAMS[args.algo])
    unknown = set(grid) - allowed
    if unknown:
        raise UsageError(f"--algo {args.algo} sweeps over {sorted(allowed)}, not {sorted(unknown)}")
    dataset = _load(args.input, not args.no_normalize, labels=args.labels)
    if dataset.labels is None:
        raise UsageError("sweep needs a dataset with ground-truth labels")
    index = pairwise_distances(dataset, args.metric)
    report = sweep(index, dataset.labels, args.algo, grid, jobs=args.jobs)
    if not report.rows:
        raise UsageError("the grid produced no valid parameter combinations")
    text = report.to_tsv()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    best = report.best
    params = ", ".join(f"{c}={v:g}" if isinstance(v, float) else f"{c}={v}"
                       for c, v in zip(report.columns, best.params))
    print(f"best F-measure {best.f_measure:.6f} at {params}",
          file=sys.stderr if not args.out else sys.stdout)


def _last_column(path) -> np.ndarray:
    return data_io.load_csv(path, label_column=-1).labels


def cmd_eval(args):
    pred = _last_column(args.labels)
    truth = _last_column(args.truth)
    if pred.size != truth.size:
        raise data_io.StructuralError(
            f"{args.labels} has {pred.size} labels but {args.truth} has {truth.size}"
        )
    print(f"{f_measure(pred.astype(np.int64), truth):.6f}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dchdp", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a synthetic benchmark dataset")
    p.add_argument("family", choices=data_io.FAMILIES)
    p.add_argument("n", type=int, nargs="?", default=None)
    p.add_argument("seed", type=int, nargs="?", default=0)
    p.add_argument("out", nargs="?", default=None)
    p.add_argument("--seed", dest="seed_flag", type=int)
    p.add_argument("--out", dest="out_flag")
    p.add_argument("--force", action="store_true", help="overwrite an existing file")
    p.set_defaults(func=cmd_gen)

    def common(p):
        p.add_argument("--in", dest="input", required=True, help="dataset CSV")
        p.add_argument("--algo", choices=ALGORITHMS, required=True)
        p.add_argument("--metric", choices=METRICS, default="euclidean")
        p.add_argument("--no-normalize", action="store_true",
                       help="skip min-max normalisation of the input")
        p.add_argument("--labels", action=argparse.BooleanOptionalAction, default=True,
                       help="input has a label column last")

    p = sub.add_parser("cluster", help="run one clustering")
    common(p)
    p.add_argument("--eps-frac", type=float, help="epsilon as a fraction of the max distance")
    p.add_argument("--connect-eps-frac", type=float, help="separate epsilon for connectivity")
    p.add_argument("--tau", type=int)
    p.add_argument("--minpts", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--knn", type=int, help="K of local contrast")
    p.add_argument("--threshold", type=float, help="gamma threshold cut (hierarchical)")
    p.add_argument("--raw-gamma", action="store_true", help="flat DP: rank modes by raw gamma")
    p.add_argument("--out", help="labels CSV (index,label)")
    p.add_argument("--dendrogram", help="merge-table output")
    p.add_argument("--newick", help="nested-parenthesis tree output")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("sweep", help="F-measure over a parameter grid")
    common(p)
    p.add_argument("--grid", default="",
                   help="e.g. 'eps=0.01:0.3:0.01;tau=2,3;k=2:10' (defaults: full grids)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="TSV report (default: stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("eval", help="F-measure of a label file against ground truth")
    p.add_argument("labels", help="CSV whose last column is the predicted label")
    p.add_argument("truth", help="CSV whose last column is the true label")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.command == "gen":
        args.seed = args.seed_flag if args.seed_flag is not None else args.seed
        args.out = args.out_flag or args.out
        if args.out is None:
            parser.error("gen needs an output path")
    try:
        args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    except (data_io.DataError, DegenerateDatasetError, OSError) as exc:
        print(f"dchdp: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
