"""Command-line entry point: benchmark runner and one-shot estimators."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .bench import (
    aggregate_records,
    load_config,
    run_experiment,
    write_aggregate_csv,
    write_raw_csv,
)
from .exceptions import RobustSparseError
from .sparse_mean import SparseMeanConfig, estimate_sparse_mean
from .sparse_pca import SparsePcaConfig, estimate_sparse_pca

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robust-sparse",
        description="Outlier-robust sparse mean estimation and sparse PCA.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="run a benchmark config and write CSVs")
    bench.add_argument("--config", required=True, help="flat key=value config file")
    bench.add_argument("--out", default=".", help="output directory for CSV files")
    bench.add_argument("--seed", type=int, default=None, help="override config seed")
    bench.add_argument(
        "--trials", type=int, default=None, help="override config trial count"
    )

    def add_estimate_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--input", required=True, help="CSV file, one sample per row")
        p.add_argument("--k", type=int, required=True, help="sparsity level")
        p.add_argument("--eps", type=float, required=True, help="contamination level")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument(
            "--header", action="store_true", help="skip one header line in the input"
        )

    mean = sub.add_parser("estimate-mean", help="robust sparse mean of a CSV sample")
    add_estimate_args(mean)
    mean.add_argument(
        "--prune", action="store_true", help="median-prune gross outliers first"
    )

    pca = sub.add_parser("estimate-pca", help="robust sparse spike of a CSV sample")
    add_estimate_args(pca)
    return parser


def _load_samples(path: str, header: bool) -> np.ndarray:
    """Read one-sample-per-row CSV into the library's d x n column layout."""
    rows = np.loadtxt(path, delimiter=",", skiprows=1 if header else 0, ndmin=2)
    if rows.size == 0:
        raise RobustSparseError(f"no samples in {path}")
    return rows.T


def _cmd_bench(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.trials is not None:
        cfg = replace(cfg, trials=args.trials)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    records = run_experiment(cfg)
    raw_path = out / "raw.csv"
    agg_path = out / "aggregate.csv"
    write_raw_csv(records, raw_path)
    write_aggregate_csv(aggregate_records(records, cfg), agg_path)
    print(f"wrote {raw_path} ({len(records)} rows) and {agg_path}")
    return 0


def _cmd_estimate_mean(args: argparse.Namespace) -> int:
    X = _load_samples(args.input, args.header)
    cfg = SparseMeanConfig(
        k=args.k, eps=args.eps, seed=args.seed, prune=args.prune
    )
    result = estimate_sparse_mean(X, cfg)
    print(",".join(repr(float(v)) for v in result.mu_hat))
    return 0


def _cmd_estimate_pca(args: argparse.Namespace) -> int:
    X = _load_samples(args.input, args.header)
    cfg = SparsePcaConfig(k=args.k, eps=args.eps, seed=args.seed)
    result = estimate_sparse_pca(X, cfg)
    print(",".join(repr(float(v)) for v in result.u))
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "bench": _cmd_bench,
        "estimate-mean": _cmd_estimate_mean,
        "estimate-pca": _cmd_estimate_pca,
    }
    try:
        return handlers[args.command](args)
    except (RobustSparseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
