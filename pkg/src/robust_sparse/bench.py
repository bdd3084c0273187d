"""Experiment harness: config parsing, seeded trial execution, CSV persistence.

A benchmark config is a flat key=value text file that fixes one task
(mean or pca), one corruption model, a set of estimators, and sweeps exactly
one of n, k, or eps over a grid.  Every trial derives its generator seeds
deterministically from (base seed, grid index, trial index), and the same
dataset is shared by all estimators at a grid point, so reruns of the same
config reproduce the raw CSV exactly (up to the wall-clock column).
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import baselines
from .data import (
    CorruptedDataset,
    corrupt_constant_bias,
    corrupt_linear_hiding,
    corrupt_tail_flipping,
    gen_sparse_mean_data,
    gen_spiked_data,
)
from .dense import DenseConfig, estimate_dense_mean, estimate_dense_pca
from .exceptions import ConfigError
from .norms import EigenConfig
from .sparse_mean import SparseMeanConfig, estimate_sparse_mean
from .sparse_pca import (
    SparsePcaConfig,
    estimate_sparse_pca,
    extract_spike,
    subspace_error,
)

__all__ = [
    "BenchConfig",
    "ExperimentRecord",
    "parse_config",
    "load_config",
    "run_experiment",
    "write_raw_csv",
    "write_aggregate_csv",
    "aggregate_records",
]

RAW_COLUMNS = (
    "estimator",
    "noise",
    "d",
    "k",
    "n",
    "eps",
    "rho",
    "seed",
    "trial",
    "error",
    "wall_ms",
)
AGG_COLUMNS = (
    "estimator",
    "noise",
    "swept_var",
    "swept_value",
    "median",
    "q25",
    "q75",
    "trials",
)

_TASKS = ("mean", "pca")
_NOISES = ("none", "linear-hiding", "tail-flipping", "constant-bias")
_MEAN_ESTIMATORS = ("sparse-gd", "dense-gd", "oracle", "naive-prune", "ransac")
_PCA_ESTIMATORS = ("sparse-gd", "dense-gd", "oracle")


@dataclass(frozen=True)
class BenchConfig:
    task: str
    noise: str
    d: int
    k: int
    n: int
    eps: float
    rho: float
    trials: int
    seed: int
    estimators: tuple[str, ...]
    swept_var: str  # "n", "k", or "eps"
    grid: tuple[float, ...]
    bias: float = 2.0
    n_iter: int = 2000
    prune: bool = False

    def __post_init__(self):
        if self.task not in _TASKS:
            raise ConfigError(f"task must be one of {_TASKS}, got {self.task!r}")
        if self.noise not in _NOISES:
            raise ConfigError(f"noise must be one of {_NOISES}, got {self.noise!r}")
        allowed = _MEAN_ESTIMATORS if self.task == "mean" else _PCA_ESTIMATORS
        for est in self.estimators:
            if est not in allowed:
                raise ConfigError(
                    f"estimator {est!r} not valid for task {self.task!r} "
                    f"(allowed: {allowed})"
                )
        if not self.estimators:
            raise ConfigError("at least one estimator is required")
        if self.swept_var not in ("n", "k", "eps"):
            raise ConfigError(f"swept variable must be n, k, or eps, got {self.swept_var!r}")
        if not self.grid:
            raise ConfigError("grid must be nonempty")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")


@dataclass(frozen=True)
class ExperimentRecord:
    estimator: str
    noise: str
    d: int
    k: int
    n: int
    eps: float
    rho: float
    seed: int
    trial: int
    error: float
    wall_ms: float

    def __post_init__(self):
        if self.error < 0.0:
            raise ValueError(f"error must be nonnegative, got {self.error}")


_INT_KEYS = {"d", "k", "n", "trials", "seed", "n_iter"}
_FLOAT_KEYS = {"eps", "rho", "bias"}
_GRID_KEYS = {"n_grid": "n", "k_grid": "k", "eps_grid": "eps"}


def parse_config(text: str, source: str = "<config>") -> BenchConfig:
    """Parse a flat key=value config; errors name the offending line."""
    values: dict[str, object] = {}
    grids: dict[str, tuple[float, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key=value, got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip().replace("-", "_")
        val = val.strip()
        if not val:
            raise ConfigError(f"{source}:{lineno}: empty value for {key!r}")
        try:
            if key in _GRID_KEYS:
                grids[_GRID_KEYS[key]] = tuple(
                    float(v.strip()) for v in val.split(",")
                )
            elif key in _INT_KEYS:
                values[key] = int(val)
            elif key in _FLOAT_KEYS:
                values[key] = float(val)
            elif key == "estimators":
                values[key] = tuple(v.strip() for v in val.split(",") if v.strip())
            elif key in ("task", "noise"):
                values[key] = val
            elif key == "prune":
                if val not in ("true", "false"):
                    raise ValueError(f"expected true/false, got {val!r}")
                values[key] = val == "true"
            else:
                raise ValueError(f"unknown key {key!r}")
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: {exc}") from exc
    if len(grids) != 1:
        raise ConfigError(
            f"{source}: exactly one of n_grid, k_grid, eps_grid is required, "
            f"got {len(grids)}"
        )
    (swept_var, grid), = grids.items()
    missing = {"task", "noise", "d", "k", "n", "eps", "trials", "seed", "estimators"} - (
        values.keys() | {swept_var}
    )
    if missing:
        raise ConfigError(f"{source}: missing required keys: {sorted(missing)}")
    values.setdefault("rho", 0.0)
    values.setdefault(swept_var, 0)  # replaced at each grid point
    try:
        return BenchConfig(swept_var=swept_var, grid=grid, **values)
    except TypeError as exc:
        raise ConfigError(f"{source}: {exc}") from exc


def load_config(path: str | Path) -> BenchConfig:
    path = Path(path)
    return parse_config(path.read_text(), source=str(path))


def _at_grid_point(cfg: BenchConfig, value: float) -> BenchConfig:
    if cfg.swept_var == "n":
        return replace(cfg, n=int(value))
    if cfg.swept_var == "k":
        return replace(cfg, k=int(value))
    return replace(cfg, eps=value)


def _make_dataset(cfg: BenchConfig, gen_seed: int, corrupt_seed: int) -> CorruptedDataset:
    if cfg.task == "mean":
        data = gen_sparse_mean_data(cfg.d, cfg.k, cfg.n, gen_seed)
    else:
        data = gen_spiked_data(cfg.d, cfg.k, cfg.n, cfg.rho, gen_seed)
    if cfg.noise == "none" or cfg.eps == 0.0:
        return data
    if cfg.noise == "linear-hiding":
        return corrupt_linear_hiding(data, cfg.eps, corrupt_seed)
    if cfg.noise == "tail-flipping":
        return corrupt_tail_flipping(data, cfg.eps, corrupt_seed)
    return corrupt_constant_bias(data, cfg.eps, corrupt_seed, bias=cfg.bias)


def _pca_oracle_direction(data: CorruptedDataset, k: int, seed: int) -> np.ndarray:
    X_in = data.X[:, data.inlier_mask]
    M = X_in @ X_in.T / X_in.shape[1]
    u, _ = extract_spike(M - np.eye(data.d), k, EigenConfig(seed=seed))
    return u


def _run_estimator(
    est: str, cfg: BenchConfig, data: CorruptedDataset, est_seed: int
) -> float:
    # eps drives the weight cap; keep it off zero so the domain stays valid
    solver_eps = max(cfg.eps, 1e-3)
    if cfg.task == "mean":
        if est == "oracle":
            mu = baselines.baseline_oracle(data)
        elif est == "naive-prune":
            mu = baselines.baseline_naive_prune(data)
        elif est == "ransac":
            mu = baselines.baseline_ransac(data, seed=est_seed)
        elif est == "sparse-gd":
            sm = SparseMeanConfig(
                k=cfg.k, eps=solver_eps, n_iter=cfg.n_iter, seed=est_seed,
                prune=cfg.prune,
            )
            mu = estimate_sparse_mean(data.X, sm).mu_hat
        else:  # dense-gd
            dc = DenseConfig(eps=solver_eps, n_iter=cfg.n_iter, seed=est_seed)
            mu, _, _ = estimate_dense_mean(data.X, dc)
        return baselines.sparse_error(mu, data.truth, cfg.k)
    # pca task
    if est == "oracle":
        u = _pca_oracle_direction(data, cfg.k, est_seed)
    elif est == "sparse-gd":
        sp = SparsePcaConfig(k=cfg.k, eps=solver_eps, n_iter=cfg.n_iter, seed=est_seed)
        u = estimate_sparse_pca(data.X, sp).u
    else:  # dense-gd
        dc = DenseConfig(eps=solver_eps, n_iter=cfg.n_iter, seed=est_seed)
        u, _, _ = estimate_dense_pca(data.X, dc)
    return subspace_error(u, data.truth.v)


def run_experiment(cfg: BenchConfig) -> list[ExperimentRecord]:
    """Run the full grid; rows come out in (grid, estimator, trial) order."""
    records: list[ExperimentRecord] = []
    for gi, value in enumerate(cfg.grid):
        point = _at_grid_point(cfg, value)
        datasets = []
        for trial in range(cfg.trials):
            seq = np.random.SeedSequence(entropy=(cfg.seed, gi, trial))
            gen_seed, corrupt_seed, est_seed = (int(s) for s in seq.generate_state(3))
            datasets.append((trial, _make_dataset(point, gen_seed, corrupt_seed), est_seed))
        for est in cfg.estimators:
            for trial, data, est_seed in datasets:
                start = time.perf_counter()
                error = _run_estimator(est, point, data, est_seed)
                wall_ms = (time.perf_counter() - start) * 1e3
                records.append(
                    ExperimentRecord(
                        estimator=est,
                        noise=cfg.noise,
                        d=point.d,
                        k=point.k,
                        n=point.n,
                        eps=point.eps,
                        rho=point.rho,
                        seed=cfg.seed,
                        trial=trial,
                        error=error,
                        wall_ms=wall_ms,
                    )
                )
    return records


def _fmt(x: float) -> str:
    return repr(float(x))


def write_raw_csv(records: list[ExperimentRecord], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RAW_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.estimator,
                    r.noise,
                    r.d,
                    r.k,
                    r.n,
                    _fmt(r.eps),
                    _fmt(r.rho),
                    r.seed,
                    r.trial,
                    _fmt(r.error),
                    f"{r.wall_ms:.3f}",
                ]
            )


def aggregate_records(
    records: list[ExperimentRecord], cfg: BenchConfig
) -> list[tuple[str, str, str, float, float, float, float, int]]:
    """One (estimator, grid point) row with median and quartiles of the errors."""
    rows = []
    for gi, value in enumerate(cfg.grid):
        point = _at_grid_point(cfg, value)
        swept_value = {"n": point.n, "k": point.k, "eps": point.eps}[cfg.swept_var]
        for est in cfg.estimators:
            errs = [
                r.error
                for r in records
                if r.estimator == est
                and r.n == point.n
                and r.k == point.k
                and r.eps == point.eps
            ]
            if not errs:
                continue
            q25, med, q75 = np.percentile(errs, [25.0, 50.0, 75.0])
            rows.append(
                (est, cfg.noise, cfg.swept_var, float(swept_value),
                 float(med), float(q25), float(q75), len(errs))
            )
    return rows


def write_aggregate_csv(rows, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(AGG_COLUMNS)
        for est, noise, var, value, med, q25, q75, trials in rows:
            writer.writerow(
                [est, noise, var, _fmt(value), _fmt(med), _fmt(q25), _fmt(q75), trials]
            )
