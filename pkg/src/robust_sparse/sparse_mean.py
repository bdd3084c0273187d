"""Robust sparse mean estimation via projected subgradient descent.

Minimizes the structured norm of the weighted covariance's deviation from the
identity over the capped simplex, then reports the top-k truncation of the
weighted mean at the best iterate.  The objective is a pointwise maximum of
linear functionals indexed by unit-Frobenius certificate matrices supported
on k rows with k entries each; each step descends along the gradient of the
active linearization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import AllPruned, DimensionMismatch
from .norms import MatFkk, fkk_norm
from .simplex import CappedSimplex, WeightVector, weighted_moments
from .solver import PgdResult, default_step_scale, pgd_minimize

__all__ = [
    "SparseMeanConfig",
    "SparseMeanResult",
    "objective_sparse_mean",
    "subgradient_sparse_mean",
    "pgd_sparse_mean",
    "median_prune",
    "truncate_topk",
    "estimate_sparse_mean",
]


@dataclass(frozen=True)
class SparseMeanConfig:
    k: int
    eps: float
    n_iter: int = 2000
    step_scale: float | None = None  # None: R / L heuristic from the samples
    tol: float = 1e-8
    patience: int = 200
    seed: int = 0
    prune: bool = False
    prune_radius_factor: float = 4.0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not 0.0 < self.eps < 1.0 / 3.0:
            raise ValueError(f"eps must be in (0, 1/3), got {self.eps}")
        if self.n_iter < 1:
            raise ValueError(f"n_iter must be >= 1, got {self.n_iter}")
        if self.step_scale is not None and self.step_scale <= 0.0:
            raise ValueError("step_scale must be positive")


@dataclass(frozen=True)
class SparseMeanResult:
    mu_hat: np.ndarray
    w_final: WeightVector
    objective_trace: list[tuple[int, float]] = field(repr=False)
    best_objective: float = 0.0
    support: tuple[int, ...] = ()
    kept: np.ndarray | None = field(default=None, repr=False)


def _certificate(A: np.ndarray, sel: MatFkk) -> np.ndarray:
    """Unit-Frobenius matrix equal to A on the selection, zero elsewhere."""
    Y = np.zeros_like(A)
    if sel.value == 0.0:
        return Y
    for i in sel.rows:
        cols = list(sel.cols[i])
        Y[i, cols] = A[i, cols]
    return Y / sel.value


def objective_sparse_mean(
    X: np.ndarray, w: WeightVector | np.ndarray, k: int
) -> tuple[float, np.ndarray]:
    """Objective value at w and the active unit-Frobenius certificate Y.

    f equals the structured norm of (cov_w - I) and Y satisfies
    f = Y . (cov_w - I) exactly (Y = 0 when f = 0).
    """
    mom = weighted_moments(X, w)
    A = mom.covariance - np.eye(X.shape[0])
    sel = fkk_norm(A, k)
    return sel.value, _certificate(A, sel)


def subgradient_sparse_mean(
    X: np.ndarray, w: WeightVector | np.ndarray, Y: np.ndarray
) -> np.ndarray:
    """Gradient in w of the linearization w -> Y . (cov_w - I)."""
    X = np.asarray(X, dtype=float)
    wv = w.w if isinstance(w, WeightVector) else np.asarray(w, dtype=float)
    if X.shape[1] != wv.size or Y.shape != (X.shape[0], X.shape[0]):
        raise DimensionMismatch("inconsistent shapes for subgradient")
    YX = Y @ X
    diag_term = np.einsum("ij,ij->j", X, YX)
    mu = X @ wv
    return diag_term - X.T @ ((Y + Y.T) @ mu)


def _pgd_oracle(X: np.ndarray, k: int):
    """Fast objective/gradient oracle exploiting the k^2-sparse certificate."""
    d = X.shape[0]
    eye = np.eye(d)

    def oracle(w: np.ndarray) -> tuple[float, np.ndarray]:
        mu = X @ w
        second = (X * w) @ X.T
        A = second - np.outer(mu, mu) - eye
        A = 0.5 * (A + A.T)
        sel = fkk_norm(A, k)
        if sel.value == 0.0:
            return 0.0, np.zeros_like(w)
        cells = sel.cells()
        rows = np.fromiter((c[0] for c in cells), dtype=int)
        cols = np.fromiter((c[1] for c in cells), dtype=int)
        vals = A[rows, cols] / sel.value
        # diag(X^T Y X) using only the k^2 active cells
        diag_term = np.einsum("q,qn,qn->n", vals, X[rows], X[cols])
        z = np.zeros(d)  # (Y + Y^T) mu
        np.add.at(z, rows, vals * mu[cols])
        np.add.at(z, cols, vals * mu[rows])
        return sel.value, diag_term - X.T @ z

    return oracle


def pgd_sparse_mean(X: np.ndarray, cfg: SparseMeanConfig) -> PgdResult:
    """Run projected subgradient descent on the sparse-mean objective."""
    X = np.asarray(X, dtype=float)
    domain = CappedSimplex(X.shape[1], cfg.eps)
    oracle = _pgd_oracle(X, cfg.k)
    xi = (
        cfg.step_scale
        if cfg.step_scale is not None
        else default_step_scale(oracle, domain)
    )
    return pgd_minimize(oracle, domain, cfg.n_iter, xi, cfg.tol, cfg.patience)


def median_prune(
    X: np.ndarray, factor: float = 4.0
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Drop samples far from the coordinate-wise median, then center on it.

    Keeps columns within factor * sqrt(d log d) of the median and shifts the
    kept samples by the median.  Returns (pruned samples, kept mask, shift);
    add the shift back to undo the centering.
    """
    X = np.asarray(X, dtype=float)
    d, n = X.shape
    if n < 1:
        raise ValueError("need at least one sample")
    med = np.median(X, axis=1)
    radius = factor * math.sqrt(d * math.log(max(d, 2)))
    dist = np.linalg.norm(X - med[:, None], axis=0)
    kept = dist <= radius
    if not kept.any():
        raise AllPruned(f"no sample within radius {radius:.3g} of the median")
    return X[:, kept] - med[:, None], kept, med


def truncate_topk(y: np.ndarray, k: int) -> np.ndarray:
    """Keep the k largest-magnitude entries of y, ties by ascending index."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    y = np.asarray(y, dtype=float)
    z = np.zeros_like(y)
    order = np.argsort(-np.abs(y), kind="stable")
    keep = order[: min(k, y.size)]
    z[keep] = y[keep]
    return z


def estimate_sparse_mean(X: np.ndarray, cfg: SparseMeanConfig) -> SparseMeanResult:
    """Full pipeline: optional median pruning, PGD, top-k truncated mean."""
    X = np.asarray(X, dtype=float)
    shift = np.zeros(X.shape[0])
    kept = None
    if cfg.prune:
        X, kept, shift = median_prune(X, cfg.prune_radius_factor)
    run = pgd_sparse_mean(X, cfg)
    mu_w = X @ run.w_best.w + shift
    mu_hat = truncate_topk(mu_w, cfg.k)
    order = np.argsort(-np.abs(mu_w), kind="stable")
    support = tuple(sorted(int(i) for i in order[: min(cfg.k, mu_w.size)]))
    return SparseMeanResult(
        mu_hat=mu_hat,
        w_final=run.w_best,
        objective_trace=run.trace,
        best_objective=run.best_objective,
        support=support,
        kept=kept,
    )
