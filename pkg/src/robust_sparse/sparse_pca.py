"""Robust sparse PCA in the spiked covariance model.

Minimizes the norm of the 2k^2 largest-magnitude entries of the weighted
second moment's deviation from the identity (convex in the weights), then
extracts the spike direction as the dominant eigenvector of the symmetrized
top-k^2 restriction of that deviation at the best iterate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionMismatch, NonUnit
from .norms import EigenConfig, MatTopS, top_eigenpair_sym, top_entries_norm
from .simplex import CappedSimplex, WeightVector, weighted_moments
from .solver import PgdResult, default_step_scale, pgd_minimize

__all__ = [
    "SparsePcaConfig",
    "SparsePcaResult",
    "objective_sparse_pca",
    "subgradient_sparse_pca",
    "pgd_sparse_pca",
    "extract_spike",
    "estimate_sparse_pca",
    "subspace_error",
]


@dataclass(frozen=True)
class SparsePcaConfig:
    k: int
    eps: float
    n_iter: int = 2000
    step_scale: float | None = None
    tol: float = 1e-8
    patience: int = 200
    seed: int = 0
    eps_guard: float = 1.0 / 3.0  # theory may require smaller eps; guard only

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not 0.0 < self.eps < self.eps_guard:
            raise ValueError(f"eps must be in (0, {self.eps_guard}), got {self.eps}")
        if self.n_iter < 1:
            raise ValueError(f"n_iter must be >= 1, got {self.n_iter}")
        if self.step_scale is not None and self.step_scale <= 0.0:
            raise ValueError("step_scale must be positive")


@dataclass(frozen=True)
class SparsePcaResult:
    u: np.ndarray
    w_final: WeightVector
    objective_trace: list[tuple[int, float]] = field(repr=False)
    best_objective: float = 0.0
    extraction_support: tuple[tuple[int, int], ...] = ()


def _certificate(A: np.ndarray, sel: MatTopS) -> np.ndarray:
    Y = np.zeros_like(A)
    if sel.value == 0.0:
        return Y
    rows = [c[0] for c in sel.support]
    cols = [c[1] for c in sel.support]
    Y[rows, cols] = A[rows, cols]
    return Y / sel.value


def objective_sparse_pca(
    X: np.ndarray, w: WeightVector | np.ndarray, k: int
) -> tuple[float, np.ndarray]:
    """Objective value at w and the active unit-Frobenius certificate Y.

    f is the l2 norm of the 2k^2 largest-magnitude entries of (M_w - I) and
    Y satisfies f = Y . (M_w - I) exactly (Y = 0 when f = 0).
    """
    mom = weighted_moments(X, w)
    A = mom.second_moment - np.eye(X.shape[0])
    sel = top_entries_norm(A, 2 * k * k)
    return sel.value, _certificate(A, sel)


def subgradient_sparse_pca(
    X: np.ndarray, w: WeightVector | np.ndarray, Y: np.ndarray
) -> np.ndarray:
    """Gradient in w of the linearization w -> Y . (M_w - I): diag(X^T Y X)."""
    X = np.asarray(X, dtype=float)
    wv = w.w if isinstance(w, WeightVector) else np.asarray(w, dtype=float)
    if X.shape[1] != wv.size or Y.shape != (X.shape[0], X.shape[0]):
        raise DimensionMismatch("inconsistent shapes for subgradient")
    return np.einsum("ij,ij->j", X, Y @ X)


def _pgd_oracle(X: np.ndarray, k: int):
    d = X.shape[0]
    eye = np.eye(d)
    s = 2 * k * k

    def oracle(w: np.ndarray) -> tuple[float, np.ndarray]:
        A = (X * w) @ X.T
        A = 0.5 * (A + A.T) - eye
        sel = top_entries_norm(A, s)
        if sel.value == 0.0:
            return 0.0, np.zeros_like(w)
        rows = np.fromiter((c[0] for c in sel.support), dtype=int)
        cols = np.fromiter((c[1] for c in sel.support), dtype=int)
        vals = A[rows, cols] / sel.value
        g = np.einsum("q,qn,qn->n", vals, X[rows], X[cols])
        return sel.value, g

    return oracle


def pgd_sparse_pca(X: np.ndarray, cfg: SparsePcaConfig) -> PgdResult:
    """Run projected subgradient descent on the (convex) sparse-PCA objective."""
    X = np.asarray(X, dtype=float)
    domain = CappedSimplex(X.shape[1], cfg.eps)
    oracle = _pgd_oracle(X, cfg.k)
    xi = (
        cfg.step_scale
        if cfg.step_scale is not None
        else default_step_scale(oracle, domain)
    )
    return pgd_minimize(oracle, domain, cfg.n_iter, xi, cfg.tol, cfg.patience)


def extract_spike(
    A: np.ndarray, k: int, eig_cfg: EigenConfig = EigenConfig()
) -> tuple[np.ndarray, tuple[tuple[int, int], ...]]:
    """Spike direction from the top-k^2 restriction of A.

    Restricts A to its k^2 largest-magnitude entries Q, symmetrizes, and
    returns the magnitude-dominant eigenvector (sign-normalized) with Q.
    """
    A = np.asarray(A, dtype=float)
    sel = top_entries_norm(A, k * k)
    if sel.value == 0.0:
        raise ValueError("matrix restriction is zero; no spike to extract")
    AQ = np.zeros_like(A)
    rows = [c[0] for c in sel.support]
    cols = [c[1] for c in sel.support]
    AQ[rows, cols] = A[rows, cols]
    sym = 0.5 * (AQ + AQ.T)
    # the dominant eigenvector lives on the touched indices; solving on that
    # submatrix keeps the output exactly supported there
    idx = np.array(sorted(set(rows) | set(cols)), dtype=int)
    pair = top_eigenpair_sym(sym[np.ix_(idx, idx)], eig_cfg)
    u = np.zeros(A.shape[0])
    u[idx] = pair.eigenvector
    return u, sel.support


def estimate_sparse_pca(X: np.ndarray, cfg: SparsePcaConfig) -> SparsePcaResult:
    """Full pipeline: PGD on the convex objective, then spike extraction."""
    X = np.asarray(X, dtype=float)
    run = pgd_sparse_pca(X, cfg)
    mom = weighted_moments(X, run.w_best)
    A = mom.second_moment - np.eye(X.shape[0])
    u, support = extract_spike(A, cfg.k, EigenConfig(seed=cfg.seed))
    return SparsePcaResult(
        u=u,
        w_final=run.w_best,
        objective_trace=run.trace,
        best_objective=run.best_objective,
        extraction_support=support,
    )


def subspace_error(u: np.ndarray, v: np.ndarray) -> float:
    """Frobenius distance between the rank-one projectors of two unit vectors."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    for name, vec in (("u", u), ("v", v)):
        if abs(np.linalg.norm(vec) - 1.0) > 1e-8:
            raise NonUnit(f"{name} is not a unit vector")
    c = float(u @ v)
    return float(np.sqrt(max(0.0, 2.0 - 2.0 * c * c)))
