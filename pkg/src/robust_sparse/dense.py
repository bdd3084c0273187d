"""Non-sparse robust mean and PCA variants sharing the PGD engine.

The mean objective is the spectral norm of the weighted covariance deviation
(nonconvex); the PCA objective is the Ky Fan 2-norm (sum of the two largest
singular values) of the second-moment deviation, which is convex in the
weights.  Both use the power-iteration eigensolvers with warm starts across
descent iterations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .norms import EigenConfig, spectral_norm_sym, top2_eigenpairs_sym
from .simplex import CappedSimplex, WeightVector, weighted_moments
from .solver import PgdResult, default_step_scale, pgd_minimize

__all__ = [
    "DenseConfig",
    "objective_dense_mean",
    "objective_dense_pca",
    "estimate_dense_mean",
    "estimate_dense_pca",
]


@dataclass(frozen=True)
class DenseConfig:
    eps: float
    n_iter: int = 2000
    step_scale: float | None = None
    tol: float = 1e-8
    patience: int = 200
    seed: int = 0
    eig_tol: float = 1e-8
    eig_max_iter: int = 20000

    def __post_init__(self):
        if not 0.0 < self.eps < 1.0 / 3.0:
            raise ValueError(f"eps must be in (0, 1/3), got {self.eps}")
        if self.n_iter < 1:
            raise ValueError(f"n_iter must be >= 1, got {self.n_iter}")

    def eig(self) -> EigenConfig:
        return EigenConfig(max_iter=self.eig_max_iter, tol=self.eig_tol, seed=self.seed)


def objective_dense_mean(
    X: np.ndarray,
    w: WeightVector | np.ndarray,
    eig_cfg: EigenConfig = EigenConfig(),
) -> tuple[float, np.ndarray]:
    """Spectral norm of (cov_w - I) and the subgradient certificate sign(l) u u^T."""
    mom = weighted_moments(X, w)
    A = mom.covariance - np.eye(X.shape[0])
    value, pair = spectral_norm_sym(A, eig_cfg)
    sign = 1.0 if pair.eigenvalue >= 0 else -1.0
    Y = sign * np.outer(pair.eigenvector, pair.eigenvector)
    return value, Y


def objective_dense_pca(
    X: np.ndarray,
    w: WeightVector | np.ndarray,
    eig_cfg: EigenConfig = EigenConfig(),
) -> tuple[float, np.ndarray]:
    """Ky Fan 2-norm of (M_w - I) and its exact subgradient.

    Y = s1 u1 u1^T + s2 u2 u2^T with s_i the eigenvalue signs; note
    ||Y||_F = sqrt(2), the natural scale for a subgradient of a sum of two
    singular values (no unit normalization is applied).
    """
    mom = weighted_moments(X, w)
    A = mom.second_moment - np.eye(X.shape[0])
    p1, p2 = top2_eigenpairs_sym(A, eig_cfg)
    value = abs(p1.eigenvalue) + abs(p2.eigenvalue)
    Y = np.sign(p1.eigenvalue) * np.outer(p1.eigenvector, p1.eigenvector)
    if p2.eigenvalue != 0.0:
        Y = Y + np.sign(p2.eigenvalue) * np.outer(p2.eigenvector, p2.eigenvector)
    return value, Y


def _mean_oracle(X: np.ndarray, cfg: DenseConfig):
    d = X.shape[0]
    eye = np.eye(d)
    eig_cfg = cfg.eig()
    warm = {"v": None}

    def oracle(w: np.ndarray) -> tuple[float, np.ndarray]:
        mu = X @ w
        A = (X * w) @ X.T
        A = 0.5 * (A + A.T) - np.outer(mu, mu) - eye
        A = 0.5 * (A + A.T)
        value, pair = spectral_norm_sym(A, eig_cfg, v0=warm["v"])
        warm["v"] = pair.eigenvector
        u = pair.eigenvector
        s = 1.0 if pair.eigenvalue >= 0 else -1.0
        t = X.T @ u
        # diag(X^T Y X) - X^T (Y + Y^T) X w with Y = s u u^T
        g = s * t * t - 2.0 * s * float(u @ mu) * t
        return value, g

    return oracle


def _pca_oracle(X: np.ndarray, cfg: DenseConfig):
    d = X.shape[0]
    eye = np.eye(d)
    eig_cfg = cfg.eig()
    warm = {"v1": None, "v2": None}

    def oracle(w: np.ndarray) -> tuple[float, np.ndarray]:
        A = (X * w) @ X.T
        A = 0.5 * (A + A.T) - eye
        p1, p2 = top2_eigenpairs_sym(A, eig_cfg, v0=warm["v1"], v1=warm["v2"])
        warm["v1"], warm["v2"] = p1.eigenvector, p2.eigenvector
        value = abs(p1.eigenvalue) + abs(p2.eigenvalue)
        g = np.zeros_like(w)
        for pair in (p1, p2):
            if pair.eigenvalue == 0.0:
                continue
            t = X.T @ pair.eigenvector
            g += np.sign(pair.eigenvalue) * t * t
        return value, g

    return oracle


def estimate_dense_mean(
    X: np.ndarray, cfg: DenseConfig
) -> tuple[np.ndarray, WeightVector, list[tuple[int, float]]]:
    """PGD on the spectral objective; returns the weighted mean at the best iterate."""
    X = np.asarray(X, dtype=float)
    domain = CappedSimplex(X.shape[1], cfg.eps)
    oracle = _mean_oracle(X, cfg)
    xi = (
        cfg.step_scale
        if cfg.step_scale is not None
        else default_step_scale(oracle, domain)
    )
    run = pgd_minimize(oracle, domain, cfg.n_iter, xi, cfg.tol, cfg.patience)
    return X @ run.w_best.w, run.w_best, run.trace


def estimate_dense_pca(
    X: np.ndarray, cfg: DenseConfig
) -> tuple[np.ndarray, WeightVector, list[tuple[int, float]]]:
    """PGD on the Ky Fan objective, then the dominant eigenvector of M_w - I."""
    X = np.asarray(X, dtype=float)
    domain = CappedSimplex(X.shape[1], cfg.eps)
    oracle = _pca_oracle(X, cfg)
    xi = (
        cfg.step_scale
        if cfg.step_scale is not None
        else default_step_scale(oracle, domain)
    )
    run = pgd_minimize(oracle, domain, cfg.n_iter, xi, cfg.tol, cfg.patience)
    mom = weighted_moments(X, run.w_best)
    A = mom.second_moment - np.eye(X.shape[0])
    _, pair = spectral_norm_sym(A, cfg.eig())
    return pair.eigenvector, run.w_best, run.trace
