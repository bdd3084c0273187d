"""Scikit-learn style estimator facades over the functional pipelines.

These accept samples in the usual (n_samples, n_features) layout and
transpose internally; the functional API in the rest of the package keeps
samples as columns.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .sparse_mean import SparseMeanConfig, estimate_sparse_mean
from .sparse_pca import SparsePcaConfig, estimate_sparse_pca

__all__ = ["RobustSparseMean", "RobustSparsePCA"]


class RobustSparseMean(BaseEstimator):
    """Outlier-robust k-sparse mean estimator.

    Fits sample weights by projected subgradient descent so the weighted
    covariance is close to the identity in a sparsity-restricted norm, then
    reports the top-k truncation of the weighted mean.

    Attributes after fit: ``location_`` (k-sparse mean estimate),
    ``support_`` (indices of the selected coordinates), ``weights_``
    (per-sample weights), ``objective_`` (best objective value reached).
    """

    def __init__(
        self,
        k: int = 1,
        eps: float = 0.1,
        n_iter: int = 2000,
        step_scale: float | None = None,
        prune: bool = False,
        seed: int = 0,
    ):
        self.k = k
        self.eps = eps
        self.n_iter = n_iter
        self.step_scale = step_scale
        self.prune = prune
        self.seed = seed

    def fit(self, X, y=None):
        X = check_array(X, dtype=float)
        cfg = SparseMeanConfig(
            k=self.k,
            eps=self.eps,
            n_iter=self.n_iter,
            step_scale=self.step_scale,
            prune=self.prune,
            seed=self.seed,
        )
        result = estimate_sparse_mean(X.T, cfg)
        self.location_ = result.mu_hat
        self.support_ = np.array(result.support, dtype=int)
        self.weights_ = result.w_final.w
        self.objective_ = result.best_objective
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        """Per-sample distance to the fitted location (an outlyingness score)."""
        check_is_fitted(self, "location_")
        X = check_array(X, dtype=float)
        return np.linalg.norm(X - self.location_[None, :], axis=1)


class RobustSparsePCA(BaseEstimator):
    """Outlier-robust sparse spike estimator for spiked covariance data.

    Attributes after fit: ``component_`` (unit spike direction),
    ``weights_``, ``objective_``.
    """

    def __init__(
        self,
        k: int = 1,
        eps: float = 0.1,
        n_iter: int = 2000,
        step_scale: float | None = None,
        seed: int = 0,
    ):
        self.k = k
        self.eps = eps
        self.n_iter = n_iter
        self.step_scale = step_scale
        self.seed = seed

    def fit(self, X, y=None):
        X = check_array(X, dtype=float)
        cfg = SparsePcaConfig(
            k=self.k,
            eps=self.eps,
            n_iter=self.n_iter,
            step_scale=self.step_scale,
            seed=self.seed,
        )
        result = estimate_sparse_pca(X.T, cfg)
        self.component_ = result.u
        self.weights_ = result.w_final.w
        self.objective_ = result.best_objective
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        """Project samples onto the fitted spike direction."""
        check_is_fitted(self, "component_")
        X = check_array(X, dtype=float)
        return X @ self.component_[:, None]

    def fit_transform(self, X, y=None):
        return self.fit(X).transform(X)
