"""Reference estimators the benchmark compares against, plus the error metric."""

from __future__ import annotations

import numpy as np

from .data import CorruptedDataset, GroundTruth
from .exceptions import AllPruned, KindMismatch
from .sparse_mean import truncate_topk

__all__ = [
    "baseline_oracle",
    "baseline_naive_prune",
    "baseline_ransac",
    "sparse_error",
]


def baseline_oracle(data: CorruptedDataset) -> np.ndarray:
    """Mean of the true inliers; a lower bound no blind estimator can beat."""
    if not data.inlier_mask.any():
        raise AllPruned("no inliers to average")
    return data.X[:, data.inlier_mask].mean(axis=1)


def baseline_naive_prune(data: CorruptedDataset, radius_factor: float = 4.0) -> np.ndarray:
    """Drop samples farther than radius_factor * sqrt(d) from the coordinate-wise
    median; return the mean of the rest."""
    med = np.median(data.X, axis=1)
    radius = radius_factor * np.sqrt(data.d)
    dist = np.linalg.norm(data.X - med[:, None], axis=0)
    kept = dist <= radius
    if not kept.any():
        raise AllPruned(f"no sample within radius {radius:.3g} of the median")
    return data.X[:, kept].mean(axis=1)


def baseline_ransac(
    data: CorruptedDataset, rounds: int = 50, seed: int = 0, ball_factor: float = 2.0
) -> np.ndarray:
    """Best-of-rounds half-sample mean, scored by how many points land within
    a ball of radius ball_factor * sqrt(d) of the candidate."""
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    rng = np.random.default_rng(seed)
    n = data.n
    half = max(n // 2, 1)
    radius = ball_factor * np.sqrt(data.d)
    best_mu = data.X.mean(axis=1)
    best_count = -1
    for _ in range(rounds):
        idx = rng.choice(n, size=half, replace=False)
        mu = data.X[:, idx].mean(axis=1)
        count = int((np.linalg.norm(data.X - mu[:, None], axis=0) <= radius).sum())
        if count > best_count:
            best_count = count
            best_mu = mu
    return best_mu


def sparse_error(estimate: np.ndarray, truth: GroundTruth, k: int) -> float:
    """l2 distance from the top-k truncation of the estimate to the true mean."""
    if truth.kind != "sparse_mean":
        raise KindMismatch(f"mean-type truth required, got {truth.kind!r}")
    estimate = np.asarray(estimate, dtype=float)
    if estimate.shape != truth.mu.shape:
        raise KindMismatch(
            f"estimate shape {estimate.shape} != truth shape {truth.mu.shape}"
        )
    return float(np.linalg.norm(truncate_topk(estimate, k) - truth.mu))
