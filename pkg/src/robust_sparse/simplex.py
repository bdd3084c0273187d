"""The capped probability simplex, exact projection onto it, and weighted moments.

The feasible set for all estimators in this library is

    { w : sum_i w_i = 1,  0 <= w_i <= 1 / ((1 - eps) n) },

the convex hull of uniform distributions on (1 - eps) n-subsets.  Projection
is computed exactly by a breakpoint scan over the piecewise-linear function
tau -> sum_i clamp(x_i - tau, 0, cap), with a bisection fallback guarding
pathological breakpoint duplicates.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatch, InfeasibleDomain, TooLarge
from .norms import fkk_norm, top_entries_norm, topk_vector_norm

__all__ = [
    "CappedSimplex",
    "WeightVector",
    "WeightedMoments",
    "StabilityReport",
    "project_capped_simplex",
    "project_capped_simplex_array",
    "weighted_moments",
    "mix_weights",
    "stability_oracle",
]

_SUM_TOL = 1e-10
_CAP_TOL = 1e-12


@dataclass(frozen=True)
class CappedSimplex:
    """Weight domain with n coordinates, each capped at 1 / ((1 - eps) n)."""

    n: int
    eps: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if not 0.0 < self.eps < 1.0:
            raise ValueError(f"eps must be in (0, 1), got {self.eps}")
        if self.n * self.cap < 1.0:
            raise InfeasibleDomain(f"n * cap = {self.n * self.cap} < 1")

    @property
    def cap(self) -> float:
        return 1.0 / ((1.0 - self.eps) * self.n)

    def uniform(self) -> "WeightVector":
        return WeightVector(np.full(self.n, 1.0 / self.n), self)

    def contains(self, w: np.ndarray, tol: float = _CAP_TOL) -> bool:
        w = np.asarray(w, dtype=float)
        return (
            w.shape == (self.n,)
            and abs(w.sum() - 1.0) <= _SUM_TOL
            and w.min() >= -tol
            and w.max() <= self.cap + tol
        )


@dataclass(frozen=True)
class WeightVector:
    """A feasible point of a :class:`CappedSimplex`."""

    w: np.ndarray
    domain: CappedSimplex

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        object.__setattr__(self, "w", w)
        if not self.domain.contains(w):
            raise ValueError("weights violate the capped simplex constraints")


@dataclass(frozen=True)
class WeightedMoments:
    """Weighted mean, second moment, and covariance of a sample matrix."""

    mean: np.ndarray
    second_moment: np.ndarray
    covariance: np.ndarray


@dataclass(frozen=True)
class StabilityReport:
    """Exact stability deltas maximized over the vertices of the weight polytope."""

    delta_mean: float
    delta_cov: float
    delta_pca: float
    vertices_checked: int


def project_capped_simplex_array(x: np.ndarray, domain: CappedSimplex) -> np.ndarray:
    """Euclidean projection onto the capped simplex, as a raw array.

    The projection is w_i = clamp(x_i - tau, 0, cap) for the unique tau with
    sum_i w_i = 1.  S(tau) = sum_i clamp(x_i - tau, 0, cap) is piecewise
    linear and nonincreasing with breakpoints at {x_i} and {x_i - cap}, so tau
    is found exactly by scanning the sorted breakpoints.
    """
    x = np.asarray(x, dtype=float).ravel()
    n = domain.n
    if x.size != n:
        raise DimensionMismatch(f"point has {x.size} coordinates, domain has {n}")
    cap = domain.cap

    tau = _scan_threshold(x, cap)
    w = np.clip(x - tau, 0.0, cap)
    if abs(w.sum() - 1.0) > _SUM_TOL:
        tau = _bisect_threshold(x, cap)
        w = np.clip(x - tau, 0.0, cap)
    return w


def _scan_threshold(x: np.ndarray, cap: float) -> float:
    n = x.size
    bps = np.concatenate([x - cap, x])
    # slope of S changes by -1 when tau passes x_i - cap and +1 when it passes x_i
    slope_delta = np.concatenate([np.ones(n), -np.ones(n)])
    order = np.argsort(bps, kind="stable")
    t = bps[order]
    active = np.cumsum(slope_delta[order])[:-1]

    s0 = n * cap  # S at the smallest breakpoint: every coordinate saturated
    drops = active * np.diff(t)
    s = s0 - np.concatenate([[0.0], np.cumsum(drops)])
    # first interval whose right endpoint has S <= 1
    below = s[1:] <= 1.0
    if not below.any():
        return float(t[-1])
    j = int(np.argmax(below))
    if active[j] <= 0:  # flat segment exactly at S == 1
        return float(t[j])
    return float(t[j] + (s[j] - 1.0) / active[j])


def _bisect_threshold(x: np.ndarray, cap: float, width: float = 1e-14) -> float:
    lo = float(x.min() - cap)
    hi = float(x.max())
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if np.clip(x - mid, 0.0, cap).sum() >= 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def project_capped_simplex(x: np.ndarray, domain: CappedSimplex) -> WeightVector:
    """Euclidean projection onto the capped simplex."""
    return WeightVector(project_capped_simplex_array(x, domain), domain)


def weighted_moments(X: np.ndarray, w: WeightVector | np.ndarray) -> WeightedMoments:
    """Weighted empirical mean, second moment, and covariance of columns of X."""
    X = np.asarray(X, dtype=float)
    wv = w.w if isinstance(w, WeightVector) else np.asarray(w, dtype=float)
    if X.ndim != 2 or X.shape[1] != wv.size:
        raise DimensionMismatch(
            f"samples have shape {X.shape}, weights have {wv.size} entries"
        )
    mean = X @ wv
    second = (X * wv) @ X.T
    second = 0.5 * (second + second.T)
    cov = second - np.outer(mean, mean)
    return WeightedMoments(mean=mean, second_moment=second, covariance=cov)


def mix_weights(w1: WeightVector, w2: WeightVector, eta: float) -> WeightVector:
    """Convex combination (1 - eta) w1 + eta w2; feasible by convexity."""
    if w1.domain != w2.domain:
        raise ValueError("weight vectors live on different domains")
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must be in [0, 1], got {eta}")
    return WeightVector((1.0 - eta) * w1.w + eta * w2.w, w1.domain)


def stability_oracle(
    G: np.ndarray,
    k: int,
    eps: float,
    true_mean: np.ndarray | None = None,
    spike: np.ndarray | None = None,
    rho: float = 0.0,
    stability_factor: float = 2.0,
    max_vertices: int = 10**6,
) -> StabilityReport:
    """Exact stability deltas of a small sample set by vertex enumeration.

    Maximizes, over all vertices of the capped simplex with corruption level
    ``stability_factor * eps`` (the stability definitions use twice the
    contamination level; the factor is exposed rather than hardcoded):

    * ``delta_mean``: restricted norm of the weighted-mean deviation,
    * ``delta_cov``: structured norm of the weighted-covariance deviation from I,
    * ``delta_pca``: top-2k^2 norm of the second-moment deviation from the
      spiked target (identity if no spike is given).

    Vertices suffice because all three quantities are convex in the weights.
    """
    G = np.asarray(G, dtype=float)
    d, n = G.shape
    if n > 20:
        raise TooLarge(f"vertex enumeration is test-scale only (n = {n} > 20)")
    removed_f = stability_factor * eps * n
    removed = round(removed_f)
    if abs(removed_f - removed) > 1e-9:
        raise ValueError(
            f"stability_factor * eps * n = {removed_f} must be an integer"
        )
    if removed >= n:
        raise ValueError("corruption level leaves no samples")
    kept = n - removed
    n_vertices = math.comb(n, kept)
    if n_vertices > max_vertices:
        raise TooLarge(f"{n_vertices} vertices exceed the {max_vertices} budget")

    mu = np.zeros(d) if true_mean is None else np.asarray(true_mean, dtype=float)
    target_m = np.eye(d)
    if spike is not None:
        v = np.asarray(spike, dtype=float)
        target_m = target_m + rho * np.outer(v, v)

    delta_mean = delta_cov = delta_pca = 0.0
    for subset in itertools.combinations(range(n), kept):
        w = np.zeros(n)
        w[list(subset)] = 1.0 / kept
        mom = weighted_moments(G, w)
        delta_mean = max(delta_mean, topk_vector_norm(mom.mean - mu, k).value)
        delta_cov = max(delta_cov, fkk_norm(mom.covariance - np.eye(d), k).value)
        delta_pca = max(
            delta_pca, top_entries_norm(mom.second_moment - target_m, 2 * k * k).value
        )
    return StabilityReport(delta_mean, delta_cov, delta_pca, n_vertices)
