"""Seeded synthetic data generation and adversarial corruption models.

Clean models: identity-covariance Gaussians shifted by a k-sparse mean, and
the spiked covariance model I + rho v v^T with a k-sparse unit spike.  The
three corruption models replace exactly floor(eps * n) seeded-random columns
(or the extreme columns, for tail flipping) and leave every other column
bitwise untouched.  Everything is a pure function of (params, seed).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .exceptions import BadDims, EpsTooLarge

__all__ = [
    "GroundTruth",
    "CorruptedDataset",
    "gen_sparse_mean_data",
    "gen_spiked_data",
    "corrupt_linear_hiding",
    "corrupt_tail_flipping",
    "corrupt_constant_bias",
]


@dataclass(frozen=True)
class GroundTruth:
    """The clean model parameters an estimator is scored against."""

    kind: str  # "sparse_mean" or "spiked_pca"
    support: tuple[int, ...]
    mu: np.ndarray | None = None  # k-sparse mean (sparse_mean kind)
    v: np.ndarray | None = None  # k-sparse unit spike (spiked_pca kind)
    rho: float = 0.0

    def __post_init__(self):
        if self.kind not in ("sparse_mean", "spiked_pca"):
            raise ValueError(f"unknown truth kind {self.kind!r}")
        if self.kind == "sparse_mean":
            if self.mu is None:
                raise ValueError("sparse_mean truth requires mu")
            off = np.delete(self.mu, list(self.support))
            if off.size and np.abs(off).max() != 0.0:
                raise ValueError("mu has mass outside the declared support")
        else:
            if self.v is None:
                raise ValueError("spiked_pca truth requires v")
            if abs(np.linalg.norm(self.v) - 1.0) > 1e-10:
                raise ValueError("spike v must be a unit vector")
            off = np.delete(self.v, list(self.support))
            if off.size and np.abs(off).max() != 0.0:
                raise ValueError("v has mass outside the declared support")
            if not 0.0 < self.rho <= 1.0:
                raise ValueError(f"rho must be in (0, 1], got {self.rho}")


@dataclass(frozen=True)
class CorruptedDataset:
    """Samples as columns of X plus the bookkeeping needed to score estimators."""

    X: np.ndarray
    inlier_mask: np.ndarray
    eps_actual: float
    truth: GroundTruth
    seed: int

    @property
    def d(self) -> int:
        return self.X.shape[0]

    @property
    def n(self) -> int:
        return self.X.shape[1]

    def __post_init__(self):
        if self.X.ndim != 2 or self.inlier_mask.shape != (self.X.shape[1],):
            raise BadDims("inlier mask must have one entry per column of X")


def _check_dims(d: int, k: int, n: int) -> None:
    if d < 1 or n < 1 or k < 1 or k > d:
        raise BadDims(f"need 1 <= k <= d and n >= 1, got d={d}, k={k}, n={n}")


def _seeded_support(rng: np.random.Generator, d: int, k: int) -> tuple[int, ...]:
    return tuple(sorted(int(i) for i in rng.choice(d, size=k, replace=False)))


def gen_sparse_mean_data(
    d: int, k: int, n: int, seed: int, mu_spec: np.ndarray | float = 1.0
) -> CorruptedDataset:
    """Clean N(mu, I) samples with a k-sparse mean.

    ``mu_spec`` is either a full d-vector (its nonzeros define the support,
    which must have at most k entries) or a scalar placed on a seeded random
    k-support (default 1).
    """
    _check_dims(d, k, n)
    rng = np.random.default_rng(seed)
    if np.isscalar(mu_spec):
        support = _seeded_support(rng, d, k)
        mu = np.zeros(d)
        mu[list(support)] = float(mu_spec)
    else:
        mu = np.asarray(mu_spec, dtype=float)
        if mu.shape != (d,):
            raise BadDims(f"mu_spec must have {d} entries, got shape {mu.shape}")
        support = tuple(int(i) for i in np.flatnonzero(mu))
        if len(support) > k:
            raise BadDims(f"mu_spec has {len(support)} nonzeros, more than k={k}")
    X = rng.standard_normal((d, n)) + mu[:, None]
    truth = GroundTruth(kind="sparse_mean", support=support, mu=mu)
    return CorruptedDataset(
        X=X, inlier_mask=np.ones(n, dtype=bool), eps_actual=0.0, truth=truth, seed=seed
    )


def gen_spiked_data(d: int, k: int, n: int, rho: float, seed: int) -> CorruptedDataset:
    """Clean centered samples with covariance I + rho v v^T, k-sparse unit v.

    Each sample is g + sqrt(rho) z v with g ~ N(0, I) and z ~ N(0, 1)
    independent, which realizes the spiked covariance exactly.
    """
    _check_dims(d, k, n)
    if not 0.0 < rho <= 1.0:
        raise BadDims(f"rho must be in (0, 1], got {rho}")
    rng = np.random.default_rng(seed)
    support = _seeded_support(rng, d, k)
    v = np.zeros(d)
    v[list(support)] = rng.standard_normal(k)
    if np.linalg.norm(v) == 0.0:  # astronomically unlikely; keep determinism
        v[support[0]] = 1.0
    v /= np.linalg.norm(v)
    G = rng.standard_normal((d, n))
    z = rng.standard_normal(n)
    X = G + np.sqrt(rho) * np.outer(v, z)
    truth = GroundTruth(kind="spiked_pca", support=support, v=v, rho=rho)
    return CorruptedDataset(
        X=X, inlier_mask=np.ones(n, dtype=bool), eps_actual=0.0, truth=truth, seed=seed
    )


def _outlier_count(n: int, eps: float) -> int:
    if eps < 0.0:
        raise EpsTooLarge(f"eps must be nonnegative, got {eps}")
    m = int(np.floor(eps * n))
    if m >= n:
        raise EpsTooLarge(f"eps={eps} would corrupt all {n} samples")
    return m


def corrupt_linear_hiding(
    data: CorruptedDataset, eps: float, seed: int
) -> CorruptedDataset:
    """Replace floor(eps n) random columns by a mean/variance-cancelling mixture.

    Half the outliers are drawn from N(1_S, I) and the other half from
    N(0, 2I - I_S), where S is a seeded size-k set chosen disjoint from the
    truth support whenever possible; the mixture hides the planted shift from
    moment-based detectors.
    """
    m = _outlier_count(data.n, eps)
    if m == 0:
        return data
    d, n = data.d, data.n
    k = len(data.truth.support)
    rng = np.random.default_rng(seed)
    idx = rng.choice(n, size=m, replace=False)
    off_support = np.setdiff1d(np.arange(d), np.array(data.truth.support, dtype=int))
    pool = off_support if off_support.size >= k else np.arange(d)
    S = rng.choice(pool, size=k, replace=False)
    ind_S = np.zeros(d)
    ind_S[S] = 1.0

    X = data.X.copy()
    m1 = (m + 1) // 2  # ceil(m / 2) from N(1_S, I)
    first = rng.standard_normal((d, m1)) + ind_S[:, None]
    scale = np.sqrt(2.0 - ind_S)  # diag(2I - I_S)^{1/2}
    second = scale[:, None] * rng.standard_normal((d, m - m1))
    X[:, idx[:m1]] = first
    X[:, idx[m1:]] = second
    mask = data.inlier_mask.copy()
    mask[idx] = False
    return replace(
        data, X=X, inlier_mask=mask, eps_actual=m / n, seed=seed
    )


def corrupt_tail_flipping(
    data: CorruptedDataset, eps: float, seed: int
) -> CorruptedDataset:
    """Reflect the v-component of the floor(eps n) points farthest along -v.

    Uses the truth spike for PCA data; for mean data a seeded k-sparse unit
    direction is drawn.  Each selected X_i becomes X_i - 2 (v^T X_i) v, so the
    orthogonal component is untouched and the projection flips sign.
    """
    m = _outlier_count(data.n, eps)
    if m == 0:
        return data
    rng = np.random.default_rng(seed)
    if data.truth.kind == "spiked_pca":
        v = data.truth.v
    else:
        d = data.d
        k = max(len(data.truth.support), 1)
        support = rng.choice(d, size=k, replace=False)
        v = np.zeros(d)
        v[support] = rng.standard_normal(k)
        v /= np.linalg.norm(v)
    proj = v @ data.X
    idx = np.argsort(proj, kind="stable")[:m]
    X = data.X.copy()
    X[:, idx] -= 2.0 * np.outer(v, proj[idx])
    mask = data.inlier_mask.copy()
    mask[idx] = False
    return replace(data, X=X, inlier_mask=mask, eps_actual=m / data.n, seed=seed)


def corrupt_constant_bias(
    data: CorruptedDataset, eps: float, seed: int, bias: float = 2.0
) -> CorruptedDataset:
    """Add a constant to every coordinate of floor(eps n) random columns."""
    m = _outlier_count(data.n, eps)
    if m == 0:
        return data
    rng = np.random.default_rng(seed)
    idx = rng.choice(data.n, size=m, replace=False)
    X = data.X.copy()
    X[:, idx] += bias
    mask = data.inlier_mask.copy()
    mask[idx] = False
    return replace(data, X=X, inlier_mask=mask, eps_actual=m / data.n, seed=seed)
