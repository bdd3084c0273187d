"""Synthetic generators and corruption models: distributional and invariants."""

import numpy as np
import pytest

from robust_sparse.data import (
    CorruptedDataset,
    GroundTruth,
    corrupt_constant_bias,
    corrupt_linear_hiding,
    corrupt_tail_flipping,
    gen_sparse_mean_data,
    gen_spiked_data,
)
from robust_sparse.exceptions import BadDims, EpsTooLarge

# ---------------------------------------------------------------------------
# clean generators


def test_gen_mean_same_seed_identical():
    a = gen_sparse_mean_data(10, 3, 50, seed=7)
    b = gen_sparse_mean_data(10, 3, 50, seed=7)
    assert np.array_equal(a.X, b.X)
    assert a.truth.support == b.truth.support


def test_gen_mean_sample_mean_concentrates():
    d, n = 20, 4000
    data = gen_sparse_mean_data(d, 4, n, seed=0)
    err = np.linalg.norm(data.X.mean(axis=1) - data.truth.mu)
    assert err <= 5.0 * np.sqrt(d / n)


def test_gen_mean_unit_variance():
    data = gen_sparse_mean_data(10, 2, 5000, seed=1)
    var = data.X.var(axis=1)
    assert var.min() >= 0.8 and var.max() <= 1.2


def test_gen_mean_truth_sparse():
    data = gen_sparse_mean_data(15, 3, 10, seed=2)
    assert len(data.truth.support) == 3
    assert np.count_nonzero(data.truth.mu) == 3
    assert data.inlier_mask.all()
    assert data.eps_actual == 0.0


def test_gen_mean_explicit_mu_spec():
    mu = np.zeros(8)
    mu[[1, 6]] = [2.0, -1.0]
    data = gen_sparse_mean_data(8, 2, 20, seed=3, mu_spec=mu)
    assert data.truth.support == (1, 6)
    with pytest.raises(BadDims):
        gen_sparse_mean_data(8, 1, 20, seed=3, mu_spec=mu)  # 2 nonzeros > k


def test_gen_mean_rejects_bad_dims():
    with pytest.raises(BadDims):
        gen_sparse_mean_data(3, 5, 10, seed=0)
    with pytest.raises(BadDims):
        gen_sparse_mean_data(3, 1, 0, seed=0)


def test_gen_spiked_covariance_along_spike():
    data = gen_spiked_data(30, 4, 10000, rho=0.8, seed=4)
    v = data.truth.v
    proj = v @ data.X
    assert np.mean(proj**2) == pytest.approx(1.8, abs=0.1)


def test_gen_spiked_off_spike_variance_near_one():
    data = gen_spiked_data(30, 4, 10000, rho=1.0, seed=5)
    v = data.truth.v
    # a direction orthogonal to the spike
    u = np.zeros(30)
    u[np.argmin(np.abs(v))] = 1.0
    u = u - (u @ v) * v
    u /= np.linalg.norm(u)
    assert np.mean((u @ data.X) ** 2) == pytest.approx(1.0, abs=0.1)


def test_gen_spiked_unit_sparse_spike():
    data = gen_spiked_data(12, 3, 10, rho=0.5, seed=6)
    assert np.linalg.norm(data.truth.v) == pytest.approx(1.0, abs=1e-12)
    assert np.count_nonzero(data.truth.v) == 3


def test_gen_spiked_rejects_bad_rho():
    with pytest.raises(BadDims):
        gen_spiked_data(10, 2, 10, rho=0.0, seed=0)
    with pytest.raises(BadDims):
        gen_spiked_data(10, 2, 10, rho=1.5, seed=0)


def test_ground_truth_validation():
    with pytest.raises(ValueError):
        GroundTruth(kind="sparse_mean", support=(0,), mu=np.array([0.0, 1.0]))
    with pytest.raises(ValueError):
        GroundTruth(kind="spiked_pca", support=(0,), v=np.array([2.0, 0.0]), rho=0.5)
    with pytest.raises(ValueError):
        GroundTruth(kind="nonsense", support=())


# ---------------------------------------------------------------------------
# corruption models — shared invariants


@pytest.mark.parametrize(
    "corrupt",
    [
        corrupt_linear_hiding,
        corrupt_tail_flipping,
        corrupt_constant_bias,
    ],
)
def test_corruption_count_and_inlier_preservation(corrupt):
    data = gen_sparse_mean_data(12, 3, 100, seed=8)
    cor = corrupt(data, 0.13, seed=9)
    m = int(np.floor(0.13 * 100))
    assert (~cor.inlier_mask).sum() == m
    assert cor.eps_actual == m / 100
    # inlier columns bitwise equal
    assert np.array_equal(cor.X[:, cor.inlier_mask], data.X[:, cor.inlier_mask])


@pytest.mark.parametrize(
    "corrupt",
    [corrupt_linear_hiding, corrupt_tail_flipping, corrupt_constant_bias],
)
def test_corruption_eps_zero_unchanged(corrupt):
    data = gen_sparse_mean_data(6, 2, 30, seed=10)
    cor = corrupt(data, 0.0, seed=11)
    assert np.array_equal(cor.X, data.X)
    assert cor.inlier_mask.all()


@pytest.mark.parametrize(
    "corrupt",
    [corrupt_linear_hiding, corrupt_tail_flipping, corrupt_constant_bias],
)
def test_corruption_rejects_full_eps(corrupt):
    data = gen_sparse_mean_data(4, 1, 10, seed=12)
    with pytest.raises(EpsTooLarge):
        corrupt(data, 1.0, seed=0)


@pytest.mark.parametrize(
    "corrupt",
    [corrupt_linear_hiding, corrupt_tail_flipping, corrupt_constant_bias],
)
def test_corruption_deterministic(corrupt):
    data = gen_sparse_mean_data(8, 2, 60, seed=13)
    a = corrupt(data, 0.1, seed=14)
    b = corrupt(data, 0.1, seed=14)
    assert np.array_equal(a.X, b.X)
    assert np.array_equal(a.inlier_mask, b.inlier_mask)


# ---------------------------------------------------------------------------
# model-specific behavior


def test_linear_hiding_halves():
    data = gen_sparse_mean_data(40, 5, 4000, seed=15, mu_spec=0.0)
    cor = corrupt_linear_hiding(data, 0.2, seed=16)
    out = cor.X[:, ~cor.inlier_mask]
    m = out.shape[1]
    # first half is shifted by the indicator of a hidden size-k set S: the
    # outlier mean has k coordinates near 1 (averaged over both halves ~ 0.5)
    mean = out.mean(axis=1)
    big = np.sort(mean)[-5:]
    assert np.all(big > 0.3)
    # overall variance inflation from the N(0, 2I - I_S) half
    assert out.var() > 1.0


def test_linear_hiding_S_disjoint_from_truth():
    data = gen_sparse_mean_data(50, 5, 1000, seed=17)
    cor = corrupt_linear_hiding(data, 0.1, seed=18)
    out_mean = cor.X[:, ~cor.inlier_mask].mean(axis=1)
    # the hidden set S (coords with mean ~0.5 in the outliers) avoids the
    # truth support
    S = set(np.argsort(out_mean)[-5:].tolist())
    assert S.isdisjoint(set(data.truth.support))


def test_tail_flipping_selects_argmin_projections():
    data = gen_spiked_data(20, 3, 500, rho=1.0, seed=19)
    cor = corrupt_tail_flipping(data, 0.1, seed=20)
    v = data.truth.v
    proj = v @ data.X
    expected = set(np.argsort(proj, kind="stable")[:50].tolist())
    assert set(np.flatnonzero(~cor.inlier_mask).tolist()) == expected


def test_tail_flipping_reflects_projection():
    data = gen_spiked_data(15, 3, 300, rho=0.9, seed=21)
    cor = corrupt_tail_flipping(data, 0.15, seed=22)
    v = data.truth.v
    out = np.flatnonzero(~cor.inlier_mask)
    before = v @ data.X[:, out]
    after = v @ cor.X[:, out]
    assert np.allclose(after, -before, atol=1e-12)
    assert np.all(after >= 0.0)  # flipped from the negative tail
    # orthogonal component untouched
    P = np.eye(15) - np.outer(v, v)
    assert np.allclose(P @ cor.X[:, out], P @ data.X[:, out], atol=1e-12)


def test_constant_bias_exact_difference():
    data = gen_sparse_mean_data(7, 2, 50, seed=23)
    cor = corrupt_constant_bias(data, 0.2, seed=24)
    out = ~cor.inlier_mask
    diff = cor.X[:, out] - data.X[:, out]
    assert np.allclose(diff, 2.0, atol=1e-15)


def test_constant_bias_zero_bias_keeps_values():
    data = gen_sparse_mean_data(5, 1, 40, seed=25)
    cor = corrupt_constant_bias(data, 0.1, seed=26, bias=0.0)
    assert np.array_equal(cor.X, data.X)
