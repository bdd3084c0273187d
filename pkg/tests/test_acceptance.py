"""Acceptance gate: one test per primary criterion, pinned tolerances.

Each test prints a single PASS/FAIL line (visible with ``pytest -rA`` or
``-s``; the ``-v`` listing itself gives one line per criterion as well).
Thresholds and instance sizes are fixed; none are tuned at runtime.
"""

import itertools
import time

import numpy as np
import pytest

from robust_sparse import (
    CappedSimplex,
    EigenConfig,
    SparseMeanConfig,
    SparsePcaConfig,
    baseline_naive_prune,
    baseline_oracle,
    corrupt_constant_bias,
    corrupt_linear_hiding,
    corrupt_tail_flipping,
    estimate_sparse_mean,
    estimate_sparse_pca,
    fkk_norm,
    gen_sparse_mean_data,
    gen_spiked_data,
    objective_dense_pca,
    objective_sparse_mean,
    objective_sparse_pca,
    project_capped_simplex_array,
    sparse_error,
    stability_oracle,
    subgradient_sparse_mean,
    subgradient_sparse_pca,
    subspace_error,
    top_entries_norm,
    topk_vector_norm,
    truncate_topk,
    weighted_moments,
)
from robust_sparse.cli import main as cli_main

from test_norms import oracle_fkk, oracle_top_entries, oracle_topk_vector
from test_simplex import oracle_project_active_set


def report(name, ok, detail=""):
    line = f"[ACCEPTANCE] {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" ({detail})"
    print(line, flush=True)
    assert ok, line


def test_acceptance_norm_oracle_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(1000)
    worst = 0.0
    for _ in range(200):
        d = int(rng.integers(1, 7))
        k = int(rng.integers(1, 4))
        A = rng.standard_normal((d, d))
        v = rng.standard_normal(d)
        s = int(rng.integers(1, min(d * d, 9) + 1))
        worst = max(
            worst,
            abs(topk_vector_norm(v, k).value - oracle_topk_vector(v, k)),
            abs(top_entries_norm(A, s).value - oracle_top_entries(A, s)),
            abs(fkk_norm(A, k).value - oracle_fkk(A, k)),
        )
    elapsed = time.perf_counter() - start
    report(
        "norm-oracle-equivalence",
        worst <= 1e-12 and elapsed < 10.0,
        f"max dev {worst:.2e}, {elapsed:.1f}s",
    )


def test_acceptance_projection_correctness():
    start = time.perf_counter()
    rng = np.random.default_rng(1001)
    worst_oracle = worst_kkt = worst_idem = 0.0
    lipschitz_ok = True
    for _ in range(1000):
        n = int(rng.integers(1, 13))
        eps = float(rng.uniform(0.01, 0.45))
        dom = CappedSimplex(n, eps)
        x = rng.standard_normal(n) * float(rng.uniform(0.1, 10.0))
        w = project_capped_simplex_array(x, dom)
        worst_oracle = max(
            worst_oracle, float(np.max(np.abs(w - oracle_project_active_set(x, dom.cap))))
        )
        free = (w > 1e-12) & (w < dom.cap - 1e-12)
        if free.any():
            tau = float(np.mean(x[free] - w[free]))
            worst_kkt = max(
                worst_kkt,
                float(np.max(np.abs(w - np.clip(x - tau, 0.0, dom.cap)))),
            )
        w2 = project_capped_simplex_array(w, dom)
        worst_idem = max(worst_idem, float(np.max(np.abs(w - w2))))
        y = x + rng.standard_normal(n)
        py = project_capped_simplex_array(y, dom)
        if np.linalg.norm(w - py) > np.linalg.norm(x - y) + 1e-12:
            lipschitz_ok = False
    elapsed = time.perf_counter() - start
    report(
        "projection-correctness",
        worst_oracle <= 1e-9
        and worst_kkt <= 1e-10
        and worst_idem <= 1e-12
        and lipschitz_ok
        and elapsed < 30.0,
        f"oracle {worst_oracle:.2e}, kkt {worst_kkt:.2e}, {elapsed:.1f}s",
    )


def test_acceptance_mixing_identity():
    rng = np.random.default_rng(1002)
    worst = 0.0
    for _ in range(100):
        d, n = int(rng.integers(1, 8)), int(rng.integers(2, 25))
        X = rng.standard_normal((d, n)) * float(rng.uniform(0.5, 3.0))
        w1 = rng.dirichlet(np.ones(n))
        w2 = rng.dirichlet(np.ones(n))
        a = float(rng.uniform(0.0, 1.0))
        b = 1.0 - a
        m1, m2 = weighted_moments(X, w1), weighted_moments(X, w2)
        mixed = weighted_moments(X, a * w1 + b * w2)
        rhs = (
            a * m1.covariance
            + b * m2.covariance
            + a * b * np.outer(m1.mean - m2.mean, m1.mean - m2.mean)
        )
        worst = max(worst, float(np.max(np.abs(mixed.covariance - rhs))))
    report("mixing-identity", worst <= 1e-10, f"max dev {worst:.2e}")


def test_acceptance_gradient_checks():
    rng = np.random.default_rng(1003)
    h = 1e-6
    worst = 0.0
    for _ in range(50):
        d, n = int(rng.integers(1, 5)), int(rng.integers(2, 8))
        X = rng.standard_normal((d, n))
        w = rng.dirichlet(np.ones(n))
        Y = rng.standard_normal((d, d))
        Y /= np.linalg.norm(Y)

        def F_cov(wv):
            mom = weighted_moments(X, wv)
            return float(np.sum(Y * (mom.covariance - np.eye(d))))

        def F_mom(wv):
            mom = weighted_moments(X, wv)
            return float(np.sum(Y * (mom.second_moment - np.eye(d))))

        g_cov = subgradient_sparse_mean(X, w, Y)
        g_mom = subgradient_sparse_pca(X, w, Y)
        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            fd_cov = (F_cov(w + e) - F_cov(w - e)) / (2 * h)
            fd_mom = (F_mom(w + e) - F_mom(w - e)) / (2 * h)
            worst = max(worst, abs(g_cov[i] - fd_cov), abs(g_mom[i] - fd_mom))
    report("gradient-checks", worst <= 1e-5, f"max dev {worst:.2e}")


def test_acceptance_truncation_bound():
    rng = np.random.default_rng(1004)
    violations = 0
    for _ in range(1000):
        d = int(rng.integers(2, 25))
        k = int(rng.integers(1, min(d, 8) + 1))
        x = np.zeros(d)
        S = rng.choice(d, size=k, replace=False)
        x[S] = rng.standard_normal(k) * float(rng.uniform(0.2, 5.0))
        y = x + rng.standard_normal(d) * float(rng.uniform(0.001, 3.0))
        delta = topk_vector_norm(x - y, k).value
        z = truncate_topk(y, k)
        if np.linalg.norm(x - z) > np.sqrt(5.0) * delta:
            violations += 1
    report("truncation-sqrt5-bound", violations == 0, f"{violations} violations")


def test_acceptance_pca_convexity_and_subgradient():
    rng = np.random.default_rng(1005)
    eig = EigenConfig(max_iter=1000000, tol=1e-12)
    worst_jensen = worst_sub = 0.0
    for _ in range(500):
        d, n = int(rng.integers(2, 6)), int(rng.integers(3, 10))
        k = int(rng.integers(1, 3))
        X = rng.standard_normal((d, n))
        w1 = rng.dirichlet(np.ones(n))
        w2 = rng.dirichlet(np.ones(n))
        t = float(rng.uniform(0.0, 1.0))
        wm = t * w1 + (1 - t) * w2

        # sparse objective
        f1, Y1 = objective_sparse_pca(X, w1, k)
        f2, _ = objective_sparse_pca(X, w2, k)
        fm, _ = objective_sparse_pca(X, wm, k)
        worst_jensen = max(worst_jensen, fm - (t * f1 + (1 - t) * f2))
        g = subgradient_sparse_pca(X, w1, Y1)
        worst_sub = max(worst_sub, f1 + g @ (w2 - w1) - f2)

        # Ky Fan objective
        kf1, KY1 = objective_dense_pca(X, w1, eig)
        kf2, _ = objective_dense_pca(X, w2, eig)
        kfm, _ = objective_dense_pca(X, wm, eig)
        worst_jensen = max(worst_jensen, kfm - (t * kf1 + (1 - t) * kf2))
        gk = np.einsum("ij,ij->j", X, KY1 @ X)
        worst_sub = max(worst_sub, kf1 + gk @ (w2 - w1) - kf2)
    report(
        "pca-convexity-subgradient",
        worst_jensen <= 1e-10 and worst_sub <= 1e-10,
        f"jensen {worst_jensen:.2e}, subgrad {worst_sub:.2e}",
    )


def test_acceptance_descent_property():
    d, k, n, eps = 30, 3, 200, 0.1
    m = int(eps * n)  # planted outliers
    ok = True
    details = []
    for seed in range(10):
        rng = np.random.default_rng(2000 + seed)
        X = rng.standard_normal((d, n))
        direction = np.zeros(d)
        S = rng.choice(d, size=k, replace=False)
        direction[S] = rng.standard_normal(k)
        direction /= np.linalg.norm(direction)
        X[:, :m] += 10.0 * direction[:, None]  # outliers far along a sparse axis

        dom = CappedSimplex(n, eps)
        cap = dom.cap
        # w concentrated on the outliers: each at the cap, remainder uniform
        w = np.full(n, (1.0 - m * cap) / (n - m))
        w[:m] = cap
        assert dom.contains(w)
        w_star = np.zeros(n)
        w_star[m:] = 1.0 / (n - m)  # uniform on the inliers (exactly at cap)
        f_w, _ = objective_sparse_mean(X, w, k)
        for eta in (0.05, 0.1, 0.2):
            f_mix, _ = objective_sparse_mean(X, (1 - eta) * w + eta * w_star, k)
            if not f_mix < f_w:
                ok = False
                details.append(f"seed {seed} eta {eta}: {f_mix:.4f} !< {f_w:.4f}")
    report("descent-property", ok, "; ".join(details) or "strict decrease, 10 seeds")


def _mean_protocol(corrupt, n_trials=10):
    rows = []
    for t in range(n_trials):
        seq = np.random.SeedSequence(entropy=(0, 0, t))
        gs, cs, es = (int(s) for s in seq.generate_state(3))
        data = gen_sparse_mean_data(100, 5, 5000, gs)
        cor = corrupt(data, 0.1, cs)
        res = estimate_sparse_mean(cor.X, SparseMeanConfig(k=5, eps=0.1, seed=es))
        rows.append(
            (
                sparse_error(res.mu_hat, cor.truth, 5),
                sparse_error(baseline_oracle(cor), cor.truth, 5),
                sparse_error(baseline_naive_prune(cor), cor.truth, 5),
            )
        )
    return np.median(np.array(rows), axis=0)


def test_acceptance_sparse_mean_end_to_end():
    start = time.perf_counter()
    med_gd, med_oracle, med_naive = _mean_protocol(corrupt_linear_hiding)
    elapsed = time.perf_counter() - start
    report(
        "sparse-mean-end-to-end",
        med_gd <= 5.0 * med_oracle and med_gd <= 0.5 * med_naive and elapsed < 300.0,
        f"gd {med_gd:.4f}, oracle {med_oracle:.4f}, naive {med_naive:.4f}, "
        f"{elapsed:.0f}s",
    )


def test_acceptance_tail_flipping_floor():
    start = time.perf_counter()
    med_gd, med_oracle, _ = _mean_protocol(corrupt_tail_flipping)
    elapsed = time.perf_counter() - start
    report(
        "tail-flipping-floor",
        med_oracle > 0.0 and med_gd <= 3.0 * med_oracle and elapsed < 300.0,
        f"gd {med_gd:.4f}, oracle {med_oracle:.4f}, {elapsed:.0f}s",
    )


def test_acceptance_sparse_pca_end_to_end():
    start = time.perf_counter()
    errs = []
    for t in range(10):
        seq = np.random.SeedSequence(entropy=(0, 0, t))
        gs, cs, es = (int(s) for s in seq.generate_state(3))
        data = gen_spiked_data(200, 5, 10000, 1.0, gs)
        cor = corrupt_constant_bias(data, 0.05, cs)
        res = estimate_sparse_pca(
            cor.X, SparsePcaConfig(k=5, eps=0.05, n_iter=300, seed=es)
        )
        errs.append(subspace_error(res.u, cor.truth.v))
    med = float(np.median(errs))
    elapsed = time.perf_counter() - start
    report(
        "sparse-pca-end-to-end",
        med <= 0.3 and elapsed < 600.0,
        f"median {med:.4f}, {elapsed:.0f}s",
    )


def test_acceptance_stability_oracle_sanity():
    rng = np.random.default_rng(1006)
    G = rng.standard_normal((4, 12))
    reps = [stability_oracle(G, k=2, eps=e) for e in (1.0 / 12.0, 2.0 / 12.0, 3.0 / 12.0)]
    finite = all(
        np.isfinite([r.delta_mean, r.delta_cov, r.delta_pca]).all() for r in reps
    )
    nonneg = all(
        r.delta_mean >= 0 and r.delta_cov >= 0 and r.delta_pca >= 0 for r in reps
    )
    monotone = all(
        b.delta_mean >= a.delta_mean - 1e-12
        and b.delta_cov >= a.delta_cov - 1e-12
        and b.delta_pca >= a.delta_pca - 1e-12
        for a, b in zip(reps, reps[1:])
    )
    mu = np.array([1.0, -0.5, 2.0, 0.0])
    copies = np.tile(mu[:, None], (1, 12))
    exact_zero = stability_oracle(copies, k=2, eps=1.0 / 6.0, true_mean=mu).delta_mean == 0.0
    report(
        "stability-oracle-sanity",
        finite and nonneg and monotone and exact_zero,
        f"eps=1/6 deltas: mean {reps[1].delta_mean:.3f}, cov {reps[1].delta_cov:.3f}",
    )


def test_acceptance_cli_determinism(tmp_path):
    # the raw schema includes a wall-clock column, which cannot be bitwise
    # reproducible; determinism is asserted byte-for-byte on every other
    # column and on the entire aggregate file
    cfg = tmp_path / "bench.cfg"
    cfg.write_text(
        "task = mean\nnoise = constant-bias\nd = 10\nk = 2\neps = 0.1\n"
        "n_grid = 100, 200\ntrials = 4\nseed = 3\n"
        "estimators = oracle, naive-prune, ransac\n"
    )
    raws, aggs = [], []
    for name in ("run1", "run2"):
        out = tmp_path / name
        assert cli_main(["bench", "--config", str(cfg), "--out", str(out)]) == 0
        raw_lines = (out / "raw.csv").read_bytes().decode().splitlines()
        raws.append([",".join(l.split(",")[:-1]) for l in raw_lines])
        aggs.append((out / "aggregate.csv").read_bytes())
    report(
        "cli-determinism",
        raws[0] == raws[1] and aggs[0] == aggs[1],
        f"{len(raws[0])} raw lines, aggregate byte-identical",
    )
