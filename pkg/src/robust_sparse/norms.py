"""Sparsity-restricted norms with argmax supports, and power-iteration eigensolvers.

The three norms here are exact combinatorial maxima:

* ``topk_vector_norm``: largest l2 norm over any k coordinates of a vector.
* ``top_entries_norm``: l2 norm of the s largest-magnitude entries of a matrix.
* ``fkk_norm``: the structured variant where the k^2 entries must come from
  k rows with k entries in each row.

Each returns the achieving support so that callers can build the matching
subgradient certificate.  All top-k selections break ties by lowest index
(stable sort on descending magnitude), which makes downstream subgradient
choices deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionMismatch, NonConvergence

__all__ = [
    "VecTopK",
    "MatTopS",
    "MatFkk",
    "EigenPair",
    "EigenConfig",
    "topk_vector_norm",
    "top_entries_norm",
    "fkk_norm",
    "top_eigenpair_sym",
    "top2_eigenpairs_sym",
    "spectral_norm_sym",
]

_SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class VecTopK:
    """Value and argmax support of the restricted vector norm."""

    value: float
    support: tuple[int, ...]


@dataclass(frozen=True)
class MatTopS:
    """Value and argmax cells of the entrywise top-s matrix norm."""

    value: float
    support: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class MatFkk:
    """Value of the k-rows-by-k-entries norm with its row/column selection."""

    value: float
    rows: tuple[int, ...]
    cols: dict[int, tuple[int, ...]] = field(compare=False)

    def cells(self) -> list[tuple[int, int]]:
        return [(i, j) for i in self.rows for j in self.cols[i]]


@dataclass(frozen=True)
class EigenPair:
    eigenvalue: float
    eigenvector: np.ndarray
    residual: float


@dataclass(frozen=True)
class EigenConfig:
    max_iter: int = 5000
    tol: float = 1e-10
    seed: int = 0


def _stable_desc_order(values: np.ndarray) -> np.ndarray:
    """Indices sorting ``values`` descending, ties broken by lowest index."""
    return np.argsort(-values, kind="stable")


def topk_vector_norm(v: np.ndarray, k: int) -> VecTopK:
    """Maximum l2 norm of any k entries of ``v``, with the achieving support."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    v = np.asarray(v, dtype=float).ravel()
    k = min(k, v.size)
    order = _stable_desc_order(np.abs(v))
    support = np.sort(order[:k])
    value = float(np.linalg.norm(v[support]))
    return VecTopK(value=value, support=tuple(int(i) for i in support))


def top_entries_norm(A: np.ndarray, s: int) -> MatTopS:
    """l2 norm of the s largest-magnitude entries of ``A`` (row-major ties)."""
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    A = np.asarray(A, dtype=float)
    flat = A.ravel()
    s = min(s, flat.size)
    order = _stable_desc_order(np.abs(flat))
    chosen = np.sort(order[:s])
    value = float(np.linalg.norm(flat[chosen]))
    cells = [divmod(int(i), A.shape[1]) for i in chosen]
    return MatTopS(value=value, support=tuple(cells))


def fkk_norm(A: np.ndarray, k: int) -> MatFkk:
    """Structured top-k^2 norm: k entries from each of the best k rows.

    Exact by separability: per row the optimum takes the k largest-magnitude
    entries, and the best k rows are those with the largest restricted row
    norms.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    A = np.asarray(A, dtype=float)
    d_rows, d_cols = A.shape
    kc = min(k, d_cols)
    kr = min(k, d_rows)

    abs_sq = A * A
    # per-row sum of the k largest squared entries, ties by lowest column
    col_order = np.argsort(-np.abs(A), axis=1, kind="stable")
    top_cols = col_order[:, :kc]
    row_vals = np.take_along_axis(abs_sq, top_cols, axis=1).sum(axis=1)

    row_order = _stable_desc_order(row_vals)
    rows = np.sort(row_order[:kr])
    cols = {int(i): tuple(int(j) for j in np.sort(top_cols[i])) for i in rows}
    value = float(np.sqrt(row_vals[rows].sum()))
    return MatFkk(value=value, rows=tuple(int(i) for i in rows), cols=cols)


def _check_symmetric(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    if np.max(np.abs(A - A.T), initial=0.0) > _SYMMETRY_TOL:
        raise ValueError("matrix is not symmetric to 1e-10")
    return A


def _fix_sign(v: np.ndarray) -> np.ndarray:
    """Flip sign so the largest-magnitude coordinate is positive."""
    i = int(np.argmax(np.abs(v)))
    return -v if v[i] < 0 else v


def top_eigenpair_sym(
    A: np.ndarray,
    cfg: EigenConfig = EigenConfig(),
    v0: np.ndarray | None = None,
) -> EigenPair:
    """Magnitude-dominant eigenpair of a symmetric matrix via power iteration.

    Deterministic given ``cfg.seed``; ``v0`` overrides the random start (used
    for warm starts inside descent loops).  Raises :class:`NonConvergence` if
    the residual ``||Av - lambda v||`` stays above ``cfg.tol``.
    """
    A = _check_symmetric(A)
    d = A.shape[0]
    if v0 is not None:
        start = np.asarray(v0, dtype=float).copy()
    else:
        start = np.random.default_rng(cfg.seed).standard_normal(d)
    start /= np.linalg.norm(start)

    # shift bound on the spectral radius; iterating on A + sI (resp. sI - A)
    # converges to the algebraically largest (resp. smallest) eigenpair and
    # sidesteps the sign oscillation when lambda_max ~ -lambda_min
    s = float(np.abs(A).sum(axis=1).max())
    if s == 0.0:
        return EigenPair(0.0, _fix_sign(start), 0.0)

    best: EigenPair | None = None
    worst_residual = np.inf
    for sign in (1.0, -1.0):
        v = start.copy()
        residual = np.inf
        for _ in range(cfg.max_iter):
            Av = A @ v
            lam = float(v @ Av)
            residual = float(np.linalg.norm(Av - lam * v))
            if residual <= cfg.tol:
                pair = EigenPair(lam, _fix_sign(v), residual)
                if best is None or abs(pair.eigenvalue) > abs(best.eigenvalue):
                    best = pair
                break
            Bv = sign * Av + s * v
            nrm = np.linalg.norm(Bv)
            if nrm == 0.0:
                # v is an exact eigenvector of A with eigenvalue -sign * s
                pair = EigenPair(-sign * s, _fix_sign(v), 0.0)
                if best is None or abs(pair.eigenvalue) > abs(best.eigenvalue):
                    best = pair
                break
            v = Bv / nrm
        worst_residual = min(worst_residual, residual)
    if best is None:
        raise NonConvergence(
            f"power iteration residual {worst_residual:.3e} > tol {cfg.tol:.1e} "
            f"after {cfg.max_iter} iterations"
        )
    return best


def top2_eigenpairs_sym(
    A: np.ndarray,
    cfg: EigenConfig = EigenConfig(),
    v0: np.ndarray | None = None,
    v1: np.ndarray | None = None,
) -> tuple[EigenPair, EigenPair]:
    """Two largest-magnitude eigenpairs via deflation ``A - lam1 u1 u1^T``."""
    first = top_eigenpair_sym(A, cfg, v0=v0)
    u1 = first.eigenvector
    if abs(first.eigenvalue) < 1e-12:
        # degenerate: report a zero second pair on any direction orthogonal to u1
        u2 = _unit_orthogonal(u1)
        return first, EigenPair(0.0, u2, 0.0)
    deflated = A - first.eigenvalue * np.outer(u1, u1)
    deflated = 0.5 * (deflated + deflated.T)
    if v1 is None:
        # an independent start is required: when the dominant eigenvalue is
        # repeated, u1 is the projection of the first start onto its
        # eigenspace, leaving the surviving copy exactly orthogonal to that
        # start; reusing it would make the deflated solve blind to it
        v1 = np.random.default_rng(cfg.seed + 1).standard_normal(u1.size)
    second = top_eigenpair_sym(deflated, cfg, v0=v1)
    return first, second


def _unit_orthogonal(u: np.ndarray) -> np.ndarray:
    d = u.size
    if d == 1:
        return u.copy()
    basis = np.zeros(d)
    basis[int(np.argmin(np.abs(u)))] = 1.0
    w = basis - (basis @ u) * u
    return _fix_sign(w / np.linalg.norm(w))


def spectral_norm_sym(
    A: np.ndarray,
    cfg: EigenConfig = EigenConfig(),
    v0: np.ndarray | None = None,
) -> tuple[float, EigenPair]:
    """Spectral norm of a symmetric matrix and the achieving eigenpair."""
    pair = top_eigenpair_sym(A, cfg, v0=v0)
    return abs(pair.eigenvalue), pair
