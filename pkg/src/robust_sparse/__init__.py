"""Outlier-robust sparse mean estimation and sparse PCA.

Weights over the samples are optimized by projected subgradient descent on a
capped probability simplex so that weighted second moments look Gaussian in
sparsity-restricted norms; the surviving weighted statistics are then robust
to adversarial contamination.
"""

from .baselines import (
    baseline_naive_prune,
    baseline_oracle,
    baseline_ransac,
    sparse_error,
)
from .data import (
    CorruptedDataset,
    GroundTruth,
    corrupt_constant_bias,
    corrupt_linear_hiding,
    corrupt_tail_flipping,
    gen_sparse_mean_data,
    gen_spiked_data,
)
from .dense import (
    DenseConfig,
    estimate_dense_mean,
    estimate_dense_pca,
    objective_dense_mean,
    objective_dense_pca,
)
from .estimators import RobustSparseMean, RobustSparsePCA
from .exceptions import (
    AllPruned,
    BadDims,
    ConfigError,
    DimensionMismatch,
    EpsTooLarge,
    InfeasibleDomain,
    KindMismatch,
    NonConvergence,
    NonUnit,
    RobustSparseError,
    TooLarge,
)
from .norms import (
    EigenConfig,
    EigenPair,
    fkk_norm,
    spectral_norm_sym,
    top2_eigenpairs_sym,
    top_eigenpair_sym,
    top_entries_norm,
    topk_vector_norm,
)
from .simplex import (
    CappedSimplex,
    StabilityReport,
    WeightVector,
    WeightedMoments,
    mix_weights,
    project_capped_simplex,
    project_capped_simplex_array,
    stability_oracle,
    weighted_moments,
)
from .solver import PgdResult, default_step_scale, pgd_minimize
from .sparse_mean import (
    SparseMeanConfig,
    SparseMeanResult,
    estimate_sparse_mean,
    median_prune,
    objective_sparse_mean,
    pgd_sparse_mean,
    subgradient_sparse_mean,
    truncate_topk,
)
from .sparse_pca import (
    SparsePcaConfig,
    SparsePcaResult,
    estimate_sparse_pca,
    extract_spike,
    objective_sparse_pca,
    pgd_sparse_pca,
    subgradient_sparse_pca,
    subspace_error,
)

__version__ = "0.1.0"
