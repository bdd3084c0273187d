"""Exception types shared across the library."""


class RobustSparseError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(RobustSparseError):
    """Input arrays have incompatible shapes."""


class InfeasibleDomain(RobustSparseError):
    """The capped simplex is empty (n * cap < 1)."""


class NonConvergence(RobustSparseError):
    """Iterative eigensolver failed to reach the residual tolerance."""


class TooLarge(RobustSparseError):
    """Exhaustive enumeration would exceed the configured budget."""


class AllPruned(RobustSparseError):
    """A pruning step removed every sample."""


class EpsTooLarge(RobustSparseError):
    """Requested corruption fraction leaves no inliers."""


class NonUnit(RobustSparseError):
    """A vector expected to have unit norm does not."""


class BadDims(RobustSparseError):
    """Invalid generator dimensions (e.g. k > d)."""


class KindMismatch(RobustSparseError):
    """Ground truth kind does not match the requested error metric."""


class ConfigError(RobustSparseError):
    """Benchmark config file could not be parsed."""
