"""Shared exception types."""


class PreconditionError(ValueError):
    """An operation was called outside its stated domain."""


class RankDeficiencyError(ValueError):
    """Least-squares system does not have full column rank."""

    def __init__(self, rank, cols):
        self.rank = rank
        self.cols = cols
        super().__init__(f"rank-deficient system: detected rank {rank} < {cols} columns")


class OnCurveError(ValueError):
    """Winding number is undefined: the point sits too close to the sampled curve."""

    def __init__(self, distance, tolerance):
        self.distance = distance
        self.tolerance = tolerance
        super().__init__(
            f"point within curve tolerance of the symbol range "
            f"(distance {distance:.3e} <= {tolerance:.3e})"
        )


class ConditioningError(ValueError):
    """Numerical breakdown in a factorization, with the offending index."""

    def __init__(self, degree, pivot):
        self.degree = degree
        self.pivot = pivot
        super().__init__(f"Cholesky breakdown at degree {degree}: pivot {pivot:.3e}")


class ResourceLimitError(RuntimeError):
    """A structural size bound was exceeded (term counts, multi-index degrees)."""


class UsageError(ValueError):
    """Bad CLI input or scenario file; message names the offending field."""
