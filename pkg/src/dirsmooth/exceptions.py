"""Exception hierarchy shared across the package."""


class DirsmoothError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(DirsmoothError):
    """A point's dimension does not match the objective's."""


class CoincidentPointsError(DirsmoothError):
    """Directional quantities are undefined for coincident points."""


class UnsupportedObjectiveError(DirsmoothError):
    """The operation is not defined for this objective kind."""


class DataFormatError(DirsmoothError):
    """Dataset ingestion failed; message carries row/column location."""


class StepSizeError(DirsmoothError):
    """A step-size rule could not produce a valid step."""


class RayMinimizationError(StepSizeError):
    """Bracket search found no sign change: the objective appears to be
    minimized along the ray, so no strongly adapted step exists."""


class ReferenceSolveError(DirsmoothError):
    """Reference-optimum computation failed.

    Carries the best iterate found so far in ``best_x`` / ``best_grad_norm``.
    """

    def __init__(self, message, best_x=None, best_grad_norm=None):
        super().__init__(message)
        self.best_x = best_x
        self.best_grad_norm = best_grad_norm


class SeparableDataError(ReferenceSolveError):
    """Logistic data is linearly separable: the infimum is not attained."""


class OptimizationRunError(DirsmoothError):
    """A step-size rule failed mid-run; carries the iteration index and the
    partial trace accumulated before the failure."""

    def __init__(self, iteration, message, partial_trace=None):
        super().__init__(f"iteration {iteration}: {message}")
        self.iteration = iteration
        self.partial_trace = partial_trace


class MissingMetricsError(DirsmoothError):
    """A bound evaluator needs per-pair metrics the trace does not carry."""


class HypothesisError(DirsmoothError):
    """A trace does not satisfy the hypotheses of the requested bound."""


class ConfigError(DirsmoothError):
    """Experiment configuration failed validation."""
