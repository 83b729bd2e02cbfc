"""Exception hierarchy shared by all mogfit modules.

Two broad categories matter to callers: validation problems (bad inputs,
exit code 2 at the CLI) and numerical failures (exit code 3).
"""


class MogfitError(Exception):
    """Base class for all mogfit errors."""


class ValidationError(MogfitError):
    """Input violates a documented precondition or schema."""


class DomainError(ValidationError):
    """A value lies outside the domain of a transformation or operation."""


class UnsupportedInputError(ValidationError):
    """The operation is undefined for this kind of input (e.g. atoms)."""


class NumericalError(MogfitError):
    """A numerical procedure failed to reach its accuracy target."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not converge.

    Carries the partial estimate and the error bound reached.
    """

    def __init__(self, message, estimate=None, error_bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class DivergenceError(NumericalError):
    """An expectation or moment diverges."""


class BracketError(NumericalError):
    """The 1-D search bracket does not contain a usable minimum."""


class ComponentDeathError(NumericalError):
    """A mixture component's weight underflowed during EM."""

    def __init__(self, message, component_index):
        super().__init__(message)
        self.component_index = component_index


class DegeneratePointError(NumericalError):
    """Responsibilities requested at a point of zero mixture density."""


class PipelineStageError(MogfitError):
    """Wraps an error raised inside a named pipeline stage."""

    def __init__(self, stage, cause):
        super().__init__(f"pipeline stage '{stage}': {cause}")
        self.stage = stage
        self.cause = cause
