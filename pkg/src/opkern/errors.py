"""Exception types shared across the package."""


class OpKernError(Exception):
    """Base class for all opkern errors."""


class DomainError(OpKernError):
    """A point lies outside the kernel's domain, or the domain kind is unsupported."""


class EvaluationError(OpKernError):
    """A kernel evaluator failed or produced non-finite entries."""


class EstimationError(OpKernError):
    """A regression/estimation step has no usable data."""


class ConvergenceError(OpKernError):
    """Refinement hit its resolution cap before the tracked quantities settled.

    Carries the refinement history so callers can inspect how far it got.
    """

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = history or []


class NumericError(OpKernError):
    """Non-finite input or a numerical step that should be impossible failed."""


class PreconditionError(OpKernError):
    """An operation's mathematical precondition is violated by the input."""


class TraceClassWarning(UserWarning):
    """The spectrum looks non-summable; a regularized determinant is advisable."""
