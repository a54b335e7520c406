"""Exception hierarchy.

The CLI maps these onto exit codes: validation problems -> 2, resource caps -> 3,
inconclusive heuristics -> 4.
"""


class TightPosetError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(TightPosetError, ValueError):
    """Input violates an operation's precondition."""


class MixedScalarError(ValidationError, TypeError):
    """Scalars from incompatible parts of the tower were combined."""


class ZeroVectorError(ValidationError):
    """A frame contains a zero vector where the operation forbids it."""

    def __init__(self, indices):
        self.indices = tuple(indices)
        super().__init__(f"zero vector(s) at 1-based indices {list(self.indices)}")


class SingletonError(ValidationError):
    """A poset contains a singleton (the diagram of a zero vector)."""


class NotSpanClosedError(ValidationError):
    """A poset is not span-closed, so no R^2 frame realizes it."""


class InfeasibleScalingError(ValidationError):
    """A weight vector is not a scaling of the frame."""


class NoSigningError(ValidationError):
    """The poset admits no signing."""


class LimitExceededError(TightPosetError):
    """A configured resource cap (vector count, search bound) was hit."""


class SearchBoundExceeded(LimitExceededError):
    """An integer witness search ran past its norm bound."""


class InconclusiveError(TightPosetError):
    """A best-effort heuristic failed; this says nothing about infeasibility."""
