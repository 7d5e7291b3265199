"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input violates a documented precondition (shape, range, finiteness)."""


class ShapeError(ValidationError):
    """Array shape or divisibility constraint violated."""


class DegenerateInputError(ValidationError):
    """Input has no usable variation (constant lead, constant clip, zero-norm row)."""


class SegmentationInfeasibleError(ValidationError):
    """Too few heartbeats to segment the signal."""


class UndefinedLossError(ValidationError):
    """Loss is undefined for this input (e.g. empty mask set)."""
