class CapBodyError(Exception):
    """Base class for errors raised by capbody."""


class InvalidInputError(CapBodyError, ValueError):
    """Input violates a precondition (bad dimension, malformed JSON, ...)."""


class VertexInsideBall(InvalidInputError):
    pass


class PointInsideCap(InvalidInputError):
    pass


class NotOnBoundary(InvalidInputError):
    pass


class InvalidPacking(InvalidInputError):
    pass


class NotCentrallySymmetric(InvalidInputError):
    pass


class NotUnconditional(InvalidInputError):
    pass


class UnrecognizedConfiguration(InvalidInputError):
    """k-tangent families that no valid unconditional packing can contain."""


class InternalContradiction(CapBodyError, RuntimeError):
    """A constructive step failed where the underlying theorem guarantees success."""


class GenerationStalled(UserWarning):
    """Random generation hit its rejection limit before reaching the requested size."""
