"""Exception hierarchy.

Validation problems (bad input, malformed files, precondition failures)
derive from ``ValidationError``; numerical consistency failures, which
signal a convention bug or precision exhaustion rather than bad input,
derive from ``NumericError``.  The CLI maps them to exit codes 2 and 3.
"""


class FareyShearError(Exception):
    pass


class ValidationError(FareyShearError, ValueError):
    pass


class NumericError(FareyShearError, ArithmeticError):
    pass


class DegenerateQuadruple(ValidationError):
    pass


class DegenerateTriple(ValidationError):
    pass


class OrientationMismatch(ValidationError):
    pass


class DegenerateMap(ValidationError):
    """Determinant is zero or negative."""


class DegenerateAxis(ValidationError):
    pass


class NotBasedAtTip(ValidationError):
    pass


class NotNeighbors(ValidationError):
    pass


class DepthLimit(ValidationError):
    pass


class UnknownTriangle(ValidationError):
    pass


class OrderViolation(ValidationError):
    def __init__(self, message, quadruple=None):
        super().__init__(message)
        self.quadruple = quadruple


class MissingVertexImage(ValidationError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class WindowExceedsDepth(ValidationError):
    pass


class NotFareyAutomorphism(ValidationError):
    pass


class NonMonotone(ValidationError):
    pass


class InsufficientDepth(ValidationError):
    pass


class FormatError(ValidationError):
    pass


class ConsistencyFailure(NumericError):
    pass
