"""Exception hierarchy shared by all modules."""


class SpecialKahlerError(Exception):
    """Base class for every error raised by the toolkit."""


class ExprSyntaxError(SpecialKahlerError, ValueError):
    """Malformed expression text; ``position`` is the 0-based column."""

    def __init__(self, message, text="", position=0):
        self.text = text
        self.position = position
        if text:
            message = f"{message} at position {position}\n  {text}\n  {' ' * position}^"
        super().__init__(message)


class UnknownVariableError(ExprSyntaxError):
    pass


class SingularPointError(SpecialKahlerError, ZeroDivisionError):
    """A quotient denominator vanished during evaluation."""

    def __init__(self, subexpression, point=None):
        self.subexpression = subexpression
        self.point = point
        super().__init__(f"denominator {subexpression!s} vanishes at point {point}")


class DimensionError(SpecialKahlerError, ValueError):
    pass


class NotSymplecticError(SpecialKahlerError, ValueError):
    def __init__(self, residual, tol):
        self.residual = residual
        self.tol = tol
        super().__init__(f"matrix is not symplectic: max|S^T Omega S - Omega| = {residual:.3e} >= {tol:.1e}")


class DegenerateFrameError(SpecialKahlerError, ValueError):
    """Degenerate symplectic form."""


class FrameDegeneracyError(SpecialKahlerError, ArithmeticError):
    """A matrix that must be inverted is numerically singular."""

    def __init__(self, message, smallest_singular_value, condition_number=None):
        self.smallest_singular_value = smallest_singular_value
        self.condition_number = condition_number
        super().__init__(f"{message} (smallest singular value {smallest_singular_value:.3e})")


class DomainError(SpecialKahlerError, ValueError):
    """Point outside the positivity domain (e^{-K} <= 0) or otherwise inadmissible."""


class HomogeneityError(SpecialKahlerError, ValueError):
    pass


class PrepotentialNotFoundError(SpecialKahlerError, ValueError):
    pass


class ModelFileError(SpecialKahlerError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DegenerateModelWarning(UserWarning):
    """The model is well formed but geometrically degenerate (e.g. vanishing Hessian)."""


class PreconditionError(SpecialKahlerError, ValueError):
    """A command was applied to a model it does not support (e.g. a cone for a rigid model)."""
