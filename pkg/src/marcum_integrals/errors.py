"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the region where an operation is defined."""


class ConvergenceError(ArithmeticError):
    """A series or iteration did not reach its tolerance within budget."""


class QuadratureError(ConvergenceError):
    """Adaptive quadrature exhausted its panel budget."""


class NonPhysicalResultError(ArithmeticError):
    """A formula produced a value with no physical meaning.

    The offending value is kept on ``value`` so callers can report it.
    """

    def __init__(self, message, value):
        super().__init__(message)
        self.value = value
