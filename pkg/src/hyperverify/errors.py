"""Exception types shared across the package."""


class HyperverifyError(Exception):
    pass


class PoleError(HyperverifyError, ValueError):
    """A gamma function was asked for a value at a nonpositive integer."""

    def __init__(self, value, message=None):
        self.value = value
        super().__init__(message or f"gamma pole at {value!r}")


class ConvergenceError(HyperverifyError, ArithmeticError):
    pass


class CutContactError(HyperverifyError, ValueError):
    """Argument lies on the branch cut [1, inf)."""


class DegenerateParameterError(HyperverifyError, ValueError):
    """Parameters differ by an integer; the generic formula has poles."""


class DegenerateParameterWarning(UserWarning):
    pass


class UnitCircleError(HyperverifyError, ValueError):
    pass


class ContourError(HyperverifyError, ValueError):
    """No admissible vertical contour separates the two pole sequences."""


class QuadratureError(HyperverifyError, ArithmeticError):
    def __init__(self, message, location=None):
        self.location = location
        super().__init__(message)
