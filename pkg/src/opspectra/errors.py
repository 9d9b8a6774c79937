"""Exception hierarchy shared by every opspectra module."""


class OpSpectraError(Exception):
    """Base class for all errors raised by opspectra."""


class InputError(OpSpectraError, ValueError):
    """Rejected input: wrong shape, out-of-range parameter, failed precondition."""


class NotHermitianError(InputError):
    pass


class NumericalError(OpSpectraError, ArithmeticError):
    """An algorithm could not deliver a result at the requested accuracy."""


class ConvergenceError(NumericalError):
    """Iteration cap reached; ``residuals`` holds the last diagnostic values."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class SingularityError(NumericalError):
    def __init__(self, message, singular_value):
        super().__init__(message)
        self.singular_value = singular_value


class NotEquivalentError(OpSpectraError):
    """Two projections are not Murray-von Neumann equivalent in the block model."""

    def __init__(self, message, block):
        super().__init__(message)
        self.block = block
