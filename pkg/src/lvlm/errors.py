"""Error taxonomy shared by the library and the CLI.

InputError maps to CLI exit code 1, NumericError to exit code 2.
"""


class InputError(ValueError):
    """Invalid argument, file, or shape/dimension mismatch."""


class NumericError(ArithmeticError):
    """Numerical failure (e.g. a covariance that stays singular after ridge)."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state
