"""Exception taxonomy shared across the package.

Exit-code mapping used by the command line driver:
  ParameterError -> 1, NumericError -> 2, VerificationError -> 3.
"""


class ParameterError(ValueError):
    """Inputs outside every admissible parameter range."""


class NumericError(ArithmeticError):
    """A floating-point routine could not meet its accuracy contract."""


class VerificationError(AssertionError):
    """An exact identity or statistical gate failed."""


class ResonanceError(ArithmeticError):
    """A Frobenius pivot vanished; the nested scheme must be used."""

    def __init__(self, msg, q=None, step=None):
        super().__init__(msg)
        self.q = q
        self.step = step


class GammaPairingError(ArithmeticError):
    """A Gamma-function quotient does not telescope to a rational."""
