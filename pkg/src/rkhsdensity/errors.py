"""Exception hierarchy shared across the package.

InputError maps to CLI exit code 4; everything else is a programming or
numerical failure and propagates as-is.
"""


class InputError(ValueError):
    """Invalid user input: bad config, dimension mismatch, bad parameter."""


class CensoredDataError(InputError):
    """A computation needed point-set data outside the declared window."""


class MatrixCapError(InputError):
    """A dense matrix would exceed the desk-scale size cap."""


class DegenerateKernelError(InputError):
    """Kernel diagonal vanishes where positivity is required."""


class DegenerateWindowError(InputError):
    """A localization window produced an empty concentrated subspace."""


class SingularGramError(InputError):
    """Gram matrix is singular beyond the requested ridge."""

    def __init__(self, message: str, lambda_min: float):
        super().__init__(message)
        self.lambda_min = lambda_min


class SeparationError(InputError):
    """Point-set generator parameters would violate minimal separation."""
