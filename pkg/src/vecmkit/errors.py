"""Exception hierarchy shared across the toolkit.

The CLI maps these onto exit codes: configuration problems exit with 2,
data problems with 3, numerical problems with 4.
"""


class VecmkitError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(VecmkitError):
    """Invalid run configuration (bad flags, malformed config file)."""


class DataError(VecmkitError):
    """Problem with input data: parse failures, gaps, empty joins."""


class ParseError(DataError):
    """A token could not be parsed (dates, numeric values)."""


class NumericalError(VecmkitError):
    """Numerical failure: singular designs, bad conditioning."""


class InsufficientSampleError(NumericalError):
    """Too few observations for the requested estimation."""


class SingularDesignError(NumericalError):
    """Regressor matrix is rank deficient."""

    def __init__(self, message, columns=None):
        super().__init__(message)
        self.columns = list(columns) if columns else []
