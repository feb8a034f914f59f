"""Exception and warning types shared across the package."""


class ConfigurationError(ValueError):
    """Parameters are inconsistent or cannot produce a valid dataset."""


class PlacementError(ValueError):
    """A shape does not fit at the requested position."""


class InvalidShapeError(ValueError):
    """A shape specification cannot be rendered."""


class UnsupportedInputError(ValueError):
    """Input is valid in general but outside what the routine supports."""


class ParseError(ValueError):
    """A dataset or results file is malformed.

    Parameters
    ----------
    message : str
        Human readable description.
    line : int, optional
        1-based line number in the offending file.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SchemaVersionError(ValueError):
    """A results document was written with an incompatible schema version."""


class ValidationError(ValueError):
    """A results document contains out-of-range or inconsistent values."""


class DegenerateConfigurationWarning(UserWarning):
    """The configuration produces classes that cannot be told apart."""


class CliqueAnomalyWarning(UserWarning):
    """Some non-significant pairs straddle two different cliques.

    Attributes
    ----------
    pairs : list of tuple
        The offending ``(name_a, name_b)`` pairs.
    """

    def __init__(self, message, pairs=()):
        super().__init__(message)
        self.pairs = list(pairs)
