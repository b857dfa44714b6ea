"""Exceptions.

Every library error is a ``ValueError`` so plain callers can catch them generically.
The CLI maps ``InputError`` to exit code 2 and ``ConfigError`` to exit code 3.
"""


class MultiplexGraphletsError(ValueError):
    """Base class for all multiplex_graphlets errors."""


class InputError(MultiplexGraphletsError):
    """Input data error (documents, matrices, schemas)."""


class ConfigError(MultiplexGraphletsError):
    """Configuration or parameter error."""


class ParseError(InputError):
    """Edge-list document could not be parsed."""

    def __init__(self, message: str, line_number: int | None = None) -> None:
        """Attach the offending line number to the message."""
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class SchemaMismatchError(InputError):
    """Two artifacts do not share a sub-orbit schema."""


class GraphletError(InputError):
    """Adjacency is not a connected graphlet on 2-4 nodes, or orbit is unsupported."""


class MetricsError(InputError):
    """Invalid input to a metric."""


class EmbeddingError(InputError):
    """Distance matrix cannot be embedded."""


class GeneratorError(ConfigError):
    """Invalid generator parameters."""
