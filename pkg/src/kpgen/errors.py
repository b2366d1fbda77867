"""Exception hierarchy shared across the toolkit.

The CLI maps these onto exit codes: usage problems exit 1, data problems
exit 2, embedding-provider problems exit 3.
"""


class KpgenError(Exception):
    """Base class for all toolkit errors."""


class UsageError(KpgenError):
    """Bad arguments or configuration supplied by the caller."""


class DataError(KpgenError):
    """Malformed or inconsistent input data."""


class ParseError(DataError):
    """A record could not be parsed; carries the offending line number."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class IngestionError(DataError):
    """Corpus-level inconsistency such as a duplicate document id."""


class UndefinedStatisticError(DataError):
    """A statistic is undefined for the given input (e.g. empty gold list)."""


class TrainingError(DataError):
    """Supervised training cannot proceed (e.g. no positive examples)."""


class ProviderError(KpgenError):
    """The embedding provider failed; carries provider diagnostics."""
