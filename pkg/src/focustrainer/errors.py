"""Shared exception types."""


class FocusTrainerError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(FocusTrainerError):
    """Invalid configuration or input data.

    ``fields`` maps each offending field name to a message, so callers
    (CLI, service) can produce field-level error documents.
    """

    def __init__(self, fields: dict[str, str]):
        self.fields = dict(fields)
        detail = "; ".join(f"{name}: {msg}" for name, msg in sorted(self.fields.items()))
        super().__init__(f"validation failed: {detail}")


class RejectedInputError(FocusTrainerError):
    """An input was rejected (out of order, unknown kind, malformed)."""


class ConfigurationError(FocusTrainerError):
    """A component was configured in an unusable way (e.g. empty phrase inventory)."""


class LogCorruptionError(FocusTrainerError):
    """An event log violates its sequencing or format contract."""


class UndefinedStatisticError(FocusTrainerError):
    """A statistic is undefined for the given data (e.g. zero total variance)."""


class SessionStateError(FocusTrainerError):
    """A session lifecycle operation was attempted from the wrong state."""


class NotReadyError(FocusTrainerError):
    """A result was requested before the session produced it."""
