"""Exception hierarchy shared across the package."""


class HeliosError(Exception):
    """Base class for all errors raised by this package."""


class MissingColumnError(HeliosError):
    """A required CSV column could not be resolved through the schema."""


class UnparsableRowError(HeliosError):
    """A CSV data row could not be parsed into numeric fields."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class NonMonotonicTimestampsError(HeliosError):
    """Timestamps are not strictly increasing after sorting (duplicates)."""


class BoundaryOutOfRangeError(HeliosError):
    """Split boundary lies past the end of the dataset."""


class InsufficientHistoryError(HeliosError):
    """Not enough past samples for a moving average or lag window."""


class InsufficientLagsError(HeliosError):
    """A lag window shorter than the model order was supplied."""


class AlignmentMismatchError(HeliosError):
    """Per-row auxiliary series does not line up with the dataset."""


class MissingExogenousError(HeliosError):
    """Future exogenous inputs do not cover the requested horizon."""


class NonFiniteInputError(HeliosError):
    """An input vector contained NaN or infinity."""


class NonFiniteObjectiveError(HeliosError):
    """The posterior objective evaluated to NaN or infinity."""


class NonFiniteGradientError(HeliosError):
    """The objective gradient contained NaN or infinity."""


class DegenerateDataError(HeliosError):
    """Dataset unusable for fitting (gaps, too short, constant target)."""


class LengthMismatchError(HeliosError):
    """Two series expected to align have different lengths."""


class DegenerateVarianceError(HeliosError):
    """R-squared undefined because the reference series is constant."""


class SingularDesignError(HeliosError):
    """Least-squares design matrix is rank deficient."""


class InsufficientCoverageError(HeliosError):
    """Series too short to fill one full aggregation period."""


class ModelIoError(HeliosError):
    """Model file unreadable, unwritable, or truncated."""


class SchemaVersionMismatchError(HeliosError):
    """Model file carries an unsupported schema version."""


class ConfigError(HeliosError):
    """Run configuration failed validation."""
