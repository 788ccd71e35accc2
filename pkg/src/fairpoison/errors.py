"""Exception types shared across the package."""


class DataError(ValueError):
    """Base class for problems with input data."""


class IngestionError(DataError):
    """The CSV file could not be read (empty file, malformed rows, bad values)."""


class SchemaError(DataError):
    """Column roles do not match the file, or a schema invariant is violated."""


class ValidationError(DataError):
    """Loaded data violates a dataset invariant (non-binary S/Y, missing values)."""


class DegenerateDataError(ValueError):
    """Training data cannot support the requested model (e.g. single-class labels)."""


class UndefinedMetricError(ValueError):
    """A metric's defining frequencies are not all available (e.g. a group absent)."""
