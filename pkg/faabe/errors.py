"""Exception hierarchy. Every class knows the exit code the CLI reports for it."""

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class FaabeError(Exception):
    exit_code = EXIT_INTERNAL


class ConfigError(FaabeError):
    """Bad command-line value, config-file entry or hyperparameter."""

    exit_code = EXIT_CONFIG


class DataError(FaabeError, ValueError):
    exit_code = EXIT_DATA


class ManifestError(DataError):
    pass


class DatasetLoadError(DataError):
    """A CSV cell or column that cannot become part of a Dataset."""

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column '{column}'")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class UnknownColumnError(DatasetLoadError):
    pass


class NonNumericValueError(DatasetLoadError):
    pass


class MissingValueError(DatasetLoadError):
    pass


class InvalidEffortError(DatasetLoadError):
    pass


class EmptyDatasetError(DatasetLoadError):
    pass


class NormalizationError(DataError):
    pass


class SchemaMismatchError(DataError):
    pass


class WeightError(DataError):
    pass


class EstimationError(DataError):
    pass


class MetricsError(DataError):
    pass


class SplitError(DataError):
    pass
