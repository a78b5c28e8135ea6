"""Exception hierarchy shared by every module of the package."""


class AdvisoryError(Exception):
    """Base class for all package errors."""


class DataError(AdvisoryError, ValueError):
    """Invalid input data. Carries an optional 1-based CSV row number."""

    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class MalformedHeader(DataError):
    pass


class NegativeDiff(DataError):
    pass


class UnknownAttribute(DataError, KeyError):
    def __str__(self):
        return self.args[0] if self.args else ""


class NotNominal(DataError):
    pass


class NotNumeric(DataError):
    pass


class EmptyInput(DataError):
    pass


class EmptyDataset(EmptyInput):
    pass


class NoFeatures(DataError):
    pass


class SchemaMismatch(DataError):
    pass


class DomainError(AdvisoryError, ValueError):
    """Argument outside the mathematical domain of a function."""


class KTooLarge(DomainError):
    pass


class KOutOfRange(DomainError):
    pass


class EmptyMatrix(DomainError):
    pass


class DegenerateBaseline(DomainError):
    pass


class MissingGroup(DomainError):
    pass


class InvalidParams(DomainError):
    pass


class UnsupportedFormat(AdvisoryError, ValueError):
    pass


class StratificationWarning(UserWarning):
    pass
