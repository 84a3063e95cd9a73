"""Exception hierarchy.

Every error raised by the library derives from :class:`XPointError`, which is
itself a :class:`ValueError`. The CLI maps the three families below onto its
exit codes.
"""


class XPointError(ValueError):
    """Base class for all library errors."""


class UsageError(XPointError):
    """Bad arguments or parameters supplied by the caller."""


class DataError(XPointError):
    """Problems with input data: files, schemas, sample sets."""


class NumericError(XPointError):
    """A well-formed problem that has no (unique) numerical answer."""


class InvalidLotteryError(UsageError):
    pass


class InvalidModelError(UsageError):
    pass


class UnknownCaseError(UsageError):
    pass


class SchemaError(DataError):
    pass


class DatasetParseError(DataError):
    def __init__(self, message, rows=()):
        super().__init__(message)
        self.rows = tuple(rows)


class EmptyDatasetError(DataError):
    pass


class InsufficientDataError(DataError):
    pass


class DegenerateDesignError(DataError):
    pass


class DomainError(NumericError):
    pass


class ParallelLinesError(NumericError):
    pass


class NoInteriorMaximumError(NumericError):
    pass


class IndistinguishableConstraintsError(NumericError):
    pass
