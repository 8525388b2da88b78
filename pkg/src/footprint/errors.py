"""Exception hierarchy.

Everything raised for bad data or bad models derives from ``DataError`` so the
CLI can map it to exit code 2.
"""


class DataError(Exception):
    pass


class UnknownFlair(DataError):
    pass


class MalformedRow(DataError):
    def __init__(self, row, reason):
        super().__init__(f"row {row}: {reason}")
        self.row = row


class ConfigInvalid(DataError):
    pass


class DimensionError(DataError):
    pass


class ZeroMatrix(DataError):
    pass


class EmptyVocabulary(DataError):
    pass


class InconsistentDimension(DataError):
    pass


class DuplicateToken(DataError):
    pass


class EmptyTrainingSet(DataError):
    pass


class SingleClass(DataError):
    pass


class MissingClass(DataError):
    pass


class NonFinite(DataError):
    pass


class LengthMismatch(DataError):
    pass


class UnknownLabel(DataError):
    pass


class DegenerateLabels(DataError):
    pass


class TooFewRows(DataError):
    pass


class TooFewUsers(DataError):
    pass


class NotFittedError(DataError):
    pass


class RefitError(DataError):
    """A frozen transform was asked to fit a second time."""
