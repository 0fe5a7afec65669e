class RangekitError(Exception):
    """Base class for every error raised by the library."""


class DuplicatePoint(RangekitError):
    pass


class NonFiniteCoordinate(RangekitError):
    pass


class InvalidInstance(RangekitError):
    pass


class SizeMismatch(RangekitError):
    pass


class DimensionMismatch(RangekitError):
    pass


class NotLineAlike(RangekitError):
    pass


class NoInteriorPoint(RangekitError):
    pass


class TooLarge(RangekitError):
    """Input exceeds the enumeration cap of an exponential routine."""


class AlphaUnsupported(RangekitError):
    pass


class PathNotInTree(RangekitError):
    pass


class IndexOutOfSide(RangekitError):
    pass


class BadIndices(RangekitError):
    pass


class RecursionDepthExceeded(RangekitError):
    pass


class BadParams(RangekitError):
    pass
