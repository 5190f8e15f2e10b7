"""Exception hierarchy shared by every module of :mod:`asq`."""


class AsqError(ValueError):
    """Base class for all errors raised by this package."""


class NotPrime(AsqError):
    pass


class SizeCap(AsqError):
    pass


class BadDivisor(AsqError):
    pass


class NonSymmetric(AsqError):
    pass


class IndexOutOfRange(AsqError, IndexError):
    pass


class NotHermitian(AsqError):
    pass


class DimMismatch(AsqError):
    pass


class NotOrthonormal(AsqError):
    pass


class DecompositionUnstable(AsqError):
    pass


class SingularNormalizer(AsqError):
    pass


class NotPseudocyclic(AsqError):
    pass


class TSmall(AsqError):
    pass


class FormatError(AsqError):
    """A JSON artifact is malformed or of the wrong kind."""


class HashMismatch(AsqError):
    """A certificate was produced for a different scheme."""
