"""Exception hierarchy shared by every module."""


class SumsetError(Exception):
    """Base class for all sumsetlab errors."""


class ContextMismatch(SumsetError, ValueError):
    pass


class Overflow(SumsetError, OverflowError):
    pass


class Unsupported(SumsetError):
    pass


class EmptySet(SumsetError, ValueError):
    pass


class SizeMismatch(SumsetError, ValueError):
    pass


class BadConstant(SumsetError, ValueError):
    pass


class BadParams(SumsetError, ValueError):
    pass


class NoBaseline(SumsetError):
    pass


class NotFound(SumsetError):
    pass


class Infeasible(SumsetError):
    """Raised when a point set itself fails the requested covering property.

    ``cover`` holds the violating :class:`~sumsetlab.verifier.CoverCheck`.
    """

    def __init__(self, message, cover=None):
        super().__init__(message)
        self.cover = cover


class NotSubset(SumsetError, ValueError):
    pass


class ZeroWalks(SumsetError):
    """The walk certificate is vacuous (some pair has no walk)."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class NoPrimeFound(SumsetError):
    pass


class DimensionTooLarge(SumsetError, ValueError):
    pass
