"""Exception types raised across the package."""


class ErgodicEPRError(Exception):
    """Base class for all package errors."""


class InvalidDimensionError(ErgodicEPRError, ValueError):
    pass


class InvalidParameterError(ErgodicEPRError, ValueError):
    pass


class DegenerateSpectrumError(ErgodicEPRError, ValueError):
    pass


class SymmetryViolationError(ErgodicEPRError, ValueError):
    """Matrix expected to be Hermitian is not."""


class DegenerateProfileError(ErgodicEPRError, ValueError):
    pass


class PairingError(ErgodicEPRError, ValueError):
    """Profile and spectrum (or charge tables) have inconsistent sizes."""


class ConfigurationError(ErgodicEPRError, ValueError):
    pass


class MalformedInputError(ErgodicEPRError, ValueError):
    """Input object violates the invariants of its type."""


class OutOfRegimeError(ErgodicEPRError, ValueError):
    pass


class InvalidWindowError(ErgodicEPRError, ValueError):
    pass


class FitError(ErgodicEPRError, ValueError):
    pass


class EmptyInputError(ErgodicEPRError, ValueError):
    pass


class ResourceLimitError(ErgodicEPRError):
    """A brute-force construction would exceed the configured memory cap."""


class InvariantViolationError(ErgodicEPRError):
    """Independent numerical routes disagree beyond tolerance."""
