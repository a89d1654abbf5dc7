"""Exception hierarchy shared across the package."""


class DalgError(Exception):
    """Base class for all errors raised by dalgguess."""


class InvalidInput(DalgError, ValueError):
    pass


class ReconstructionFailure(DalgError):
    """Rational reconstruction found no fraction within the bound; use more primes."""


class UnluckyPrime(DalgError):
    """A denominator vanishes modulo the chosen prime; drop the prime."""


class InsufficientData(DalgError):
    """Too few terms for the requested ansatz.

    ``min_terms`` carries the smallest number of terms that would make the
    request admissible, when it is known.
    """

    def __init__(self, message, min_terms=None):
        super().__init__(message)
        self.min_terms = min_terms


class SupportMismatch(DalgError):
    def __init__(self, message, supports=None):
        super().__init__(message)
        self.supports = supports or {}


class VerificationFailure(DalgError):
    pass
