class WvssError(Exception):
    """Base class for every error raised by this package."""


class VectorTooWide(WvssError):
    pass


class WeightOutOfRange(WvssError):
    pass


class NotCoprime(WvssError):
    pass


class TooLarge(WvssError):
    pass


class DimensionMismatch(WvssError):
    pass


class PrimeTooLarge(WvssError):
    pass


class BadPrimes(WvssError):
    pass


class UnsatisfiedWitness(WvssError):
    pass


class MalformedProof(WvssError):
    pass


class BadInput(WvssError):
    pass


class Infeasible(WvssError):
    pass


class DealRejected(WvssError):
    pass


class ProofInvalid(DealRejected):
    pass


class OpeningMismatch(DealRejected):
    pass


class Unauthorized(WvssError):
    pass


class TooLargeToEnumerate(WvssError):
    pass


class ParseError(WvssError):
    pass
