"""Exception types raised across the package."""


class FptLabError(Exception):
    """Base class for every error raised by fptlab."""


class CompositeModulus(FptLabError, ValueError):
    pass


class UnsupportedCharacteristic(FptLabError, ValueError):
    pass


class DivisionByZero(FptLabError, ZeroDivisionError):
    pass


class RingMismatch(FptLabError, TypeError):
    pass


class FieldMismatch(RingMismatch):
    pass


class FieldTooLarge(FptLabError, ValueError):
    pass


class NonInvertibleIndex(FptLabError, ZeroDivisionError):
    pass


class RingNotField(FptLabError, TypeError):
    pass


class ZeroPolynomial(FptLabError, ValueError):
    pass


class BadPartition(FptLabError, ValueError):
    pass


class FactorizationMismatch(FptLabError, RuntimeError):
    """Internal consistency check of a digit factorization failed."""


class DegenerateParameter(FptLabError, ValueError):
    pass


class CharTwoUnsupported(FptLabError, ValueError):
    pass


class ResourceCap(FptLabError, RuntimeError):
    pass


class MismatchDetected(FptLabError, RuntimeError):
    """A brute-force result disagrees with the closed form.

    ``kind`` is ``"bounds-violated"`` when the computed nu contradicts the
    closed-form threshold, ``"nu-pattern"`` when the bounds hold but nu is
    not the expected value, and ``"witness"`` when a certificate term
    vanishes. ``state`` carries whatever was computed up to the failure.
    """

    def __init__(self, message, kind="nu-pattern", state=None):
        super().__init__(message)
        self.kind = kind
        self.state = state or {}
