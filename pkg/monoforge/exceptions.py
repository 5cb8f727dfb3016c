"""Errors raised by monoforge."""
from typing import Any


class MonoforgeError(Exception):
    """Base error, carries the offending data in ``context``."""

    def __init__(self, message: str, context: dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.context = context or {}


class PrecisionExhausted(MonoforgeError):
    """No coefficient or invariant can be certified at the stored precision."""


class NonUnit(MonoforgeError):
    """A unit operation was applied to a series with vanishing constant term."""


class IrrationalRoot(MonoforgeError):
    """A root needed by a parameter change does not exist over the rationals."""


class MalformedGerm(MonoforgeError):
    """Germ data (or a germ file) violates the germ invariants."""


class UnitChangeRequired(MonoforgeError):
    """Making u an exact monomial needs a root that is not rational."""


class IrrationalCriticalPoint(MonoforgeError):
    """An obstruction polynomial has roots outside the rationals."""


class DepthExceeded(MonoforgeError):
    """A recursion or phase budget was exhausted."""


class CenterNotInLocus(MonoforgeError):
    """F does not lie in the asserted power of the center's ideal."""


class WrongForm(MonoforgeError):
    """An invariant was requested on a germ of the wrong form."""


class NotInvertible(MonoforgeError):
    """m_q is not invertible at some leaf mapping to the blown up point."""


class UnsupportedCenter(MonoforgeError):
    """The required center is not a coordinate curve of any chart."""


class NotDivisible(MonoforgeError):
    """Exact division by a monomial failed."""


class DescentViolation(MonoforgeError):
    """A descent inequality failed on certified data."""
