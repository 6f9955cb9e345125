"""
Exception hierarchy for latdisp.

Every domain failure raised by the library derives from LatdispError so the
CLI and the HTTP layer can turn it into an exit status or a 400 response.
"""


class LatdispError(Exception):
    """Base class for all domain errors."""


class InvalidArgument(LatdispError, ValueError):
    """An argument violates a documented precondition."""


class MixedRadicand(LatdispError, ValueError):
    """Field arithmetic between irrationals of two different quadratic fields."""

    def __init__(self, d1: int, d2: int):
        super().__init__(f"cannot combine elements of Q(sqrt({d1})) and Q(sqrt({d2}))")
        self.radicands = (d1, d2)


class DivisionByZero(LatdispError, ZeroDivisionError):
    pass


class IndexOutOfRange(LatdispError, IndexError):
    """Coefficient or convergent index outside a finite sequence."""


class NonPeriodicTail(LatdispError):
    """A tail of the sequence terminates, so it has no quadratic value."""


class TerminatedWalk(LatdispError):
    """The box walk reached a degenerate box of a rational lattice."""


class SingularBasis(LatdispError, ValueError):
    pass


class NotIrrational(LatdispError):
    """Two lattice points share a coordinate line."""


class NotPurelyPeriodic(LatdispError):
    pass


class NotQuadraticInteger(LatdispError):
    pass


class CapExceeded(LatdispError):
    pass


class WindowTooSmall(LatdispError):
    pass


class ParseError(LatdispError, ValueError):
    """Text could not be parsed; `position` is the offending offset."""

    def __init__(self, message: str, text: str = "", position: int = 0):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


class InternalFault(LatdispError):
    """A certification or consistency check failed. Indicates a bug."""
