"""Exception hierarchy shared by every module."""


class QuditGroverError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(QuditGroverError, ValueError):
    """Operand shapes are incompatible (e.g. non-square where square is needed)."""


class SizeError(QuditGroverError, ValueError):
    """A requested dimension exceeds the configured cap."""


class RankError(QuditGroverError, ArithmeticError):
    """A Gram system is singular because the basis is linearly dependent."""


class ArityError(QuditGroverError, ValueError):
    """Gate kind and arity are incompatible, or the arity is out of range."""


class DomainError(QuditGroverError, ValueError):
    """An argument lies outside the domain of a closed-form expression."""


class InvarianceError(QuditGroverError, ArithmeticError):
    """An operator maps a basis vector out of the supposedly invariant span."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class ProtocolError(QuditGroverError, RuntimeError):
    """The repeated-run protocol hit its runaway guard."""
