"""Exception hierarchy for the tnhhl package.

All errors raised by the library derive from :class:`TnhhlError`, so callers
can catch everything coming out of the solver stack with a single except
clause while still being able to distinguish the failure modes.
"""


class TnhhlError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(TnhhlError):
    """Operands have incompatible or malformed dimensions."""


class DomainError(TnhhlError):
    """Input is outside the mathematical domain of the operation
    (non-Hermitian where Hermitian is required, non-unitary propagator,
    zero right-hand side, bad grid parameters, ...)."""


class ConvergenceError(TnhhlError):
    """An iterative method exhausted its sweep/iteration budget."""


class SingularMatrixError(TnhhlError):
    """Direct solve hit a pivot that is zero to machine precision."""


class CalibrationError(TnhhlError):
    """Scale calibration produced a degenerate contraction value."""


class StateError(TnhhlError):
    """A statevector operation was applied to a state that violates its
    precondition (e.g. ancilla not in the |0> sector)."""


class PostSelectionError(TnhhlError):
    """Post-selection left no surviving amplitude to condition on."""


class ParseError(TnhhlError):
    """A matrix/vector/config file is malformed."""
