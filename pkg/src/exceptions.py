"""Domain errors raised by the simulator.

All of them derive from ``ValueError`` so callers can catch either the specific
class or the broad one.
"""


class DimensionMismatchError(ValueError):
    """Operands have incompatible shapes or subsystem dimensions."""


class NotHermitianError(ValueError):
    """A matrix that must be Hermitian is not, within tolerance."""


class NotPositiveError(ValueError):
    """A matrix that must be positive semidefinite has a negative eigenvalue."""


class InvalidStateError(ValueError):
    """A state vector or density matrix is not normalized or otherwise invalid."""


class InvalidPovmError(ValueError):
    """A POVM is incomplete or has non-positive effects."""


class CountTableError(ValueError):
    """An experimental count table is malformed."""
