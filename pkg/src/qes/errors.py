"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: bad arguments -> 1,
certification failures -> 2, numerical failures -> 3.
"""


class QesError(Exception):
    """Base class for all library-specific errors."""


class PoleError(QesError, ValueError):
    """Evaluation requested on a singular lattice point or divergent limit."""


class ConditioningError(QesError, RuntimeError):
    """A sample matrix is rank deficient or too ill-conditioned to trust."""


class CertificationError(QesError):
    """Invariance residual exceeds tolerance: not QES at these parameters."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class NumericalError(QesError):
    """An eigensolver or residual bound failed beyond recoverable tolerance."""
