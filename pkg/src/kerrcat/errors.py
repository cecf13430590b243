"""Exception hierarchy shared by all kerrcat modules."""


class KerrCatError(Exception):
    """Base class for every error raised by this package."""


class DomainError(KerrCatError, ValueError):
    """An argument lies outside the domain of an operation."""


class TruncationError(KerrCatError):
    """A Fock-space cutoff leaves too much probability in the last level."""


class NumericalError(KerrCatError, ArithmeticError):
    """A quantity that must be positive came out non-positive or complex."""


class DegenerateOutcomeError(KerrCatError):
    """Conditioning on a homodyne outcome of (numerically) zero probability."""


class UnrecognizedAmplitudeError(KerrCatError):
    """A mode-4 amplitude does not correspond to any (k, l) pair."""


class GridCoverageError(KerrCatError):
    """A phase-space grid does not capture the state's Wigner function."""
