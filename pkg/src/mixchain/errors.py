"""Exception hierarchy shared by every mixchain module."""


class MixchainError(Exception):
    """Base class for all errors raised by this package."""


class NonSquare(MixchainError):
    """Input array is not a square matrix with at least two states."""


class NegativeEntry(MixchainError):
    """A transition probability is negative."""


class RowSumOutOfTolerance(MixchainError):
    """A row sum differs from 1 by more than the admission tolerance."""


class NotIrreducible(MixchainError):
    """Operation requires an irreducible chain but the input is reducible."""


class SingularSystem(MixchainError):
    """A linear system that should be solvable turned out singular.

    Signals numerical failure, not a legitimate chain configuration.
    """


class InvariantViolation(MixchainError):
    """An internal identity failed beyond tolerance; indicates an upstream bug."""


class SupportMismatch(MixchainError):
    """Empirical and analytic tables describe different variants or supports."""


class InvalidCaseParams(MixchainError):
    """Parameters do not satisfy the constraints of the named fixture case."""


class StateOutOfRange(MixchainError):
    """A state index is outside 1..m."""


class EpsilonOutOfRange(MixchainError):
    """An epsilon value lies outside the open interval (0, 1)."""
