"""Exception hierarchy shared across the library."""


class MajlatError(Exception):
    """Base class for all domain errors raised by this library."""


class NotNormalized(MajlatError):
    """Probability entries do not sum to 1 within tolerance."""


class NegativeEntry(MajlatError):
    """A probability entry is below -epsilon."""


class RankDeficit(MajlatError):
    """Target needs more non-zero Schmidt coefficients than the source has."""


class EmptyCollection(MajlatError):
    """An n-ary lattice operation received an empty list."""


class DegenerateBranch(MajlatError):
    """A measurement branch with (near-)zero probability was requested."""
