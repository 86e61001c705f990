"""Exception hierarchy shared across the package."""


class BandSurfError(Exception):
    """Base class for all package errors."""


class ParseError(BandSurfError):
    """Input text does not conform to one of the presentation grammars."""


class InvalidMoveError(BandSurfError):
    """A slide/flip/split was requested that is not defined on this input."""


class IterationCapExceeded(BandSurfError):
    """Greedy normalization exhausted its move budget without reaching
    two-sided form; callers may fall back to the brute-force search."""


class GeometryError(BandSurfError):
    """Degenerate configuration in a realized diagram (collinear overlap,
    endpoint-on-interior contact, or a stacking-height tie).  Constructed
    presentations should never trigger this; it is a bug trap."""


class NonIntegralGenus(BandSurfError):
    """Parity mismatch between boundary count and Euler characteristic."""
