"""Exception types shared across the package."""


class SparsePCAError(Exception):
    """Base class for errors raised by this package."""


class ZeroDirectionError(SparsePCAError):
    """A linear step on the sphere was requested with a zero direction."""


class EmptySupportError(SparsePCAError):
    """A loading vector was requested for a pattern with no active entry."""


class NotConvexError(SparsePCAError):
    """The objective decreased along the iteration, which a convex
    objective cannot do; typically the shift parameter was too small."""


class NumericalError(SparsePCAError):
    """A non-finite value appeared during the computation."""


class DataFormatError(SparsePCAError):
    """Input data could not be parsed into a dense numeric matrix."""
