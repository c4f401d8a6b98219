"""Exception hierarchy shared by every orelab module."""


class OrelabError(Exception):
    """Base class for all library errors."""


class DimensionError(OrelabError, ValueError):
    """Vectors, matrices or subspaces with incompatible sizes."""


class HypothesisError(OrelabError):
    """A required hypothesis does not hold for the given input.

    Distinct from a failed verification: a hypothesis failure means the
    statement does not apply, not that it was contradicted.
    """


class NotLocallyNilpotentError(HypothesisError):
    """A derivation whose matrix is not nilpotent."""


class CapExceededError(OrelabError):
    """An enumeration or expansion would exceed its configured cap."""


class GrassmannBoundaryError(OrelabError, ValueError):
    """A Grassmann computation needs generators beyond the truncation.

    ``required`` is the smallest number of generators that would suffice,
    when it is known.
    """

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class RadicalComputationError(OrelabError, RuntimeError):
    """Internal consistency failure in a radical computation."""
