"""Exception types raised by the entpair operations."""


class EntpairError(Exception):
    """Base class for all entpair-specific errors."""


class DimensionMismatchError(EntpairError):
    """An operand's dimension does not match the party it targets."""


class NonUnitaryError(EntpairError):
    """A matrix expected to be unitary is not, within tolerance."""


class ZeroVectorError(EntpairError):
    """A vector expected to be nonzero has negligible norm."""


class ZeroOutcomeError(EntpairError):
    """A projection outcome has vanishing probability; pick a different basis."""


class NoSubsetFoundError(EntpairError):
    """No Hadamard subset cleared the amplitude floor (numerical floor failure)."""


class PartyNotInTraceError(EntpairError):
    """A party index does not appear in the reduction trace."""


class FullyProductError(EntpairError):
    """The state carries no entanglement the requested pair could inherit."""


class SearchExhaustedError(EntpairError):
    """Every search stage completed without an entangling projection."""

    def __init__(self, message, best_concurrence=0.0, best_assignments=None):
        super().__init__(message)
        self.best_concurrence = best_concurrence
        self.best_assignments = best_assignments


class NonUnitVectorError(EntpairError):
    """A measurement direction is not a unit vector."""
