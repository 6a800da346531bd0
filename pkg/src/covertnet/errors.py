"""Exception hierarchy shared across the package."""


class CovertNetError(Exception):
    """Base class for all covertnet errors."""


class NetworkValidationError(CovertNetError):
    """A network instance violates a structural invariant."""


class DuplicateId(NetworkValidationError):
    """Two nodes (or two adversaries) share the same id."""


class CoLocatedEntities(NetworkValidationError):
    """Two entities sit at exactly the same position."""


class MissingGainEntry(NetworkValidationError):
    """The gain table lacks an entry required by the topology."""


class NonPositiveNoise(NetworkValidationError):
    """A receiver noise variance is zero, negative, or non-finite."""


class SourceEqualsDest(NetworkValidationError):
    """Source and destination ids coincide."""


class InvalidGain(NetworkValidationError):
    """A stored amplitude or uncertainty parameter is negative or non-finite."""


class InvalidRoutePlan(CovertNetError):
    """A route plan is not a contiguous simple source-to-dest path."""


class NonPositiveBudget(CovertNetError):
    """The covertness budget or blocklength is out of range."""


class UnusableLink(CovertNetError):
    """Operation requires a link with a positive figure of merit."""


class NoFeasiblePath(CovertNetError):
    """No source-to-dest path exists through usable links."""


class InstanceTooLarge(CovertNetError):
    """Exhaustive search refused: the instance exceeds the size guard."""


class PlacementInfeasible(CovertNetError):
    """Adversary placement constraints could not be satisfied."""
