"""Exception hierarchy shared by every module in the package."""


class AggregationError(ValueError):
    """Base class for all validation errors raised by this package."""


class NegativePart(AggregationError):
    pass


class SumOutOfTolerance(AggregationError):
    pass


class TooFewParts(AggregationError):
    pass


class ZeroTotal(AggregationError):
    pass


class DimensionMismatch(AggregationError):
    pass


class DegeneratePerturbation(AggregationError):
    """The two weight vectors share no support, so their perturbation is undefined."""


class AlphaOutOfRange(AggregationError):
    pass


class NotPositiveSemiDefinite(AggregationError):
    pass


class InvalidEvidence(AggregationError):
    pass


class ConfigError(AggregationError):
    pass
