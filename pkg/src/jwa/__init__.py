"""Joint weighted averaging of source weights and order weights."""

from .composition import Composition, closure, make_composition, perturb, uniform
from .errors import (
    AggregationError,
    AlphaOutOfRange,
    DegeneratePerturbation,
    DimensionMismatch,
    NegativePart,
    NotPositiveSemiDefinite,
    SumOutOfTolerance,
    TooFewParts,
    ZeroTotal,
)
from .operators import (
    AggregationResult,
    RankPermutation,
    joint_weights,
    jwa,
    lwa,
    owa,
    owawa,
    population_sd,
    rank_permutation,
    sdowa,
)

__version__ = "0.1.0"
