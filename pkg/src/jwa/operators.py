r"""Weighted-average aggregation operators.

Five operators are provided, each returning an :class:`AggregationResult`:

``lwa``
    weights attach to sources: :math:`\sum_i w_i x_i`.
``owa``
    weights attach to rank positions of the descending-sorted evidence.
``owawa``
    the convex mix :math:`\alpha\,LWA + (1-\alpha)\,OWA`.
``sdowa``
    the same mix with :math:`\alpha` replaced by
    :math:`sd(w) / (sd(w) + sd(v))`.
``jwa``
    the joint weighted average: the source weights are reordered by the
    evidence ranking, perturbed by the order weights, and applied to the
    sorted evidence.

Order weights are always indexed descending: ``v[0]`` applies to the
maximum. Ties in the evidence are broken by ascending source index, and the
tied groups are reported on the permutation because JWA's value depends on
which source weight meets which rank weight.

The ``*_values`` functions are batched versions over the rows of a 2-D array,
used by the simulation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .composition import ZERO_TOL, Composition, make_composition, perturb
from .errors import (
    AlphaOutOfRange,
    DegeneratePerturbation,
    DimensionMismatch,
    InvalidEvidence,
    TooFewParts,
)

OPERATORS = ("lwa", "owa", "owawa", "sdowa", "jwa")


@dataclass(frozen=True)
class RankPermutation:
    """Descending ranking of the evidence.

    ``order[r]`` is the source index holding rank ``r`` (rank 0 is the
    maximum). ``tie_groups`` lists the sets of sources with equal evidence,
    each in ascending index order.
    """

    order: tuple[int, ...]
    tie_groups: tuple[tuple[int, ...], ...] = ()

    @classmethod
    def identity(cls, n: int) -> "RankPermutation":
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.order)

    def __len__(self) -> int:
        return len(self.order)


@dataclass(frozen=True)
class AggregationResult:
    """An aggregate together with the weights that produced it.

    ``effective_weights[r]`` is the weight applied to source
    ``permutation.order[r]``, so ``value`` equals the inner product of the
    weights with the evidence taken in permutation order.
    """

    value: float
    effective_weights: Composition
    permutation: RankPermutation
    operator_tag: str
    params: Mapping[str, float] = field(default_factory=dict)

    def __float__(self) -> float:
        return self.value


def _evidence(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise InvalidEvidence(f"evidence must be a 1-D vector, got shape {arr.shape}")
    if arr.shape[0] < 2:
        raise TooFewParts(f"need evidence from at least 2 sources, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise InvalidEvidence("evidence values must be finite")
    return arr


def _weights(w, n: int, name: str) -> Composition:
    comp = w if isinstance(w, Composition) else make_composition(w)
    if comp.n != n:
        raise DimensionMismatch(f"{name} has {comp.n} parts but there are {n} sources")
    return comp


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (0.0 <= alpha <= 1.0):
        raise AlphaOutOfRange(f"alpha must lie in [0, 1], got {alpha!r}")
    return alpha


def _bounded(value: float, x: np.ndarray) -> float:
    # rounding can push a convex combination an ulp outside the data range
    return float(min(max(value, x.min()), x.max()))


def rank_permutation(x) -> RankPermutation:
    """Stable descending ranking of ``x``.

    >>> rank_permutation([50, 90, 50])
    RankPermutation(order=(1, 0, 2), tie_groups=((0, 2),))
    """
    arr = _evidence(x)
    order = np.argsort(-arr, kind="stable")
    groups = []
    start = 0
    for r in range(1, len(order) + 1):
        if r == len(order) or arr[order[r]] != arr[order[start]]:
            if r - start > 1:
                groups.append(tuple(sorted(int(i) for i in order[start:r])))
            start = r
    return RankPermutation(tuple(int(i) for i in order), tuple(groups))


def population_sd(parts) -> float:
    """Standard deviation with divisor ``n``."""
    arr = np.asarray(parts, dtype=float)
    if arr.ndim != 1 or arr.shape[0] < 2:
        raise TooFewParts("population_sd needs at least 2 values")
    return float(np.sqrt(np.mean((arr - arr.mean()) ** 2)))


def lwa(x, w) -> AggregationResult:
    xs = _evidence(x)
    wc = _weights(w, xs.shape[0], "linear weights")
    value = _bounded(float(wc.parts @ xs), xs)
    return AggregationResult(value, wc, RankPermutation.identity(xs.shape[0]), "lwa")


def owa(x, v) -> AggregationResult:
    xs = _evidence(x)
    vc = _weights(v, xs.shape[0], "order weights")
    perm = rank_permutation(xs)
    value = _bounded(float(vc.parts @ xs[list(perm.order)]), xs)
    return AggregationResult(value, vc, perm, "owa")


def _blend(x, w, v, g: float, tag: str, params: dict) -> AggregationResult:
    xs = _evidence(x)
    n = xs.shape[0]
    wc = _weights(w, n, "linear weights")
    vc = _weights(v, n, "order weights")
    perm = rank_permutation(xs)
    ordered = xs[list(perm.order)]
    w_pi = wc.parts[list(perm.order)]
    value = g * float(wc.parts @ xs) + (1.0 - g) * float(vc.parts @ ordered)
    blend = Composition(g * w_pi + (1.0 - g) * vc.parts)
    return AggregationResult(_bounded(value, xs), blend, perm, tag, params)


def owawa(x, w, v, alpha: float = 0.5) -> AggregationResult:
    """Convex mix of LWA (weight ``alpha``) and OWA (weight ``1 - alpha``)."""
    alpha = _check_alpha(alpha)
    return _blend(x, w, v, alpha, "owawa", {"alpha": alpha})


def sdowa_blend(w, v) -> float:
    """Share of LWA in the SDOWA mix; 0.5 when both weight vectors are uniform."""
    sw, sv = population_sd(np.asarray(w, dtype=float)), population_sd(np.asarray(v, dtype=float))
    if sw + sv <= ZERO_TOL:
        return 0.5
    return sw / (sw + sv)


def sdowa(x, w, v) -> AggregationResult:
    n = _evidence(x).shape[0]
    g = sdowa_blend(_weights(w, n, "linear weights"), _weights(v, n, "order weights"))
    return _blend(x, w, v, g, "sdowa", {"G": g})


def joint_weights(x, w, v) -> tuple[RankPermutation, Composition]:
    """Ranking of ``x`` and the perturbation of the reordered source weights by ``v``."""
    xs = _evidence(x)
    n = xs.shape[0]
    wc = _weights(w, n, "linear weights")
    vc = _weights(v, n, "order weights")
    perm = rank_permutation(xs)
    return perm, perturb(wc.reorder(perm.order), vc)


def jwa(x, w, v) -> AggregationResult:
    """Joint weighted average of ``x``.

    Parameters
    ----------
    x : array_like
        Evidence, one value per source.
    w : Composition or array_like
        Source weights, aligned with ``x``.
    v : Composition or array_like
        Order weights, ``v[0]`` for the largest value.

    Examples
    --------
    >>> round(jwa([90, 50, 10], [0.6, 0.3, 0.1], [0.45, 0.5, 0.05]).value, 2)
    74.94
    """
    xs = _evidence(x)
    perm, joint = joint_weights(xs, w, v)
    value = _bounded(float(joint.parts @ xs[list(perm.order)]), xs)
    return AggregationResult(value, joint, perm, "jwa")


def aggregate(operator: str, x, w, v, alpha: float = 0.5) -> AggregationResult:
    """Dispatch by operator name."""
    if operator == "lwa":
        return lwa(x, w)
    if operator == "owa":
        return owa(x, v)
    if operator == "owawa":
        return owawa(x, w, v, alpha)
    if operator == "sdowa":
        return sdowa(x, w, v)
    if operator == "jwa":
        return jwa(x, w, v)
    raise ValueError(f"unknown operator {operator!r}; choose from {', '.join(OPERATORS)}")


# -- batched evaluation over rows ----------------------------------------------


def rank_order(X: np.ndarray) -> np.ndarray:
    """Row-wise stable descending argsort."""
    return np.argsort(-X, axis=1, kind="stable")


def lwa_values(X: np.ndarray, w) -> np.ndarray:
    return X @ np.asarray(w, dtype=float)


def owa_values(X: np.ndarray, v, order: np.ndarray | None = None) -> np.ndarray:
    if order is None:
        order = rank_order(X)
    return np.take_along_axis(X, order, axis=1) @ np.asarray(v, dtype=float)


def owawa_values(X: np.ndarray, w, v, alpha: float = 0.5, order: np.ndarray | None = None) -> np.ndarray:
    alpha = _check_alpha(alpha)
    return alpha * lwa_values(X, w) + (1.0 - alpha) * owa_values(X, v, order)


def sdowa_values(X: np.ndarray, w, v, order: np.ndarray | None = None) -> np.ndarray:
    g = sdowa_blend(w, v)
    return g * lwa_values(X, w) + (1.0 - g) * owa_values(X, v, order)


def jwa_values(X: np.ndarray, w, v, order: np.ndarray | None = None) -> np.ndarray:
    if order is None:
        order = rank_order(X)
    w = np.asarray(w, dtype=float)
    prod = w[order] * np.asarray(v, dtype=float)
    total = prod.sum(axis=1)
    if np.any(total <= ZERO_TOL):
        raise DegeneratePerturbation("weight vectors have disjoint support on at least one row")
    return np.einsum("ij,ij->i", prod, np.take_along_axis(X, order, axis=1)) / total
