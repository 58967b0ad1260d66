r"""Simplex algebra for convex weight vectors.

A composition here is a vector of non-negative parts summing to one. Both the
source (linear) weights and the order weights of the aggregation operators are
compositions, and the joint weights are obtained by *perturbation*, the
compositional analogue of addition:

.. math::

    (a \oplus b)_i = \frac{a_i b_i}{\sum_k a_k b_k}

The uniform composition is the identity of :func:`perturb`. Unlike classical
Aitchison geometry, zero parts are allowed; only a vanishing normaliser is an
error.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator

import numpy as np

from .errors import (
    DegeneratePerturbation,
    DimensionMismatch,
    NegativePart,
    SumOutOfTolerance,
    TooFewParts,
    ZeroTotal,
)

#: Accepted drift of a user-supplied weight vector away from unit sum.
INPUT_SUM_TOL = 1e-6
#: Normalisers at or below this are treated as zero.
ZERO_TOL = 1e-12


class Composition:
    """Immutable vector of non-negative parts that sum to one.

    Construct through :func:`make_composition`, :func:`closure` or
    :func:`uniform`; the constructor itself trusts its input.
    """

    __slots__ = ("_parts",)

    def __init__(self, parts: np.ndarray):
        arr = np.array(parts, dtype=float)
        arr.setflags(write=False)
        self._parts = arr

    @property
    def parts(self) -> np.ndarray:
        return self._parts

    @property
    def n(self) -> int:
        return self._parts.shape[0]

    def __len__(self) -> int:
        return self.n

    def __iter__(self) -> Iterator[float]:
        return iter(self._parts.tolist())

    def __getitem__(self, i):
        return self._parts[i]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._parts
        return self._parts.astype(dtype)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Composition):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._parts, other._parts))

    def __hash__(self) -> int:
        return hash(self._parts.tobytes())

    def __repr__(self) -> str:
        inner = ", ".join(f"{p:.6g}" for p in self._parts)
        return f"Composition({inner})"

    def reorder(self, order: Iterable[int]) -> "Composition":
        """Return the parts taken in the given index order."""
        idx = np.asarray(list(order), dtype=int)
        if sorted(idx.tolist()) != list(range(self.n)):
            raise DimensionMismatch(f"{idx.tolist()} is not a permutation of 0..{self.n - 1}")
        return Composition(self._parts[idx])

    def is_uniform(self, tol: float = ZERO_TOL) -> bool:
        return bool(np.all(np.abs(self._parts - 1.0 / self.n) <= tol))


def _as_vector(values) -> np.ndarray:
    if isinstance(values, Composition):
        return values.parts
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise DimensionMismatch(f"expected a 1-D vector, got shape {arr.shape}")
    if arr.shape[0] < 2:
        raise TooFewParts(f"a composition needs at least 2 parts, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise NegativePart("parts must be finite")
    if np.any(arr < 0):
        bad = int(np.flatnonzero(arr < 0)[0])
        raise NegativePart(f"part {bad} is negative ({arr[bad]!r})")
    return arr


def make_composition(parts) -> Composition:
    """Validate a weight vector that should already sum to one.

    Small drift (up to ``1e-6``) is removed by dividing through by the actual
    sum, so equal inputs always give bit-identical compositions.

    Raises
    ------
    TooFewParts
        Fewer than two parts.
    NegativePart
        Any part below zero.
    SumOutOfTolerance
        The parts sum to something farther than ``1e-6`` from one.
    """
    arr = _as_vector(parts)
    total = math.fsum(arr)
    if abs(total - 1.0) > INPUT_SUM_TOL:
        raise SumOutOfTolerance(f"parts sum to {total!r}, expected 1 within {INPUT_SUM_TOL:g}")
    return Composition(arr / total)


def closure(raw) -> Composition:
    """Normalise a non-negative vector to unit sum.

    >>> closure([2, 1, 1])
    Composition(0.5, 0.25, 0.25)
    """
    arr = _as_vector(raw)
    total = math.fsum(arr)
    if total <= ZERO_TOL:
        raise ZeroTotal(f"cannot close a vector summing to {total!r}")
    return Composition(arr / total)


def uniform(n: int) -> Composition:
    """The perturbation identity, ``1/n`` in every part."""
    if n < 2:
        raise TooFewParts(f"a composition needs at least 2 parts, got {n}")
    return Composition(np.full(n, 1.0 / n))


def perturb(a, b) -> Composition:
    """Compositional addition of two weight vectors.

    Parameters
    ----------
    a, b : Composition or array_like
        Vectors of the same length. Plain arrays are validated as
        non-negative but need not sum to one, which makes
        ``perturb(closure(x), y) == perturb(x, y)``.

    Raises
    ------
    DimensionMismatch
        The vectors have different lengths.
    DegeneratePerturbation
        Every pairwise product is (numerically) zero.
    """
    pa, pb = _as_vector(a), _as_vector(b)
    if pa.shape != pb.shape:
        raise DimensionMismatch(f"cannot perturb {pa.shape[0]} parts with {pb.shape[0]} parts")
    prod = pa * pb
    total = math.fsum(prod)
    if total <= ZERO_TOL:
        raise DegeneratePerturbation("weight vectors have disjoint support; perturbation undefined")
    return Composition(prod / total)
