"""Difference-quotient maps on point tuples.

``sdelta2(x, y)`` divides the coordinate differences 2..d+1 of two points by
their first-coordinate difference.  ``sdelta`` iterates it over consecutive
windows of a k-tuple; ``sdelta_ratio`` evaluates the same quantity in closed
form as a ratio of determinants.  Undefined values (a vanishing denominator)
are ordinary results, not exceptions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .kernel import (
    ArityError,
    DimensionError,
    Point,
    D_j,
    D_vec,
    as_sequence,
    sup_distance,
)


@dataclass(frozen=True)
class SigmaResult:
    point: Optional[Point]

    @property
    def defined(self) -> bool:
        return self.point is not None

    def __iter__(self):
        # tuple-style unpacking: ``pt, ok = sdelta(...)``
        return iter((self.point, self.defined))


UNDEFINED = SigmaResult(None)


def sdelta2(x: Point, y: Point) -> SigmaResult:
    if len(x) != len(y):
        raise DimensionError(f"dimension mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise DimensionError("sdelta2 needs points of dimension at least 2")
    den = x[0] - y[0]
    if den == 0:
        return UNDEFINED
    return SigmaResult(tuple((a - b) / den for a, b in zip(x[1:], y[1:])))


def _check_tuple(T: Sequence[Point]) -> int:
    k = len(T)
    if k == 0:
        raise ArityError("sdelta of an empty tuple")
    d = len(T[0])
    if any(len(p) != d for p in T):
        raise DimensionError("points of different dimensions")
    if k > d:
        raise ArityError(f"sdelta of {k} points in dimension {d} would have dimension < 1")
    return k


def sdelta(T: Sequence[Point]) -> SigmaResult:
    """Recursive evaluation over windows; memoized, so O(k^2) sdelta2 calls."""
    k = _check_tuple(T)
    T = tuple(T)
    # level[i] holds sdelta of the window T[i : i + size]
    level = [SigmaResult(p) for p in T]
    for _ in range(1, k):
        nxt = []
        for a, b in zip(level, level[1:]):
            if a.point is None or b.point is None:
                nxt.append(UNDEFINED)
            else:
                nxt.append(sdelta2(a.point, b.point))
        level = nxt
    return level[0]


def sdelta_ratio(T: Sequence[Point]) -> SigmaResult:
    """``D_vec(T, k) / D_{k-1}(T)`` componentwise; undefined iff the divisor is 0."""
    k = _check_tuple(T)
    den = D_j(T, k - 1)
    if den == 0:
        return UNDEFINED
    return SigmaResult(tuple(v / den for v in D_vec(T, k)))


def identify_limit(q_a: Point, q_b: Point, P, radius: Fraction) -> Optional[int]:
    """0-based index of the unique point of P within ``radius`` (sup norm) of
    ``sdelta2(q_a, q_b)``; None when undefined, absent or ambiguous."""
    P = as_sequence(P)
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if len(q_a) != P.dim + 1:
        raise DimensionError(f"q points must have dimension {P.dim + 1}, got {len(q_a)}")
    s = sdelta2(q_a, q_b)
    if s.point is None:
        return None
    found = None
    for i, p in enumerate(P):
        if sup_distance(s.point, p) <= radius:
            if found is not None:
                return None
            found = i
    return found
