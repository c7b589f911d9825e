"""Exact scalars, points, determinants and orientation signs.

Coordinates are numbered from 1 in docstrings and error messages (coordinate
``j`` of a point is ``p[j - 1]`` in code).  Row 0 of a determinant matrix is
the all-ones row, row ``j >= 1`` holds coordinate ``j`` of every point.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator, Sequence, Tuple, Union

ExactScalar = Fraction
Point = Tuple[Fraction, ...]
ScalarLike = Union[int, Fraction, str]


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class DimensionError(GeometryError):
    pass


class ArityError(GeometryError):
    pass


class IndexRangeError(GeometryError, IndexError):
    pass


class Sign(enum.IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1

    @classmethod
    def of(cls, value) -> "Sign":
        return cls((value > 0) - (value < 0))


def scalar(value: ScalarLike) -> Fraction:
    """Convert an int, Fraction or ``"p/q"`` string to a canonical Fraction.

    Floats are rejected: they would silently import rounding error.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to an exact scalar")


def point(*coords: ScalarLike) -> Point:
    if not coords:
        raise DimensionError("a point needs at least one coordinate")
    return tuple(scalar(c) for c in coords)


class PointSequence(Sequence[Point]):
    """An ordered, immutable sequence of points of a common dimension."""

    __slots__ = ("_points", "_dim")

    def __init__(self, points: Iterable[Iterable[ScalarLike]], dim: int | None = None):
        pts = tuple(tuple(scalar(c) for c in p) for p in points)
        if dim is None:
            if not pts:
                raise DimensionError("dimension of an empty sequence must be given")
            dim = len(pts[0])
        if dim < 1:
            raise DimensionError(f"dimension must be positive, got {dim}")
        for i, p in enumerate(pts):
            if len(p) != dim:
                raise DimensionError(f"point {i + 1} has {len(p)} coordinates, expected {dim}")
        self._points = pts
        self._dim = dim

    @classmethod
    def _trusted(cls, pts: tuple, dim: int) -> "PointSequence":
        # Skips validation; callers guarantee canonical Fraction tuples.
        obj = cls.__new__(cls)
        obj._points = pts
        obj._dim = dim
        return obj

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def points(self) -> Tuple[Point, ...]:
        return self._points

    def __len__(self) -> int:
        return len(self._points)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return PointSequence._trusted(self._points[index], self._dim)
        return self._points[index]

    def __iter__(self) -> Iterator[Point]:
        return iter(self._points)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSequence):
            return NotImplemented
        return self._dim == other._dim and self._points == other._points

    def __hash__(self) -> int:
        return hash((self._dim, self._points))

    def __repr__(self) -> str:
        body = ", ".join("(" + ", ".join(str(c) for c in p) + ")" for p in self._points[:6])
        more = ", ..." if len(self._points) > 6 else ""
        return f"PointSequence(dim={self._dim}, n={len(self)}, [{body}{more}])"

    def subsequence(self, indices: Iterable[int]) -> "PointSequence":
        """Points at the given 0-based indices, in the given order."""
        return PointSequence._trusted(tuple(self._points[i] for i in indices), self._dim)

    def reversed(self) -> "PointSequence":
        return PointSequence._trusted(self._points[::-1], self._dim)

    def first_coordinates(self) -> Tuple[Fraction, ...]:
        return tuple(p[0] for p in self._points)


def as_sequence(points) -> PointSequence:
    if isinstance(points, PointSequence):
        return points
    return PointSequence(points)


def _det_small(m) -> Fraction:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    a, b, c = m[0]
    d, e, f = m[1]
    g, h, i = m[2]
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def _bareiss(rows: list) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    n = len(rows)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            for r in range(k + 1, n):
                if rows[r][k] != 0:
                    rows[k], rows[r] = rows[r], rows[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = rows[k][k]
        rk = rows[k]
        for i in range(k + 1, n):
            ri = rows[i]
            rik = ri[k]
            for j in range(k + 1, n):
                # exact: Sylvester's identity guarantees divisibility
                ri[j] = (ri[j] * pivot - rik * rk[j]) // prev
            ri[k] = 0
        prev = pivot
    return sign * rows[n - 1][n - 1]


def det_exact(matrix: Sequence[Sequence[ScalarLike]]) -> Fraction:
    """Exact determinant of a square matrix of rationals.

    Each row is scaled by the lcm of its denominators so elimination runs on
    integers (Bareiss); the scaling is divided out at the end.
    """
    n = len(matrix)
    if n == 0:
        raise DimensionError("determinant of an empty matrix")
    rows = [[scalar(x) for x in row] for row in matrix]
    for row in rows:
        if len(row) != n:
            raise DimensionError(f"matrix is not square: row of length {len(row)} in {n}x{n}")
    if n <= 3:
        return _det_small(rows)
    scale = 1
    int_rows = []
    for row in rows:
        den = lcm(*(x.denominator for x in row))
        scale *= den
        int_rows.append([x.numerator * (den // x.denominator) for x in row])
    return Fraction(_bareiss(int_rows), scale)


def _row(p: Point, r: int) -> Fraction:
    return Fraction(1) if r == 0 else p[r - 1]


def _check_det_args(T: Sequence[Point], j: int) -> Tuple[int, int]:
    k = len(T)
    if k == 0:
        raise ArityError("D_j needs at least one point")
    d = len(T[0])
    if any(len(p) != d for p in T):
        raise DimensionError("points of different dimensions")
    if k > d + 1:
        raise ArityError(f"{k} points in dimension {d}: at most {d + 1} allowed")
    if j < k - 1 or j > d:
        raise IndexRangeError(f"row index j={j} outside [{k - 1}, {d}] for {k} points in dimension {d}")
    return k, d


def D_j(T: Sequence[Point], j: int) -> Fraction:
    """Determinant of the k x k matrix whose columns are the k points of T.

    Rows, top to bottom: all ones, coordinates 1 .. k-2, then coordinate j.
    For a single point this is the 1 x 1 matrix holding row j alone, so
    ``D_0(p) == 1`` and ``D_j(p) == p_j``.
    """
    k, _ = _check_det_args(T, j)
    rows = list(range(k - 1)) + [j]
    return det_exact([[_row(p, r) for p in T] for r in rows])


def D_vec(T: Sequence[Point], j: int) -> Tuple[Fraction, ...]:
    """``(D_j(T), D_{j+1}(T), ..., D_d(T))``."""
    k, d = _check_det_args(T, j)
    return tuple(D_j(T, i) for i in range(j, d + 1))


def orientation(T: Sequence[Point]) -> Sign:
    """Sign of the (d+1)-tuple T in R^d: sgn det of columns (1, p_1, ..., p_d)."""
    if not T:
        raise ArityError("orientation of an empty tuple")
    d = len(T[0])
    if len(T) != d + 1:
        raise ArityError(f"orientation in dimension {d} needs {d + 1} points, got {len(T)}")
    return Sign.of(D_j(T, d))


def project(P: PointSequence, j: int) -> PointSequence:
    """Truncate every point to its first j coordinates."""
    P = as_sequence(P)
    if not 1 <= j <= P.dim:
        raise IndexRangeError(f"projection index {j} outside [1, {P.dim}]")
    if j == P.dim:
        return P
    return PointSequence._trusted(tuple(p[:j] for p in P), j)


def leq_one(p: Point, q: Point) -> bool:
    """Strict order on first coordinates: True iff p_1 < q_1."""
    if len(p) != len(q):
        raise DimensionError(f"dimension mismatch: {len(p)} vs {len(q)}")
    return p[0] < q[0]


def sup_distance(p: Point, q: Point) -> Fraction:
    if len(p) != len(q):
        raise DimensionError(f"dimension mismatch: {len(p)} vs {len(q)}")
    return max(abs(a - b) for a, b in zip(p, q))


def integer_coordinates(P) -> Tuple[Tuple[int, ...], ...]:
    """Scale each coordinate column by the lcm of its denominators.

    Every D_j of every sub-tuple is multiplied by a positive constant, so all
    orientation signs (of P and of its projections) are unchanged.
    """
    P = as_sequence(P)
    pts = P.points
    scales = [lcm(*(p[c].denominator for p in pts)) if pts else 1 for c in range(P.dim)]
    return tuple(
        tuple(x.numerator * (s // x.denominator) for x, s in zip(p, scales)) for p in pts
    )


def int_orientation(T: Sequence[Sequence[int]]) -> int:
    """Sign (-1, 0, 1) of the orientation of d+1 integer points in Z^d."""
    d = len(T) - 1
    if d == 1:
        v = T[1][0] - T[0][0]
    elif d == 2:
        (ax, ay), (bx, by), (cx, cy) = T
        v = (bx - ax) * (cy - ay) - (cx - ax) * (by - ay)
    else:
        # translate to T[0]; orientation = det of the d x d difference matrix
        o = T[0]
        v = _bareiss([[p[c] - o[c] for p in T[1:]] for c in range(d)])
    return (v > 0) - (v < 0)
