"""k-ary predicates on points, the colorings they induce, and robustness
certificates.

A predicate may carry an exact ``margin`` (how far a tuple is from flipping)
together with a ``stable(points, eta)`` test: True means every per-point
perturbation of sup-norm at most ``eta`` leaves the value unchanged.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, Hashable, Iterator, Optional, Sequence, Tuple

from .kernel import D_j, DimensionError, Point, as_sequence, sup_distance
from .sigma import sdelta2

Evaluator = Callable[[Sequence[Point]], bool]


class PredicateEvaluationError(ValueError):
    """Evaluation failed on a particular tuple (kept in ``.tuple``)."""

    def __init__(self, message: str, tuple_=None):
        super().__init__(message)
        self.tuple = tuple_


@dataclass(frozen=True)
class Predicate:
    arity: int
    dim: int
    evaluate: Evaluator = field(repr=False)
    margin: Optional[Callable[[Sequence[Point]], Fraction]] = field(default=None, repr=False)
    stable: Optional[Callable[[Sequence[Point], Fraction], bool]] = field(default=None, repr=False)
    name: str = "predicate"

    def __post_init__(self):
        if self.arity < 1 or self.dim < 1:
            raise ValueError("arity and dimension must be positive")

    def __call__(self, *points: Point) -> bool:
        if len(points) != self.arity:
            raise PredicateEvaluationError(
                f"{self.name} takes {self.arity} points, got {len(points)}", points)
        return bool(self.evaluate(points))


@dataclass(frozen=True)
class OrderPredicate(Predicate):
    """Binary predicate read as a strict order ``p < q``."""

    def __post_init__(self):
        super().__post_init__()
        if self.arity != 2:
            raise ValueError("an order predicate is binary")


def _l1(values) -> Fraction:
    return sum((abs(v) for v in values), Fraction(0))


def orientation_predicate(d: int) -> Predicate:
    """(d+1)-ary predicate: the tuple has orientation +1.

    Robustness: with columns c_i = (1, p_i), a perturbation of sup-norm eta
    moves each column by at most d*eta in l1 norm, so by multilinearity and
    Hadamard's bound the determinant moves by less than
    ``prod(|c_i|_1 + d*eta) - prod(|c_i|_1)``.  The tuple is stable when that
    is below ``|det|``.
    """
    if d < 1:
        raise ValueError("dimension must be positive")

    def evaluate(T):
        return D_j(T, d) > 0

    def margin(T):
        return abs(D_j(T, d))

    def stable(T, eta):
        m = abs(D_j(T, d))
        if m == 0:
            return False
        base = Fraction(1)
        grown = Fraction(1)
        for p in T:
            n1 = 1 + _l1(p)
            base *= n1
            grown *= n1 + d * eta
        return grown - base < m

    return Predicate(d + 1, d, evaluate, margin, stable, name=f"orientation{d}")


def first_coord_order(dim: int = 1) -> OrderPredicate:
    """``p < q`` iff p_1 < q_1; stable while twice the perturbation is below the gap."""

    def evaluate(T):
        return T[0][0] < T[1][0]

    def margin(T):
        return abs(T[1][0] - T[0][0])

    def stable(T, eta):
        return 2 * eta < abs(T[1][0] - T[0][0])

    return OrderPredicate(2, dim, evaluate, margin, stable, name="first_coord_order")


def second_difference_predicate() -> Predicate:
    """Ternary 1-D predicate ``x1 - 2*x2 + x3 > 0`` (gaps grow)."""

    def value(T):
        return T[0][0] - 2 * T[1][0] + T[2][0]

    return Predicate(
        3, 1,
        lambda T: value(T) > 0,
        lambda T: abs(value(T)),
        lambda T, eta: 4 * eta < abs(value(T)),
        name="second_difference",
    )


def constant_predicate(value: bool, arity: int, dim: int) -> Predicate:
    return Predicate(
        arity, dim,
        lambda T: value,
        lambda T: Fraction(1),
        lambda T, eta: True,
        name=f"constant_{str(value).lower()}",
    )


def _sigma_chain(T: Sequence[Point]) -> Tuple[Point, ...]:
    out = []
    for x, y in zip(T, T[1:]):
        s = sdelta2(x, y)
        if s.point is None:
            raise PredicateEvaluationError("sdelta undefined: equal first coordinates", tuple(T))
        out.append(s.point)
    return tuple(out)


def step_up_predicate(phi: Predicate, prec: OrderPredicate) -> Predicate:
    """The (k+1)-ary, (d+1)-dimensional predicate induced on consecutive
    difference quotients s_l = sdelta2(x_l, x_{l+1}):

    * phi(s_1, ..., s_k) if s_1 < ... < s_k under ``prec``
    * phi(s_k, ..., s_1) if s_1 > ... > s_k
    * True if s_1 < s_2 > s_3
    * False otherwise

    Quotients are computed exactly; no margin certificate is attached.
    """
    if phi.dim != prec.dim:
        raise DimensionError(f"phi has dimension {phi.dim}, order has {prec.dim}")
    k = phi.arity

    def evaluate(T):
        s = _sigma_chain(T)
        up = [prec.evaluate((a, b)) for a, b in zip(s, s[1:])]
        down = [prec.evaluate((b, a)) for a, b in zip(s, s[1:])]
        if all(up):
            return phi.evaluate(s)
        if all(down):
            return phi.evaluate(s[::-1])
        if k >= 3 and up[0] and down[1]:
            return True
        return False

    return Predicate(k + 1, phi.dim + 1, evaluate, name=f"stepup({phi.name})")


@dataclass(frozen=True)
class Coloring:
    """Map from increasing k-tuples of ground-set positions to colors.

    Positions are 0-based indices into ``ground`` (a sequence of labels, for
    instance range(N) or lexicographically sorted binary vectors).  Colors are
    computed lazily and cached.
    """

    ground: Tuple[Hashable, ...]
    arity: int
    func: Callable[[Tuple[int, ...]], int] = field(repr=False, compare=False)
    colors: Tuple[int, ...] = (0, 1)
    _cache: Dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def ground_size(self) -> int:
        return len(self.ground)

    def __call__(self, idx: Sequence[int]) -> int:
        key = tuple(sorted(idx))
        try:
            return self._cache[key]
        except KeyError:
            c = self.func(key)
            self._cache[key] = c
            return c

    def tuples(self) -> Iterator[Tuple[int, ...]]:
        return combinations(range(len(self.ground)), self.arity)

    def materialize(self) -> Dict[Tuple[int, ...], int]:
        return {t: self(t) for t in self.tuples()}

    @classmethod
    def from_table(cls, N: int, arity: int, table: Dict[Tuple[int, ...], int]) -> "Coloring":
        missing = [t for t in combinations(range(N), arity) if t not in table]
        if missing:
            raise ValueError(f"coloring is not total: {missing[0]} has no color")
        return cls(tuple(range(N)), arity, lambda t: table[t])


def induced_coloring(phi: Predicate, P) -> Coloring:
    """Two-coloring of index k-tuples: 1 where phi holds on the points."""
    P = as_sequence(P)
    if phi.dim != P.dim:
        raise DimensionError(f"predicate dimension {phi.dim} vs points {P.dim}")
    if len(P) < phi.arity:
        raise ValueError(f"{len(P)} points, predicate arity {phi.arity}")
    pts = P.points

    def color(t):
        try:
            return 1 if phi.evaluate(tuple(pts[i] for i in t)) else 0
        except PredicateEvaluationError as exc:
            raise PredicateEvaluationError(f"{exc} at indices {t}", t) from exc

    return Coloring(tuple(range(len(P))), phi.arity, color)


@dataclass(frozen=True)
class RobustnessCheck:
    ok: bool
    status: str  # "certified" | "probabilistic" | "failed"
    witness: Optional[Tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.ok


def certify_robust(phi: Predicate, P, eta: Fraction, *, probes: int = 32,
                   seed: int = 0) -> RobustnessCheck:
    """Check that every increasing tuple keeps its value under per-point
    perturbations of sup-norm at most ``eta``.

    Without a ``stable`` certificate the check falls back to random probing,
    which can only refute, never prove; its success is labelled
    "probabilistic".
    """
    P = as_sequence(P)
    eta = Fraction(eta)
    if eta <= 0:
        raise ValueError("eta must be positive")
    pts = P.points
    if phi.stable is not None:
        for t in combinations(range(len(P)), phi.arity):
            if not phi.stable(tuple(pts[i] for i in t), eta):
                return RobustnessCheck(False, "failed", t)
        return RobustnessCheck(True, "certified")
    rng = random.Random(seed)
    for t in combinations(range(len(P)), phi.arity):
        T = tuple(pts[i] for i in t)
        v = phi.evaluate(T)
        for _ in range(probes):
            moved = tuple(tuple(c + eta * Fraction(rng.randint(-8, 8), 8) for c in p) for p in T)
            try:
                if phi.evaluate(moved) != v:
                    return RobustnessCheck(False, "failed", t)
            except PredicateEvaluationError:
                return RobustnessCheck(False, "failed", t)
    return RobustnessCheck(True, "probabilistic")


def robust_radius(phi: Predicate, P, *, max_halvings: int = 4096) -> Optional[Fraction]:
    """Largest eta = 2**-m (m >= 1) certified by ``phi.stable`` on every
    tuple of P, or None if the predicate is degenerate on P."""
    if phi.stable is None:
        raise ValueError(f"{phi.name} has no stability certificate")
    P = as_sequence(P)
    pts = P.points
    tuples = [tuple(pts[i] for i in t) for t in combinations(range(len(P)), phi.arity)]
    eta = Fraction(1, 2)
    for _ in range(max_halvings):
        if all(phi.stable(T, eta) for T in tuples):
            return eta
        eta /= 2
    return None


def certify_order_inducing(prec: Predicate, P) -> bool:
    """``prec(p_i, p_j)`` holds exactly when i < j, over all ordered pairs."""
    pts = as_sequence(P).points
    n = len(pts)
    for i in range(n):
        for j in range(n):
            if i != j and prec.evaluate((pts[i], pts[j])) != (i < j):
                return False
    return True


def min_pairwise_distance(P) -> Optional[Fraction]:
    pts = as_sequence(P).points
    if len(pts) < 2:
        return None
    return min(sup_distance(p, q) for p, q in combinations(pts, 2))

