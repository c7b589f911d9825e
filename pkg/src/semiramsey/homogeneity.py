"""Order-type, super-order-type, monotonicity and predicate homogeneity checks.

Point indices in witnesses are 0-based.  A zero orientation never counts as
homogeneous: it is reported as the violating tuple.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Tuple

from .kernel import D_j, IndexRangeError, PointSequence, Sign, as_sequence, project
from .predicates import Predicate
from .sigma import sdelta2


class Status(str, enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NOT_HOMOGENEOUS = "not_homogeneous"


@dataclass(frozen=True)
class HomogeneityVerdict:
    status: Status
    witness: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if (self.witness is not None) != (self.status is Status.NOT_HOMOGENEOUS):
            raise ValueError("a witness accompanies exactly the not_homogeneous status")

    @property
    def homogeneous(self) -> bool:
        return self.status is not Status.NOT_HOMOGENEOUS

    def __bool__(self) -> bool:
        return self.homogeneous


def _verdict(values, tuples) -> HomogeneityVerdict:
    # values yields +1 / -1 / 0 per tuple, in lexicographic tuple order
    first = None
    for t, v in zip(tuples, values):
        if v == 0:
            return HomogeneityVerdict(Status.NOT_HOMOGENEOUS, t)
        if first is None:
            first = v
        elif v != first:
            return HomogeneityVerdict(Status.NOT_HOMOGENEOUS, t)
    return HomogeneityVerdict(Status.NEGATIVE if first == -1 else Status.POSITIVE)


def is_order_type_homogeneous(P) -> HomogeneityVerdict:
    """All increasing (d+1)-tuples share one nonzero orientation.

    The witness is the lexicographically least tuple that is degenerate or
    whose sign differs from that of the first tuple.
    """
    P = as_sequence(P)
    d = P.dim
    if len(P) < d + 1:
        raise ValueError(f"{len(P)} points: order type in dimension {d} needs at least {d + 1}")
    pts = P.points
    tuples = list(combinations(range(len(P)), d + 1))
    values = (Sign.of(D_j([pts[i] for i in t], d)) for t in tuples)
    return _verdict(values, tuples)


def _check_k(P: PointSequence, k: int) -> None:
    if not 1 <= k <= P.dim:
        raise IndexRangeError(f"level k={k} outside [1, {P.dim}]")


def is_k_order_type_homogeneous(P, k: int) -> bool:
    """pi_j(P) is order-type homogeneous for every j <= k (levels with fewer
    than j+1 points hold vacuously)."""
    P = as_sequence(P)
    _check_k(P, k)
    for j in range(1, k + 1):
        if len(P) >= j + 1 and not is_order_type_homogeneous(project(P, j)):
            return False
    return True


def is_super_order_type_homogeneous(P) -> bool:
    P = as_sequence(P)
    return is_k_order_type_homogeneous(P, P.dim)


def monotonicity_witness(P, k: int) -> Optional[Tuple[int, int]]:
    """First failure ``(j, i)`` of k-monotonicity, or None if P is k-monotone.

    At level j the chain is sdelta of the windows ``P[i:i+j]``; ``i`` is the
    0-based start of the window where the chain stops being strictly
    monotone in the first coordinate (it is compared with window ``i - 1``).
    Levels are checked in order, so every quotient formed at level j has a
    nonzero denominator.
    """
    P = as_sequence(P)
    _check_k(P, k)
    chain = list(P.points)
    for j in range(1, k + 1):
        if j > 1:
            # sdelta of j-windows from sdelta of (j-1)-windows; all defined
            # because level j-1 was strictly monotone
            chain = [sdelta2(a, b).point for a, b in zip(chain, chain[1:])]
        direction = 0
        for i in range(1, len(chain)):
            step = (chain[i][0] > chain[i - 1][0]) - (chain[i][0] < chain[i - 1][0])
            if step == 0 or (direction and step != direction):
                return (j, i)
            direction = step
    return None


def is_k_monotone(P, k: int) -> bool:
    return monotonicity_witness(P, k) is None


def is_super_monotone(P) -> bool:
    P = as_sequence(P)
    return is_k_monotone(P, P.dim)


def is_phi_homogeneous(P, phi: Predicate) -> HomogeneityVerdict:
    P = as_sequence(P)
    if len(P) < phi.arity:
        raise ValueError(f"{len(P)} points, predicate arity {phi.arity}")
    pts = P.points
    tuples = list(combinations(range(len(P)), phi.arity))
    values = (1 if phi.evaluate(tuple(pts[i] for i in t)) else -1 for t in tuples)
    return _verdict(values, tuples)


def is_markov_system(P) -> bool:
    """Every projection pi_j(P) has only positively oriented (j+1)-tuples.

    This is the all-positive normalization; sequences that become Markov only
    after negating a coordinate are reported False.
    """
    P = as_sequence(P)
    for j in range(1, P.dim + 1):
        if len(P) >= j + 1 and is_order_type_homogeneous(project(P, j)).status is not Status.POSITIVE:
            return False
    return True
