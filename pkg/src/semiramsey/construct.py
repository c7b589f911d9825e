"""Tower arithmetic, stepping-up colorings and the stepped-up point sequences.

Binary vectors are tuples of 0/1 ordered lexicographically (Python tuple
order); positions and point indices are 0-based.  The lifting of an N-point
sequence P in R^d is

    q_alpha = sum_i alpha_i * eps**(i+1) * (1, p_i)        (i = 0 .. N-1)

and eps is accepted only after exact certification.
"""

from __future__ import annotations

import logging
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb, lcm
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .kernel import (
    DimensionError,
    PointSequence,
    as_sequence,
    int_orientation,
    integer_coordinates,
    project,
    sup_distance,
)
from .predicates import (
    Coloring,
    OrderPredicate,
    Predicate,
    certify_order_inducing,
    first_coord_order,
    induced_coloring,
    min_pairwise_distance,
    orientation_predicate,
    robust_radius,
    step_up_predicate,
)
from .sigma import identify_limit

log = logging.getLogger(__name__)

BinaryVector = Tuple[int, ...]


class GuardError(RuntimeError):
    """A construction or check would exceed a configured resource limit."""


class PreconditionError(ValueError):
    pass


class CertificationError(RuntimeError):
    """An epsilon certificate check failed; ``check`` names it."""

    def __init__(self, check: str, witness=None, message: str = ""):
        super().__init__(message or f"{check} failed at {witness}")
        self.check = check
        self.witness = witness


@dataclass(frozen=True)
class Limits:
    max_points: int = 2 ** 20
    tuple_budget: int = 10 ** 7
    sample_size: int = 10 ** 4
    max_tower_bits: int = 2 ** 24

    @classmethod
    def from_env(cls) -> "Limits":
        """Defaults overridden by SEMIRAMSEY_MAX_POINTS / _TUPLE_BUDGET /
        _SAMPLE_SIZE / _MAX_TOWER_BITS."""
        kw = {}
        for name in ("max_points", "tuple_budget", "sample_size", "max_tower_bits"):
            raw = os.environ.get("SEMIRAMSEY_" + name.upper())
            if raw:
                kw[name] = int(raw)
        return cls(**kw)


def tower(height: int, x: int, max_bits: Optional[int] = None) -> int:
    """twr_1(x) = x, twr_{i+1}(x) = 2**twr_i(x)."""
    if height < 1 or x < 0:
        raise ValueError("tower needs height >= 1 and x >= 0")
    if max_bits is None:
        max_bits = Limits.from_env().max_tower_bits
    value = x
    for level in range(2, height + 1):
        if value > max_bits:
            size = str(value) if value.bit_length() <= 64 else f"a {len(str(value))}-digit number"
            raise GuardError(
                f"twr_{height}({x}) refused: twr_{level}({x}) = 2**({size}) needs more than "
                f"{max_bits} bits")
        value = 1 << value
    return value


def _tower_fits(height: int, x: int, bound: int) -> bool:
    """Whether twr_height(x) <= bound, without materializing huge values."""
    value = x
    for _ in range(height - 1):
        if value > bound.bit_length():
            return False
        value = 1 << value
    return value <= bound


def _tower_text(height: int, x: int) -> str:
    """Exact value of twr_height(x) as text, as a power of two when large."""
    if height == 1:
        return str(x)
    try:
        exponent = tower(height - 1, x, max_bits=64)
    except GuardError:
        return f"2**twr_{height - 1}({x})"
    return str(1 << exponent) if exponent <= 64 else f"2**{exponent}"


def binary_vectors(N: int) -> List[BinaryVector]:
    """All of {0,1}^N in lexicographic order."""
    return list(product((0, 1), repeat=N))


def delta_index(a: Sequence[int], b: Sequence[int]) -> int:
    """0-based position of the first bit where a and b differ."""
    if len(a) != len(b):
        raise ValueError("binary vectors of different lengths")
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return i
    raise ValueError("delta_index of equal vectors")


def _is_monotone(ds: Sequence[int]) -> bool:
    up = all(x < y for x, y in zip(ds, ds[1:]))
    return up or all(x > y for x, y in zip(ds, ds[1:]))


def stepping_up_coloring(chi: Coloring) -> Coloring:
    """Coloring of (k+1)-tuples of {0,1}^N from a coloring of k-tuples of [N].

    With d_l the first-difference positions of consecutive vectors of a
    lex-sorted tuple: chi of the d's when they are strictly monotone, 1 when
    d_1 < d_2 > d_3, 0 otherwise.  For k = 2 consecutive d's always differ, so
    only the monotone case occurs.
    """
    N = chi.ground_size
    k = chi.arity
    J = tuple(binary_vectors(N))

    def color(t):
        vs = [J[i] for i in t]
        ds = [delta_index(a, b) for a, b in zip(vs, vs[1:])]
        if _is_monotone(ds):
            return chi(tuple(sorted(ds)))
        if k >= 3 and ds[0] < ds[1] > ds[2]:
            return 1
        return 0

    return Coloring(J, k + 1, color)


def step_up_sequence(P, epsilon: Fraction, limits: Optional[Limits] = None) -> PointSequence:
    """The 2^N lifted points q_alpha, in lexicographic order of alpha."""
    P = as_sequence(P)
    limits = limits or Limits.from_env()
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    N = len(P)
    if N >= 64 or 2 ** N > limits.max_points:
        raise GuardError(f"stepping up {N} points gives 2**{N} points; limit is {limits.max_points}")
    d = P.dim
    terms = []
    power = Fraction(1)
    for p in P:
        power *= epsilon
        terms.append((power,) + tuple(power * c for c in p))
    # suffix sums: L holds sums over positions > i, in lex order of those bits
    level = [tuple(Fraction(0) for _ in range(d + 1))]
    for term in reversed(terms):
        level = level + [tuple(a + b for a, b in zip(v, term)) for v in level]
    return PointSequence._trusted(tuple(level), d + 1)


@dataclass(frozen=True)
class EpsilonCertificate:
    epsilon: Fraction
    radius: Fraction
    checks: Dict[str, str]

    @property
    def is_proof(self) -> bool:
        """Every check was exhaustive (or the limit bound was proven)."""
        limit_ok = (self.checks.get("limit_identification") == "exhaustive"
                    or self.checks.get("limit_bound") == "proven")
        return (self.checks.get("order_agreement") == "exhaustive" and limit_ok
                and self.checks.get("coloring_fidelity") in ("exhaustive", "not_applicable"))

    def to_dict(self) -> dict:
        return {
            "epsilon": f"{self.epsilon.numerator}/{self.epsilon.denominator}",
            "radius": f"{self.radius.numerator}/{self.radius.denominator}",
            "checks": dict(self.checks),
            "proof": self.is_proof,
        }


Mode = Union[str, Tuple[str, int]]


def _plan(mode: Mode, total: int, limits: Limits) -> Tuple[bool, int]:
    """(exhaustive?, sample size) for a check over ``total`` items."""
    if mode == "exhaustive":
        if total <= limits.tuple_budget:
            return True, total
        return False, min(limits.sample_size, total)
    kind, s = mode
    if kind != "sampled":
        raise ValueError(f"unknown certification mode {mode!r}")
    return False, min(s, total)


def _random_tuples(rng: random.Random, n: int, k: int, count: int):
    for _ in range(count):
        yield tuple(sorted(rng.sample(range(n), k)))


def limit_bound(P, epsilon: Fraction) -> Optional[Fraction]:
    """Upper bound on |sdelta2(q_a, q_b) - p_delta(a,b)| (sup norm) over all
    pairs, valid for epsilon < 1/2: eps * W / (1 - 2 eps) with W the largest
    pairwise sup distance in P."""
    if epsilon >= Fraction(1, 2):
        return None
    W = max((sup_distance(p, q) for p, q in combinations(as_sequence(P).points, 2)),
            default=Fraction(0))
    return epsilon * W / (1 - 2 * epsilon)


def _common_denominator(points) -> Tuple[int, Tuple[Tuple[int, ...], ...]]:
    L = lcm(*(c.denominator for p in points for c in p))
    return L, tuple(tuple(c.numerator * (L // c.denominator) for c in p) for p in points)


def _first_misidentified(Q: PointSequence, P: PointSequence, radius: Fraction, pairs, J):
    """First pair whose quotient is farther than ``radius`` from p_delta.

    Integer-only restatement of identify_limit for radius < min distance / 2,
    where the point within the radius, if any, is unique by the triangle
    inequality: |(x_c - y_c) L_P - P_c (x_1 - y_1)| * r_den
    <= r_num * L_P * |x_1 - y_1| for every coordinate c.
    """
    _, qi = _common_denominator(Q.points)
    LP, pi = _common_denominator(P.points)
    rn, rd = radius.numerator, radius.denominator
    for a, b in pairs:
        x, y = qi[a], qi[b]
        dx = x[0] - y[0]
        if dx == 0:
            return (a, b)
        p = pi[delta_index(J[a], J[b])]
        lim = rn * LP * abs(dx)
        for c in range(1, len(x)):
            if abs((x[c] - y[c]) * LP - p[c - 1] * dx) * rd > lim:
                return (a, b)
    return None


def certify_epsilon(P, phi: Optional[Predicate], prec: OrderPredicate, epsilon: Fraction,
                    mode: Mode = "exhaustive", *, radius: Optional[Fraction] = None,
                    seed: int = 0, limits: Optional[Limits] = None,
                    Q: Optional[PointSequence] = None) -> EpsilonCertificate:
    """Certify that the lift of P with this epsilon behaves as in the limit.

    Checks, in order:
      order_agreement       first coordinates of Q increase along lex order
      limit_identification  identify_limit(q_a, q_b, P, radius) == delta(a, b)
      coloring_fidelity     the stepped-up predicate colors Q exactly as the
                            stepping-up coloring of phi's coloring of P
                            (skipped when phi is None)

    ``radius`` defaults to half the minimum pairwise sup distance in P.  The
    analytic ``limit_bound`` is recorded as "proven" when it fits inside the
    radius; it covers every pair even when the pair check is sampled.  A
    caller-supplied ``Q`` (for instance a perturbed lift) is checked as given
    and gets no analytic bound.
    Raises CertificationError naming the first failing check.
    """
    P = as_sequence(P)
    limits = limits or Limits.from_env()
    epsilon = Fraction(epsilon)
    if not certify_order_inducing(prec, P):
        raise PreconditionError("order predicate is not order-inducing on P")
    if radius is None:
        md = min_pairwise_distance(P)
        radius = md / 2 if md is not None else Fraction(1)
    lifted = Q is None
    if lifted:
        Q = step_up_sequence(P, epsilon, limits)
    elif len(Q) != 2 ** len(P) or Q.dim != P.dim + 1:
        raise DimensionError("Q is not a lift of P")
    qs = Q.points
    M = len(qs)
    J = binary_vectors(len(P))
    checks: Dict[str, str] = {}

    for i in range(1, M):
        if not qs[i - 1][0] < qs[i][0]:
            raise CertificationError("order_agreement", (i - 1, i))
    # consecutive strict increase covers all pairs by transitivity
    checks["order_agreement"] = "exhaustive"

    md = min_pairwise_distance(P)
    if lifted:
        bound = limit_bound(P, epsilon)
        proven = bound is not None and bound <= radius and (md is None or 2 * radius <= md)
        checks["limit_bound"] = "proven" if proven else "not_proven"
    else:
        # the analytic bound speaks about the exact lift only
        checks["limit_bound"] = "not_applicable"

    rng = random.Random(seed)
    exhaustive, s = _plan(mode, comb(M, 2), limits)
    pairs = combinations(range(M), 2) if exhaustive else _random_tuples(rng, M, 2, s)
    if md is not None and 2 * radius < md:
        bad = _first_misidentified(Q, P, radius, pairs, J)
    else:
        bad = next((ab for ab in pairs
                    if identify_limit(qs[ab[0]], qs[ab[1]], P, radius)
                    != delta_index(J[ab[0]], J[ab[1]])), None)
    if bad is not None:
        raise CertificationError("limit_identification", bad)
    checks["limit_identification"] = "exhaustive" if exhaustive else f"sampled({s})"

    if phi is None:
        checks["coloring_fidelity"] = "not_applicable"
    else:
        k = phi.arity
        psi = step_up_predicate(phi, prec)
        target = stepping_up_coloring(induced_coloring(phi, P))
        exhaustive, s = _plan(mode, comb(M, k + 1), limits)
        tuples = combinations(range(M), k + 1) if exhaustive else _random_tuples(rng, M, k + 1, s)
        for t in tuples:
            got = 1 if psi.evaluate(tuple(qs[i] for i in t)) else 0
            if got != target(t):
                raise CertificationError("coloring_fidelity", t)
        checks["coloring_fidelity"] = "exhaustive" if exhaustive else f"sampled({s})"
    return EpsilonCertificate(epsilon, radius, checks)


def _robust_or_raise(pred: Predicate, P: PointSequence) -> None:
    if pred.stable is not None and robust_radius(pred, P, max_halvings=256) is None:
        raise PreconditionError(f"{pred.name} is not robust on P (a tuple has zero margin)")


def choose_epsilon(P, phi: Optional[Predicate], prec: OrderPredicate,
                   mode: Mode = "exhaustive", *, radius: Optional[Fraction] = None,
                   max_iter: int = 12, limits: Optional[Limits] = None,
                   return_certificate: bool = False):
    """Try eps = 1/2, 1/4, 1/16, 1/256, ... (squaring the denominator) until
    certify_epsilon passes."""
    P = as_sequence(P)
    if not certify_order_inducing(prec, P):
        raise PreconditionError("order predicate is not order-inducing on P")
    _robust_or_raise(prec, P)
    if phi is not None:
        _robust_or_raise(phi, P)
    eps = Fraction(1, 2)
    last = None
    for _ in range(max_iter):
        try:
            cert = certify_epsilon(P, phi, prec, eps, mode, radius=radius, limits=limits)
        except CertificationError as exc:
            log.debug("epsilon %s rejected: %s", eps, exc)
            last = exc
            eps = Fraction(1, eps.denominator ** 2)
            continue
        return cert if return_certificate else cert.epsilon
    raise CertificationError(
        "choose_epsilon", getattr(last, "witness", None),
        f"no certified epsilon after {max_iter} squarings (last failure: {last})")


def certify_general_position(P, budget: Optional[int] = None) -> bool:
    """Every (d+1)-tuple has nonzero orientation."""
    P = as_sequence(P)
    if budget is None:
        budget = Limits.from_env().tuple_budget
    d = P.dim
    total = comb(len(P), d + 1)
    if total > budget:
        raise GuardError(f"{total} tuples to check; budget is {budget}")
    pts = integer_coordinates(P)
    return all(int_orientation([pts[i] for i in t]) != 0
               for t in combinations(range(len(P)), d + 1))


def certify_super_general_position(P, budget: Optional[int] = None) -> bool:
    """Every projection pi_j(P), j = 1..d, is in general position."""
    P = as_sequence(P)
    if budget is None:
        budget = Limits.from_env().tuple_budget
    total = sum(comb(len(P), j + 1) for j in range(1, P.dim + 1))
    if total > budget:
        raise GuardError(f"{total} tuples to check; budget is {budget}")
    return all(certify_general_position(project(P, j), budget) for j in range(1, P.dim + 1))


@dataclass(frozen=True)
class PerturbedSequence:
    points: PointSequence
    certified: Optional[bool]  # None: over the tuple budget, not checked


def perturb_general_position(P, eta: Fraction, theta: Fraction = Fraction(1, 2),
                             budget: Optional[int] = None) -> PerturbedSequence:
    """Add eta * theta**((i-1)*d + j) to coordinate j of point i (1-based).

    All offsets are distinct and below eta.  The result is checked for
    general position when the tuple count fits the budget.
    """
    P = as_sequence(P)
    eta = Fraction(eta)
    theta = Fraction(theta)
    if eta < 0:
        raise ValueError("eta must be nonnegative")
    if not 0 < theta < 1:
        raise ValueError("theta must lie in (0, 1)")
    d = P.dim
    if eta == 0:
        out = P
    else:
        pts = []
        off = eta
        for p in P:
            row = []
            for c in p:
                off *= theta
                row.append(c + off)
            pts.append(tuple(row))
        out = PointSequence._trusted(tuple(pts), d)
    try:
        ok = certify_general_position(out, budget)
    except GuardError:
        ok = None
    return PerturbedSequence(out, ok)


def super_ot_radius(P) -> Optional[Fraction]:
    """A radius r such that moving every point of P by at most r (sup norm)
    keeps the sign of every projected (j+1)-tuple, j = 1..d, and the strict
    first-coordinate order; r is also at most half the minimum pairwise
    distance.  None if P is degenerate in some projection."""
    P = as_sequence(P)
    radii = []
    for j in range(1, P.dim + 1):
        if len(P) >= j + 1:
            r = robust_radius(orientation_predicate(j), project(P, j))
            if r is None:
                return None
            radii.append(r)
    if len(P) >= 2:
        r = robust_radius(first_coord_order(P.dim), P)
        if r is None:
            return None
        radii.append(r)
        radii.append(min_pairwise_distance(P) / 2)
    return min(radii) if radii else Fraction(1, 2)


@dataclass(frozen=True)
class LevelRecord:
    """How one level of the tower construction was obtained."""

    dim: int
    size: int
    certificate: Optional[EpsilonCertificate] = None
    general_position: Optional[bool] = None  # None: over the tuple budget
    perturbation: Optional[Fraction] = None

    def to_dict(self) -> dict:
        out = {"dim": self.dim, "size": self.size,
               "general_position": ("unchecked" if self.general_position is None
                                    else self.general_position)}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_dict()
        if self.perturbation is not None:
            out["perturbation"] = f"{self.perturbation.numerator}/{self.perturbation.denominator}"
        return out


@dataclass(frozen=True)
class Construction:
    d: int
    n: int
    points: PointSequence
    levels: Tuple[LevelRecord, ...]

    @property
    def is_proof(self) -> bool:
        return all(lv.certificate is None or lv.certificate.is_proof for lv in self.levels)

    def to_dict(self) -> dict:
        return {"d": self.d, "n": self.n, "size": len(self.points),
                "levels": [lv.to_dict() for lv in self.levels], "proof": self.is_proof}


def _gp_status(P: PointSequence, limits: Limits) -> Optional[bool]:
    try:
        return certify_super_general_position(P, limits.tuple_budget)
    except GuardError:
        return None


def construct_P(d: int, n: int, mode: Mode = "exhaustive",
                limits: Optional[Limits] = None) -> Construction:
    """Build the sequence of twr_d(n - d) points in R^d with no
    super-order-type homogeneous subsequence of length n.

    Level 1 is (1, 2, ..., n-d).  Each further level lifts the previous one
    with its own certified epsilon.  The limit radius is ``super_ot_radius``
    of the base, so every sdelta of two lifted points lies close enough to
    its base point to reproduce all projected orientation signs and the
    first-coordinate order.  A level found out of general position is
    perturbed and recertified.
    """
    if d < 1 or n < d + 1:
        raise ValueError(f"need d >= 1 and n >= d + 1, got d={d}, n={n}")
    limits = limits or Limits.from_env()
    if not _tower_fits(d, n - d, limits.max_points):
        raise GuardError(f"twr_{d}({n - d}) = {_tower_text(d, n - d)} points exceed the "
                         f"limit of {limits.max_points}")
    P = PointSequence([[i] for i in range(1, n - d + 1)], 1)
    levels = [LevelRecord(1, len(P), None, True)]
    for dim in range(2, d + 1):
        radius = super_ot_radius(P)
        if radius is None:
            raise PreconditionError(f"level {dim - 1} is degenerate; cannot lift it")
        prec = first_coord_order(P.dim)
        cert = choose_epsilon(P, None, prec, mode, radius=radius, limits=limits,
                              return_certificate=True)
        Q = step_up_sequence(P, cert.epsilon, limits)
        gp = _gp_status(Q, limits)
        eta = None
        if gp is False:
            Q, cert, eta = _perturb_level(P, Q, cert, mode, limits)
            gp = True
        levels.append(LevelRecord(dim, len(Q), cert, gp, eta))
        P = Q
    return Construction(d, n, P, tuple(levels))


def _perturb_level(P, Q, cert, mode, limits, attempts: int = 8):
    prec = first_coord_order(P.dim)
    eta = cert.epsilon ** (len(P) + 1) * cert.radius / 16
    for _ in range(attempts):
        moved = perturb_general_position(Q, eta).points
        if _gp_status(moved, limits):
            try:
                new_cert = certify_epsilon(P, None, prec, cert.epsilon, mode,
                                           radius=cert.radius, limits=limits, Q=moved)
            except CertificationError:
                pass
            else:
                return moved, new_cert, eta
        eta /= 16
    raise CertificationError("general_position", None,
                             f"no certified general-position perturbation after {attempts} tries")


def build_P(d: int, n: int, mode: Mode = "exhaustive",
            limits: Optional[Limits] = None) -> PointSequence:
    return construct_P(d, n, mode, limits).points
