from fractions import Fraction

from hypothesis import assume, given, settings, strategies as st

from semiramsey.construct import certify_super_general_position
from semiramsey.homogeneity import is_super_monotone, is_super_order_type_homogeneous
from semiramsey.kernel import D_j, PointSequence, orientation
from semiramsey.predicates import induced_coloring, orientation_predicate, robust_radius
from semiramsey.search import exists_super_ot_homogeneous_subsequence
from semiramsey.sigma import sdelta, sdelta_ratio

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
positive = st.fractions(min_value=Fraction(1, 12), max_value=20, max_denominator=12)


def points(n, d):
    return st.lists(st.tuples(*[rationals] * d), min_size=n, max_size=n)


@st.composite
def simplex(draw, max_d=4):
    d = draw(st.integers(1, max_d))
    return draw(points(d + 1, d))


@given(simplex(), st.data())
def test_orientation_alternates_under_transposition(T, data):
    i = data.draw(st.integers(0, len(T) - 2))
    swapped = T[:i] + [T[i + 1], T[i]] + T[i + 2:]
    assert orientation(swapped) == -orientation(T)


@given(simplex(), st.data(), positive)
def test_orientation_invariant_under_translation_and_scaling(T, data, c):
    shift = data.draw(st.tuples(*[rationals] * len(T[0])))
    moved = [tuple(c * (x + s) for x, s in zip(p, shift)) for p in T]
    assert orientation(moved) == orientation(T)


@st.composite
def identity_case(draw):
    k = draw(st.integers(2, 4))
    d = draw(st.integers(k, 5))
    j = draw(st.integers(k, d))
    return k, j, draw(points(k + 1, d))


@given(identity_case())
def test_consecutive_minor_identity(case):
    k, j, T = case
    A, B, mid = T[:-1], T[1:], T[1:-1]
    assert D_j(A, k - 1) * D_j(B, j) - D_j(B, k - 1) * D_j(A, j) == D_j(mid, k - 2) * D_j(T, j)


@st.composite
def sigma_case(draw):
    d = draw(st.integers(1, 5))
    k = draw(st.integers(1, min(d, 4)))
    return draw(points(k, d))


@given(sigma_case())
def test_sdelta_matches_ratio_where_defined(T):
    a = sdelta(T)
    assume(a.defined)
    assert sdelta_ratio(T).point == a.point


@st.composite
def general_sequence(draw, min_len=3, max_len=7):
    d = draw(st.integers(1, 3))
    n = draw(st.integers(max(min_len, d + 1), max_len))
    P = PointSequence(draw(points(n, d)))
    assume(certify_super_general_position(P))
    return P


@settings(max_examples=60)
@given(general_sequence(), st.data())
def test_super_ot_is_hereditary(P, data):
    W = next(r.witness for n in range(len(P), 1, -1)
             if (r := exists_super_ot_homogeneous_subsequence(P, n)).found)
    H = P.subsequence(W)
    assert is_super_order_type_homogeneous(H)
    keep = data.draw(st.lists(st.integers(0, len(H) - 1), min_size=1, unique=True))
    assert is_super_order_type_homogeneous(H.subsequence(sorted(keep)))


@settings(max_examples=60)
@given(general_sequence())
def test_reversal_keeps_both_properties(P):
    R = P.reversed()
    assert is_super_order_type_homogeneous(R) == is_super_order_type_homogeneous(P)
    assert is_super_monotone(R) == is_super_monotone(P)


@settings(max_examples=60)
@given(general_sequence(max_len=8), st.integers(2, 5))
def test_search_result_survives_reversal(P, n):
    assume(n <= len(P))
    a = exists_super_ot_homogeneous_subsequence(P, n)
    b = exists_super_ot_homogeneous_subsequence(P.reversed(), n)
    assert a.found == b.found


@settings(max_examples=40)
@given(st.integers(1, 2).flatmap(lambda d: points(d + 3, d)), st.data())
def test_perturbation_inside_radius_keeps_coloring(pts, data):
    P = PointSequence(pts)
    phi = orientation_predicate(P.dim)
    eta = robust_radius(phi, P)
    assume(eta is not None)
    step = st.fractions(min_value=-1, max_value=1, max_denominator=64)
    moved = PointSequence([tuple(x + eta * data.draw(step) for x in p) for p in P])
    assert induced_coloring(phi, moved).materialize() == induced_coloring(phi, P).materialize()
