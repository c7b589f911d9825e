import random
from fractions import Fraction
from itertools import combinations

import pytest

from semiramsey.construct import build_P
from semiramsey.homogeneity import is_phi_homogeneous, is_super_order_type_homogeneous
from semiramsey.kernel import PointSequence
from semiramsey.predicates import (
    Coloring,
    Predicate,
    PredicateEvaluationError,
    constant_predicate,
    orientation_predicate,
    second_difference_predicate,
)
from semiramsey.search import (
    SearchResult,
    exists_homogeneous_subsequence,
    exists_super_ot_homogeneous_subsequence,
    homogeneous_subset_search,
    longest_monotone_subsequence,
)

import oracles


def moment_curve(ts, d):
    return PointSequence([tuple(Fraction(t) ** e for e in range(1, d + 1)) for t in ts])


def test_longest_monotone_examples():
    xs = [3, 1, 4, 1, 5, 9, 2, 6]
    r = longest_monotone_subsequence(xs)
    assert len(r.witness) == 4
    picked = [xs[i] for i in r.witness]
    assert all(a < b for a, b in zip(picked, picked[1:]))
    assert longest_monotone_subsequence([1, 2, 3, 7]).witness == (0, 1, 2, 3)
    assert longest_monotone_subsequence([]).found is False


def test_longest_monotone_nonincreasing_keeps_ties():
    r = longest_monotone_subsequence([5, 5, 4, 4, 6])
    assert r.witness == (0, 1, 2, 3)


def test_longest_monotone_found_flag():
    assert longest_monotone_subsequence([1, 3, 2, 4, 5], n=3).found
    assert not longest_monotone_subsequence([2, 3, 1], n=3).found


def test_longest_monotone_matches_enumeration():
    rng = random.Random(0)
    for _ in range(300):
        xs = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(rng.randint(0, 10))]
        r = longest_monotone_subsequence(xs)
        assert len(r.witness) == oracles.longest_monotone_length(xs)
        picked = [xs[i] for i in r.witness]
        assert (all(a < b for a, b in zip(picked, picked[1:]))
                or all(a >= b for a, b in zip(picked, picked[1:])))


def test_phi_search_trivial_cases():
    P = PointSequence([(3,), (1,), (2,), (5,)])
    r = exists_homogeneous_subsequence(P, constant_predicate(True, 2, 1), 4)
    assert r.found and r.witness == (0, 1, 2, 3) and r.exhaustive
    line = PointSequence([(i,) for i in range(1, 7)])
    r = exists_homogeneous_subsequence(line, orientation_predicate(1), 6)
    assert r.found and r.witness == tuple(range(6))


def test_phi_search_requires_n_at_least_arity():
    with pytest.raises(ValueError):
        exists_homogeneous_subsequence(PointSequence([(1,), (2,)]), second_difference_predicate(), 2)


def test_phi_search_propagates_predicate_errors():
    def boom(T):
        raise PredicateEvaluationError("bad tuple", tuple(T))

    with pytest.raises(PredicateEvaluationError):
        exists_homogeneous_subsequence(PointSequence([(1,), (2,), (3,)]), Predicate(2, 1, boom), 2)


def test_phi_search_matches_enumeration():
    rng = random.Random(1)
    preds = {1: [orientation_predicate(1), second_difference_predicate()],
             2: [orientation_predicate(2)]}
    for _ in range(150):
        d = rng.choice([1, 2])
        phi = rng.choice(preds[d])
        M = rng.randint(phi.arity, 9)
        n = rng.randint(phi.arity, min(M, 5))
        pts = oracles.random_points(rng, M, d, bound=5)
        r = exists_homogeneous_subsequence(PointSequence(pts), phi, n)
        assert r.witness == oracles.first_phi_subsequence(pts, phi, n)
        assert r.exhaustive
        if r.found:
            assert is_phi_homogeneous(PointSequence(pts).subsequence(r.witness), phi)


def test_super_ot_search_moment_curve():
    P = moment_curve([1, 2, 4, 5, 7, 9], 3)
    for n in range(2, 7):
        r = exists_super_ot_homogeneous_subsequence(P, n)
        assert r.found and r.witness == tuple(range(n))


def test_super_ot_search_build_P_2_5():
    r = exists_super_ot_homogeneous_subsequence(build_P(2, 5), 5)
    assert r == SearchResult(False, None, r.nodes_explored, True)


def test_super_ot_search_pairs():
    P = PointSequence([(1, 0), (1, 5), (2, 2)])
    assert exists_super_ot_homogeneous_subsequence(P, 2).witness == (0, 2)
    P = PointSequence([(1, 0), (1, 5), (1, 2)])
    r = exists_super_ot_homogeneous_subsequence(P, 2)
    assert not r.found and r.exhaustive


def test_super_ot_search_short_input():
    r = exists_super_ot_homogeneous_subsequence(PointSequence([(1, 2)]), 3)
    assert not r.found and r.exhaustive


def test_super_ot_search_matches_enumeration():
    rng = random.Random(2)
    for _ in range(300):
        d = rng.randint(1, 4)
        M = rng.randint(2, 10)
        n = rng.randint(2, min(M, 5))
        pts = oracles.random_points(rng, M, d, bound=rng.choice([2, 6, 40]))
        r = exists_super_ot_homogeneous_subsequence(PointSequence(pts), n)
        assert r.witness == oracles.first_super_ot_subsequence(pts, n)
        assert r.exhaustive
        if r.found:
            assert is_super_order_type_homogeneous(PointSequence(pts).subsequence(r.witness))


def test_super_ot_search_is_hereditary():
    rng = random.Random(6)
    for _ in range(40):
        pts = oracles.random_points(rng, 9, 2, bound=30)
        P = PointSequence(pts)
        best = max(n for n in range(2, 10) if exists_super_ot_homogeneous_subsequence(P, n).found)
        assert all(exists_super_ot_homogeneous_subsequence(P, n).found for n in range(2, best + 1))


def test_super_ot_search_threads_do_not_change_result():
    P = build_P(2, 7)
    one = exists_super_ot_homogeneous_subsequence(P, 6)
    four = exists_super_ot_homogeneous_subsequence(P, 6, threads=4)
    assert (one.found, one.witness, one.exhaustive) == (four.found, four.witness, four.exhaustive)
    assert one.found


def test_super_ot_search_budget_is_reported():
    r = exists_super_ot_homogeneous_subsequence(build_P(2, 7), 7, node_budget=100)
    assert not r.found and not r.exhaustive and r.nodes_explored >= 100


def c5_coloring():
    edges = {(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)}
    return Coloring(tuple(range(5)), 2, lambda t: 1 if t in edges else 0)


def test_subset_search_examples():
    mono = Coloring(tuple(range(6)), 2, lambda t: 0)
    r = homogeneous_subset_search(mono, 6)
    # six nodes in the color-0 branch, one dead root in the color-1 branch
    assert r.found and r.witness == tuple(range(6)) and r.nodes_explored == 7
    r = homogeneous_subset_search(c5_coloring(), 3)
    assert not r.found and r.exhaustive
    with pytest.raises(ValueError):
        homogeneous_subset_search(mono, 1)


def test_every_coloring_of_k6_has_a_monochromatic_triangle():
    rng = random.Random(7)
    pairs = list(combinations(range(6), 2))
    for _ in range(200):
        table = {p: rng.randint(0, 1) for p in pairs}
        assert homogeneous_subset_search(Coloring.from_table(6, 2, table), 3).found


def test_subset_search_matches_enumeration():
    rng = random.Random(8)
    for _ in range(300):
        N = rng.randint(3, 10)
        k = rng.randint(2, 3)
        n = rng.randint(k, min(N, 5))
        table = {t: rng.randint(0, 1) for t in combinations(range(N), k)}
        r = homogeneous_subset_search(Coloring.from_table(N, k, table), n)
        assert r.witness == oracles.first_homogeneous_subset(table.__getitem__, N, k, n)
        assert r.exhaustive
