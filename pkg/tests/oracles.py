"""Slow, independent reference implementations used as test oracles.

Nothing here calls into the library's determinant or search code.
"""

from fractions import Fraction
from itertools import combinations
import random


def cofactor_det(m):
    n = len(m)
    if n == 1:
        return Fraction(m[0][0])
    total = Fraction(0)
    for c in range(n):
        if m[0][c] == 0:
            continue
        minor = [row[:c] + row[c + 1:] for row in m[1:]]
        total += (-1) ** c * Fraction(m[0][c]) * cofactor_det(minor)
    return total


def d_j(T, j):
    k = len(T)
    if k == 1:
        return Fraction(1) if j == 0 else T[0][j - 1]
    rows = [[Fraction(1)] * k]
    rows += [[p[r] for p in T] for r in range(k - 2)]
    rows.append([p[j - 1] for p in T])
    return cofactor_det(rows)


def sign(x):
    return (x > 0) - (x < 0)


def orient(T):
    d = len(T[0])
    return sign(cofactor_det([[Fraction(1)] * (d + 1)] + [[p[r] for p in T] for r in range(d)]))


def sdelta(T):
    """Recursive definition: sdelta(p) = p, sdelta(p1..pk+1) =
    sdelta2(sdelta(p1..pk), sdelta(p2..pk+1)); None if undefined."""
    if len(T) == 1:
        return tuple(T[0])
    a, b = sdelta(T[:-1]), sdelta(T[1:])
    if a is None or b is None or a[0] == b[0]:
        return None
    return tuple((x - y) / (a[0] - b[0]) for x, y in zip(a[1:], b[1:]))


def ot_sign(pts):
    """Common nonzero orientation of all increasing (d+1)-tuples, else 0."""
    d = len(pts[0])
    signs = {orient([pts[i] for i in t]) for t in combinations(range(len(pts)), d + 1)}
    if len(signs) == 1 and 0 not in signs:
        return signs.pop()
    return 0


def super_ot(pts):
    d = len(pts[0])
    for j in range(1, d + 1):
        if len(pts) >= j + 1 and ot_sign([p[:j] for p in pts]) == 0:
            return False
    return True


def first_super_ot_subsequence(pts, n):
    for c in combinations(range(len(pts)), n):
        if super_ot([pts[i] for i in c]):
            return c
    return None


def first_phi_subsequence(pts, phi, n):
    for c in combinations(range(len(pts)), n):
        vals = {bool(phi.evaluate(tuple(pts[i] for i in t))) for t in combinations(c, phi.arity)}
        if len(vals) <= 1:
            return c
    return None


def first_homogeneous_subset(color, N, k, n):
    for c in combinations(range(N), n):
        if len({color(t) for t in combinations(c, k)}) <= 1:
            return c
    return None


def largest_homogeneous(color, N, k):
    best = min(N, k - 1)
    for n in range(k, N + 1):
        if first_homogeneous_subset(color, N, k, n) is None:
            break
        best = n
    return best


def longest_monotone_length(xs):
    n = len(xs)
    best = 0
    for mask in range(1 << n):
        sub = [xs[i] for i in range(n) if mask >> i & 1]
        if len(sub) <= best:
            continue
        if all(a < b for a, b in zip(sub, sub[1:])) or all(a >= b for a, b in zip(sub, sub[1:])):
            best = len(sub)
    return best


def random_rational(rng: random.Random, bound=9, dens=(1, 2, 3, 5, 7)):
    return Fraction(rng.randint(-bound, bound), rng.choice(dens))


def random_points(rng: random.Random, n, d, **kw):
    return [tuple(random_rational(rng, **kw) for _ in range(d)) for _ in range(n)]
