"""Exact searches for homogeneous subsequences and subsets.

All searches are depth-first over increasing index lists in lexicographic
order, so the first witness found is the lexicographically least one.  A
partial list is extended by index ``i`` only after every new tuple that
contains ``i`` has been checked; this is sound because homogeneity is
hereditary.  Absence is claimed (``found=False, exhaustive=True``) only when
the whole tree was explored within the node budget.
"""

from __future__ import annotations

import os
from bisect import bisect_left, bisect_right
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .kernel import _bareiss, as_sequence, integer_coordinates
from .predicates import Coloring, Predicate

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

DEFAULT_NODE_BUDGET = 10 ** 9


@dataclass(frozen=True)
class SearchResult:
    found: bool
    witness: Optional[Tuple[int, ...]]
    nodes_explored: int
    exhaustive: bool

    def to_dict(self) -> dict:
        return {
            "found": self.found,
            "witness": list(self.witness) if self.witness is not None else None,
            "nodes_explored": self.nodes_explored,
            "exhaustive": self.exhaustive,
        }


def longest_monotone_subsequence(xs: Sequence, n: Optional[int] = None) -> SearchResult:
    """Longest subsequence that is strictly increasing or nonincreasing.

    Patience sorting with back-pointers, once per direction; ties in length
    go to the increasing one.  ``found`` is ``len(witness) >= n`` when n is
    given, otherwise whether the input is nonempty.
    """
    xs = list(xs)

    def patience(keys, strict):
        place = bisect_left if strict else bisect_right
        tails, tail_idx = [], []
        back = [-1] * len(keys)
        for i, x in enumerate(keys):
            j = place(tails, x)
            if j == len(tails):
                tails.append(x)
                tail_idx.append(i)
            else:
                tails[j] = x
                tail_idx[j] = i
            back[i] = tail_idx[j - 1] if j > 0 else -1
        out = []
        i = tail_idx[-1] if tail_idx else -1
        while i >= 0:
            out.append(i)
            i = back[i]
        return tuple(reversed(out))

    inc = patience(xs, strict=True)
    dec = patience([-x for x in xs], strict=False)
    best = inc if len(inc) >= len(dec) else dec
    found = len(best) >= n if n is not None else bool(best)
    return SearchResult(found, best, len(xs), True)


def _hereditary_dfs(M: int, n: int, k: int, value: Callable[[Tuple[int, ...]], object],
                    target, budget: int) -> Tuple[Optional[Tuple[int, ...]], int, bool]:
    """Least increasing n-list over range(M) all of whose k-subsets have
    ``value == target``.  Returns (witness, nodes, completed)."""
    nodes = 0
    path = []

    def ok(i):
        for S in combinations(path, k - 1):
            if value(S + (i,)) != target:
                return False
        return True

    def rec(start):
        nonlocal nodes
        if len(path) == n:
            return True
        # leave room for the remaining n - len(path) - 1 indices
        for i in range(start, M - (n - len(path)) + 1):
            if nodes >= budget:
                return None
            if ok(i):
                nodes += 1
                path.append(i)
                r = rec(i + 1)
                if r is not False:
                    return r
                path.pop()
        return False

    r = rec(0)
    if r is True:
        return tuple(path), nodes, True
    return None, nodes, r is False


def _merge_branches(M, n, k, value, targets, budget) -> SearchResult:
    best = None
    nodes = 0
    complete = True
    for target in targets:
        w, used, done = _hereditary_dfs(M, n, k, value, target, budget - nodes)
        nodes += used
        complete &= done
        if w is not None and (best is None or w < best):
            best = w
    if best is not None and not complete:
        # a truncated branch might hold a smaller witness
        return SearchResult(True, best, nodes, False)
    return SearchResult(best is not None, best, nodes, complete)


def exists_homogeneous_subsequence(P, phi: Predicate, n: int,
                                   node_budget: int = DEFAULT_NODE_BUDGET) -> SearchResult:
    """A length-n subsequence on which phi is constant over all increasing
    arity-tuples; the all-true and all-false branches are searched separately
    and the lexicographically smaller witness wins."""
    P = as_sequence(P)
    if n < phi.arity:
        raise ValueError(f"n={n} is below the predicate arity {phi.arity}")
    pts = P.points

    @lru_cache(maxsize=None)
    def value(t):
        return bool(phi.evaluate(tuple(pts[i] for i in t)))

    return _merge_branches(len(P), n, phi.arity, value, (True, False), node_budget)


def homogeneous_subset_search(chi: Coloring, n: int,
                              node_budget: int = DEFAULT_NODE_BUDGET) -> SearchResult:
    """An n-subset of the ground set whose arity-subsets all share one color;
    one branch per color."""
    if n < chi.arity:
        raise ValueError(f"n={n} is below the coloring arity {chi.arity}")
    return _merge_branches(chi.ground_size, n, chi.arity, chi, tuple(chi.colors), node_budget)


# --- super-order-type search ----------------------------------------------
#
# For a (k+1)-tuple T = (p_1..p_{k+1}) with halves A = (p_1..p_k),
# B = (p_2..p_{k+1}) and middle (p_2..p_k), the determinant identity
#   D_{k-1}(A) D_k(B) - D_{k-1}(B) D_k(A) = D_{k-2}(middle) D_k(T)
# gives
#   sgn D_k(T) = sgn D_{k-2}(middle) sgn D_{k-1}(A) sgn D_{k-1}(B)
#                * sgn(s_k(B) - s_k(A)),   s_k = D_k / D_{k-1}.
# sgn D_k(T) is the orientation of pi_k(T).  Inside a partial sequence that
# is consistent on levels < k the first three factors are known signs, so a
# level-k check is one comparison of precomputed exact ranks of s_k.


def _colex_binom(M: int, kmax: int) -> np.ndarray:
    b = np.zeros((M + 1, kmax + 2), dtype=np.int64)
    for a in range(M + 1):
        for r in range(kmax + 2):
            b[a, r] = comb(a, r)
    return b


def _level_values(X, k: int):
    """(numerators, denominators) of s_k over all k-subsets, lex order."""
    M = len(X)
    if k == 1:
        return [p[0] for p in X], [1] * M
    A = np.empty((M, len(X[0])), dtype=object)
    for i, p in enumerate(X):
        A[i, :] = p
    C = np.fromiter(combinations(range(M), k), dtype=np.dtype((np.int64, k)), count=comb(M, k))
    if k == 2:
        a, b = A[C[:, 0]], A[C[:, 1]]
        return list(b[:, 1] - a[:, 1]), list(b[:, 0] - a[:, 0])
    if k == 3:
        a, b, c = A[C[:, 0]], A[C[:, 1]], A[C[:, 2]]
        bx, cx = b[:, 0] - a[:, 0], c[:, 0] - a[:, 0]
        dens = bx * (c[:, 1] - a[:, 1]) - cx * (b[:, 1] - a[:, 1])
        nums = bx * (c[:, 2] - a[:, 2]) - cx * (b[:, 2] - a[:, 2])
        return list(nums), list(dens)
    nums, dens = [], []
    for t in C:
        o = X[t[0]]
        base = [[X[i][c] - o[c] for i in t[1:]] for c in range(k - 2)]
        dens.append(_bareiss(base + [[X[i][k - 2] - o[k - 2] for i in t[1:]]]))
        nums.append(_bareiss(base + [[X[i][k - 1] - o[k - 1] for i in t[1:]]]))
    return nums, dens


def _exact_ranks(nums, dens) -> np.ndarray:
    """Dense ranks of the fractions nums[i]/dens[i]; -1 where dens[i] == 0.

    With every |denominator| below 2**L, distinct fractions differ by at
    least 2**(-2L), so floor(x * 2**(2L+1)) is an exact integer sort key:
    equal keys mean equal values.
    """
    size = len(nums)
    ranks = np.full(size, -1, dtype=np.int64)
    shift = 2 * max((abs(b).bit_length() for b in dens), default=0) + 1
    keyed = []
    for i, (a, b) in enumerate(zip(nums, dens)):
        if b == 0:
            continue
        if b < 0:
            a, b = -a, -b
        keyed.append(((a << shift) // b, i))
    keyed.sort()
    rank = -1
    prev = None
    for key, i in keyed:
        if key != prev:
            rank += 1
            prev = key
        ranks[i] = rank
    return ranks


def _rank_tables(P, kmax: int, binom: np.ndarray):
    X = integer_coordinates(P)
    M = len(X)
    tables = []
    for k in range(1, kmax + 1):
        nums, dens = _level_values(X, k)
        ranks = _exact_ranks(nums, dens)
        combos = np.fromiter(combinations(range(M), k), dtype=np.dtype((np.int64, k)),
                             count=comb(M, k))
        colex = np.zeros(len(combos), dtype=np.int64)
        for i in range(k):
            colex += binom[combos[:, i], i + 1]
        table = np.empty(len(combos), dtype=np.int32)
        table[colex] = ranks
        tables.append(table)
    offsets = np.zeros(kmax + 2, dtype=np.int64)
    for k in range(1, kmax + 1):
        offsets[k + 1] = offsets[k] + len(tables[k - 1])
    flat = np.concatenate(tables) if tables else np.zeros(0, dtype=np.int32)
    return flat, offsets


def _subset_tables(n: int, kmax: int):
    """k-subsets of range(m) for 0 <= k <= min(m, kmax), m < n, flattened."""
    starts = np.zeros((n + 1, kmax + 2), dtype=np.int64)
    flat = []
    for m in range(n):
        for k in range(min(m, kmax) + 1):
            starts[m, k] = len(flat)
            for S in combinations(range(m), k):
                flat.extend(S)
    return np.array(flat, dtype=np.int64), starts


def _orient(t, k, ranks, offsets, binom, signs):
    """Sign of pi_k on the sorted (k+1)-tuple t, or 0 if degenerate;
    valid once the sub-tuples of t are consistent on levels below k."""
    ca = 0
    cb = 0
    for r in range(k):
        ca += binom[t[r], r + 1]
        cb += binom[t[r + 1], r + 1]
    ra = ranks[offsets[k] + ca]
    rb = ranks[offsets[k] + cb]
    if ra == rb or ra < 0 or rb < 0:
        return 0
    s = 1
    if k >= 3:
        s = signs[k - 2]
    return s if rb > ra else -s


def _filter(m, idx, src, lo, hi, dst, d, ranks, offsets, binom, subsets, starts, signs, t,
            ent_base, ent_ra, ent_dir, ent_k):
    """Copy into dst the candidates src[lo:hi] that extend idx[:m].

    Only tuples through idx[m-1], and the level-(m-1) tuple whose sign was
    just fixed, are new.  In each such tuple the first half A and all of the
    second half B except the candidate are fixed, so rank(A), the partial
    colex index of B and the required direction are computed once; each
    candidate then costs one rank lookup per tuple.  A failed lower-level
    check rejects the candidate, so the order of the checks does not matter.
    """
    ne = 0
    last = idx[m - 1]
    for k in range(1, min(m, d) + 1):
        s_low = 1
        if k >= 3:
            s_low = signs[k - 2]
        # direction: +1 needs rank(B) > rank(A), -1 the reverse, 0 only distinct
        want = 0 if k == m else signs[k] * s_low
        cnt = binom[m - 1, k - 1]
        st = starts[m - 1, k - 1]
        for s in range(cnt):
            off = st + s * (k - 1)
            for r in range(k - 1):
                t[r] = idx[subsets[off + r]]
            t[k - 1] = last
            ca = 0
            cb = 0
            for r in range(k):
                ca += binom[t[r], r + 1]
            for r in range(1, k):
                cb += binom[t[r], r]
            ent_base[ne] = offsets[k] + cb
            ent_ra[ne] = ranks[offsets[k] + ca]
            ent_dir[ne] = want
            ent_k[ne] = k
            ne += 1
    if 2 <= m <= d + 1:
        k = m - 1
        s_low = 1
        if k >= 3:
            s_low = signs[k - 2]
        ca = 0
        cb = 0
        for r in range(k):
            ca += binom[idx[r], r + 1]
        for r in range(1, k):
            cb += binom[idx[r], r]
        ent_base[ne] = offsets[k] + cb
        ent_ra[ne] = ranks[offsets[k] + ca]
        ent_dir[ne] = signs[k] * s_low
        ent_k[ne] = k
        ne += 1
    count = 0
    for q in range(lo, hi):
        c = src[q]
        good = True
        for e in range(ne):
            ra = ent_ra[e]
            rb = ranks[ent_base[e] + binom[c, ent_k[e]]]
            w = ent_dir[e]
            if ra < 0 or rb < 0 or ra == rb or (w > 0 and rb < ra) or (w < 0 and rb > ra):
                good = False
                break
        if good:
            dst[count] = c
            count += 1
    return count


def _super_ot_kernel(M, d, n, ranks, offsets, binom, subsets, starts, first, budget, out):
    """DFS with the first index fixed.  Returns (status, nodes):
    status 1 = found (witness in ``out``), 0 = subtree exhausted,
    -1 = budget reached."""
    idx = np.empty(n, dtype=np.int64)
    cand = np.empty((n, M), dtype=np.int64)
    ncand = np.zeros(n, dtype=np.int64)
    pos = np.zeros(n, dtype=np.int64)
    signs = np.zeros(d + 2, dtype=np.int64)
    t = np.empty(d + 2, dtype=np.int64)
    width = 2
    for k in range(1, min(d, n - 1) + 1):
        width += binom[n, k - 1]
    ent_base = np.empty(width, dtype=np.int64)
    ent_ra = np.empty(width, dtype=np.int64)
    ent_dir = np.empty(width, dtype=np.int64)
    ent_k = np.empty(width, dtype=np.int64)
    idx[0] = first
    nodes = 1
    if n == 1:
        out[0] = first
        return 1, nodes
    for c in range(first + 1, M):
        cand[0, c - first - 1] = c
    ncand[0] = M - first - 1
    ncand[1] = _filter(1, idx, cand[0], 0, ncand[0], cand[1], d, ranks, offsets,
                       binom, subsets, starts, signs, t, ent_base, ent_ra, ent_dir, ent_k)
    m = 1
    while m >= 1:
        if ncand[m] - pos[m] < n - m:
            pos[m] = 0
            m -= 1
            continue
        c = cand[m, pos[m]]
        pos[m] += 1
        idx[m] = c
        nodes += 1
        if m + 1 == n:
            for r in range(n):
                out[r] = idx[r]
            return 1, nodes
        if m <= d:
            for r in range(m + 1):
                t[r] = idx[r]
            signs[m] = _orient(t, m, ranks, offsets, binom, signs)
        if nodes >= budget:
            return -1, nodes
        ncand[m + 1] = _filter(m + 1, idx, cand[m], pos[m], ncand[m], cand[m + 1], d,
                               ranks, offsets, binom, subsets, starts, signs, t,
                               ent_base, ent_ra, ent_dir, ent_k)
        m += 1
        pos[m] = 0
    return 0, nodes


_kernel = _super_ot_kernel
if njit is not None and os.environ.get("SEMIRAMSEY_DISABLE_JIT") != "1":
    _orient = njit(cache=True, nogil=True)(_orient)
    _filter = njit(cache=True, nogil=True)(_filter)
    _kernel = njit(cache=True, nogil=True)(_super_ot_kernel)


def exists_super_ot_homogeneous_subsequence(P, n: int, node_budget: int = DEFAULT_NODE_BUDGET,
                                            threads: int = 1) -> SearchResult:
    """A length-n subsequence whose projections pi_1..pi_d are all
    order-type homogeneous.

    Every projected tuple created by an extension is checked at every level,
    lowest level first; degenerate tuples count as conflicts.  The sign of
    each level is fixed by the first tuple of that level, which covers both
    polarities of every level in one pass.  With ``threads > 1`` subtrees
    rooted at consecutive first indices run in parallel batches; the result
    does not depend on the thread count, except that the budget is checked
    between batches.
    """
    P = as_sequence(P)
    if n < 1:
        raise ValueError("n must be positive")
    M = len(P)
    d = P.dim
    if M < n:
        return SearchResult(False, None, 0, True)
    kmax = min(d, n - 1)
    binom = _colex_binom(M, kmax)
    if kmax >= 1:
        ranks, offsets = _rank_tables(P, kmax, binom)
    else:
        ranks, offsets = np.zeros(1, dtype=np.int32), np.zeros(2, dtype=np.int64)
    subsets, starts = _subset_tables(n, kmax)
    roots = list(range(M - n + 1))
    nodes = 0

    def run(first, budget):
        out = np.empty(n, dtype=np.int64)
        status, used = _kernel(M, d, n, ranks, offsets, binom, subsets, starts,
                               first, budget, out)
        return status, used, tuple(int(v) for v in out)

    batch = max(1, threads)
    with ThreadPoolExecutor(max_workers=batch) if batch > 1 else _Serial() as pool:
        for lo in range(0, len(roots), batch):
            remaining = node_budget - nodes
            if remaining <= 0:
                return SearchResult(False, None, nodes, False)
            results = list(pool.map(lambda f: run(f, remaining), roots[lo:lo + batch]))
            for status, used, witness in results:
                nodes += used
                if status == 1:
                    return SearchResult(True, witness[:n], nodes, True)
                if status == -1:
                    return SearchResult(False, None, nodes, False)
    return SearchResult(False, None, nodes, True)


class _Serial:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False

    @staticmethod
    def map(fn, items):
        return map(fn, items)
