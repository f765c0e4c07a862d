"""Slow, obviously-correct reference implementations used by the tests.

Everything here works on plain Python tuples and sets.  Nothing calls back
into the bitmask or matrix code paths of the package.
"""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from math import gcd


def add(x, y, mods=None):
    if mods is None:
        return tuple(a + b for a, b in zip(x, y))
    return tuple((a + b) % m for a, b, m in zip(x, y, mods))


def neg(x, mods=None):
    if mods is None:
        return tuple(-a for a in x)
    return tuple((-a) % m for a, m in zip(x, mods))


def sumset(A, B, mods=None):
    return {add(a, b, mods) for a in A for b in B}


def diffset(A, B, mods=None):
    return {add(a, neg(b, mods), mods) for a in A for b in B}


def rep_counts(A, B, mods=None):
    return Counter(add(a, b, mods) for a in A for b in B)


def walk_count_min(A, B, C, k, mods=None):
    """Fewest length-k walks between a required pair of endpoints.

    A walk alternates sides along edges {a, b} with a + b in C.  Odd k: walks
    from a in A to b in B, minimised over all of A x B.  Even k: walks from b
    to b' inside B, minimised over B x B.  Plain dictionary DP.
    """
    A, B, C = list(A), list(B), set(C)
    nbr = {("A", a): [("B", b) for b in B if add(a, b, mods) in C] for a in A}
    nbr.update({("B", b): [("A", a) for a in A if add(a, b, mods) in C] for b in B})
    starts = [("A", a) for a in A] if k % 2 else [("B", b) for b in B]
    ends = [("B", b) for b in B]
    best = None
    for st in starts:
        layer = Counter({st: 1})
        for _ in range(k):
            nxt: Counter = Counter()
            for v, cnt in layer.items():
                for u in nbr[v]:
                    nxt[u] += cnt
            layer = nxt
        w = min(layer.get(e, 0) for e in ends)
        best = w if best is None else min(best, w)
    return best


def min_subset_size(A, B, target, cap, mods=None):
    """Smallest |B'| (B' ⊆ B, |B'| ≤ cap) with |A + B'| ≥ target, or None."""
    B = sorted(B)
    for s in range(1, cap + 1):
        for sub in itertools.combinations(B, s):
            if len(sumset(A, sub, mods)) >= target:
                return s
    return None


def is_saturating_cover(S, T, Sp, Tp, mods=None):
    full = sumset(S, T, mods)
    return (sumset(Sp, T, mods) | sumset(S, Tp, mods)) == full


def hamming_one_flip(A, m):
    """A together with every point differing from some member in one coordinate."""
    out = set(A)
    for x in A:
        for i in range(m):
            out.add(x[:i] + (1 - x[i],) + x[i + 1:])
    return out


def forced_elements(A, A0, mods=None):
    """Members of A0 that are the unique summand pair behind some x in A+A."""
    cnt = rep_counts(A, A, mods)
    forced = set()
    for a in A0:
        if cnt[add(a, a, mods)] == 1:
            forced.add(a)
    return forced


def collinear_cover(points, t):
    """Can ``points`` (planar) be covered by at most t parallel lines?"""
    pts = list(points)
    if len(pts) <= t:
        return True
    dirs = set()
    for p, q in itertools.combinations(pts, 2):
        dx, dy = q[0] - p[0], q[1] - p[1]
        g = gcd(dx, dy)
        dx, dy = dx // g, dy // g
        if dx < 0 or (dx == 0 and dy < 0):
            dx, dy = -dx, -dy
        dirs.add((dx, dy))
    for dx, dy in dirs:
        lines = {dx * p[1] - dy * p[0] for p in pts}
        if len(lines) <= t:
            return True
    return False


def cauchy_davenport_ok(A, B, p):
    return len(sumset(A, B, (p,))) >= min(p, len(A) + len(B) - 1)


def kappa(A, mods=None):
    return Fraction(len(sumset(A, A, mods)), len(A))


def ints(S):
    return sorted(e[0] for e in S)
