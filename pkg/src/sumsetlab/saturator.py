"""Small-subset saturation: greedy selectors, exact search oracles and covers.

Sumset bookkeeping goes through :func:`sum_table`: each candidate element gets
a Python-int bitmask over the positions of ``A+B`` it reaches, so a marginal
gain is one ``&~`` and a popcount.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (BadConstant, BadParams, EmptySet, Infeasible, NoBaseline, NotFound,
                     SizeMismatch, Unsupported)
from .groups import CyclicMod, IntegerLattice, same_ctx
from .sets import GSet, joint_keys, neg_set, positions_to_mask, sum_table, sumset
from .verifier import _jsonable, class_labels, hyperplane_cover_check

DEFAULT_C = Fraction(1, 14)


@dataclass
class SaturationOutcome:
    algorithm: str
    a_sub: GSet
    b_sub: GSet
    achieved_a: int                 # |A + b_sub|
    achieved_b: int                 # |B + a_sub|
    trace: list                     # (element, side, gain)
    kappa: Fraction
    s_budget: int
    n: int
    c: Fraction
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return _jsonable({
            "algorithm": self.algorithm,
            "params": {"s": self.s_budget, "c": self.c, **self.extra.get("params", {})},
            "seed": self.seed,
            "sizes": {"n": self.n, "a_sub": len(self.a_sub), "b_sub": len(self.b_sub)},
            "kappa": self.kappa,
            "achieved": {"a": self.achieved_a, "b": self.achieved_b},
            "witness": {"a_sub": self.a_sub, "b_sub": self.b_sub},
            "trace": [[e, side, g] for e, side, g in self.trace],
            "extra": {k: v for k, v in self.extra.items() if k != "params"},
        })


@dataclass
class CoverOutcome:
    s_prime: GSet
    t_prime: GSet
    tau: Fraction
    covered: bool
    s_star: GSet
    extra: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return _jsonable({"algorithm": "cover", "tau": self.tau, "covered": self.covered,
                          "s_prime": self.s_prime, "t_prime": self.t_prime,
                          "s_star": self.s_star, **self.extra})


# ---------------------------------------------------------------------------
# helpers

def _row_masks(pos: np.ndarray, nbits: int) -> list[int]:
    return [positions_to_mask(row, nbits) for row in pos]


def _argmax_gain(masks: list[int], covered: int, skip) -> tuple[int, int]:
    """First position with the largest ``|mask \\ covered|``, ignoring ``skip``."""
    best, best_gain = -1, -1
    for i, m in enumerate(masks):
        if i in skip:
            continue
        g = (m & ~covered).bit_count()
        if g > best_gain:
            best, best_gain = i, g
    return best, best_gain


def _check_constant(c) -> Fraction:
    c = Fraction(c)
    if not 0 < c <= DEFAULT_C:
        raise BadConstant("c must lie in (0, 1/14]")
    return c


def _check_budget(s: int) -> int:
    if int(s) < 1:
        raise BadParams("s must be >= 1")
    return int(s)


def _single_greedy(masks: list[int], s: int) -> tuple[list[int], list[int], int]:
    chosen, gains, covered = [], [], 0
    taken: set = set()
    for _ in range(min(s, len(masks))):
        i, g = _argmax_gain(masks, covered, taken)
        if g <= 0:
            break
        taken.add(i)
        chosen.append(i)
        gains.append(g)
        covered |= masks[i]
    return chosen, gains, covered


# ---------------------------------------------------------------------------
# greedy selectors

def greedy_pair_saturate(A: GSet, B: GSet, s: int, c=DEFAULT_C) -> SaturationOutcome:
    """Alternate B-side and A-side picks, each of maximal marginal gain.

    Step i adds the b maximising ``|A + B_(i)|`` and then the a maximising
    ``|B + A_(i)|``; ties go to the smaller canonical element.
    """
    same_ctx(A.ctx, B.ctx)
    if len(A) != len(B):
        raise SizeMismatch("greedy_pair_saturate needs |A| = |B|")
    if len(A) == 0:
        raise EmptySet("A and B must be nonempty")
    c, s = _check_constant(c), _check_budget(s)
    U, pos = sum_table(A, B)
    nU = len(U)
    via_b = _row_masks(pos.T, nU)       # A + b_j
    via_a = _row_masks(pos, nU)         # a_i + B
    cov_a = cov_b = 0
    pick_a: list[int] = []
    pick_b: list[int] = []
    trace = []
    for _ in range(s):
        j, g = _argmax_gain(via_b, cov_a, set(pick_b))
        if g > 0:
            pick_b.append(j)
            cov_a |= via_b[j]
            trace.append((B.element_at(j), "B", g))
        i, g = _argmax_gain(via_a, cov_b, set(pick_a))
        if g > 0:
            pick_a.append(i)
            cov_b |= via_a[i]
            trace.append((A.element_at(i), "A", g))
    return SaturationOutcome("greedy-pair", A.subset(sorted(pick_a)), B.subset(sorted(pick_b)),
                             cov_a.bit_count(), cov_b.bit_count(), trace,
                             Fraction(nU, len(A)), s, len(A), c)


def greedy_self_saturate(A: GSet, s: int, c=DEFAULT_C) -> SaturationOutcome:
    if len(A) == 0:
        raise EmptySet("A must be nonempty")
    c, s = _check_constant(c), _check_budget(s)
    U, pos = sum_table(A, A)
    chosen, gains, covered = _single_greedy(_row_masks(pos, len(U)), s)
    sub = A.subset(sorted(chosen))
    trace = [(A.element_at(i), "A", g) for i, g in zip(chosen, gains)]
    got = covered.bit_count()
    return SaturationOutcome("greedy-self", sub, sub, got, got, trace,
                             Fraction(len(U), len(A)), s, len(A), c)


def _aligned_negation(A: GSet) -> GSet:
    ctx = A.ctx
    data = ctx.neg_index(A._data) if ctx.finite else -A._data
    return GSet._raw(ctx, data)


def greedy_diff_saturate(A: GSet, s: int, c=DEFAULT_C) -> SaturationOutcome:
    """Greedy for ``|A - A_(s)|``; candidate ``a`` contributes the translate ``A - a``."""
    if len(A) == 0:
        raise EmptySet("A must be nonempty")
    c, s = _check_constant(c), _check_budget(s)
    N = neg_set(A)
    U, pos = sum_table(A, N)
    kn, kneg = joint_keys(N, _aligned_negation(A))
    col = np.searchsorted(kn, kneg)      # column of -a_i in N
    masks = _row_masks(pos.T[col], len(U))
    chosen, gains, covered = _single_greedy(masks, s)
    sub = A.subset(sorted(chosen))
    trace = [(A.element_at(i), "A", g) for i, g in zip(chosen, gains)]
    got = covered.bit_count()
    return SaturationOutcome("greedy-diff", sub, sub, got, got, trace,
                             Fraction(len(U), len(A)), s, len(A), c)


# ---------------------------------------------------------------------------
# medium-size saturation in Z_p

def _pair_size(pos: np.ndarray, rows, cols) -> int:
    if len(rows) == 0 or len(cols) == 0:
        return 0
    return len(np.unique(pos[np.ix_(rows, cols)]))


def _endpoint_candidates(n: int, g: int):
    first = set(range(min(g, n)))
    stride = set(range(0, n, g)) | {n - 1}
    last = set(range(max(0, n - g), n))
    one, two = sorted(first | stride), sorted(stride | last)
    yield "endpoints", one, two
    yield "endpoints", two, one


def _greedy_growth(pos: np.ndarray, n: int, target: int, kmax: int):
    rows, cols = [0], [0]
    while max(len(rows), len(cols)) <= kmax:
        if _pair_size(pos, rows, cols) >= target:
            return rows, cols
        best = (-1, None, None)
        for side, pool, other in (("B", cols, rows), ("A", rows, cols)):
            for x in range(n):
                if x in pool:
                    continue
                trial = (rows, cols + [x]) if side == "B" else (rows + [x], cols)
                size = _pair_size(pos, *trial)
                if size > best[0]:
                    best = (size, side, x)
        if best[1] is None:
            break
        if best[1] == "B":
            cols = cols + [best[2]]
        else:
            rows = rows + [best[2]]
    return None


def _medium_baseline(pos: np.ndarray, n: int, rng: np.random.Generator, random_pairs: int):
    """Positions (rows, cols, source) of a pair A', B' with |A'+B'| >= 2n-1."""
    target = 2 * n - 1
    lo = math.isqrt(n - 1) + 1 if n > 1 else 1          # ceil(sqrt n)
    kmax = min(math.isqrt(9 * n), n // 2)
    if kmax < 1:
        raise NoBaseline(f"n = {n} too small for a medium baseline")
    best = None
    for g in range(1, n + 1):
        for src, r, cl in _endpoint_candidates(n, g):
            if max(len(r), len(cl)) > kmax:
                continue
            if _pair_size(pos, r, cl) >= target:
                cand = (max(len(r), len(cl)), r, cl, src)
                if best is None or cand[0] < best[0]:
                    best = cand
    if best is not None:
        return best[1], best[2], best[3]
    grown = _greedy_growth(pos, n, target, kmax)
    if grown is not None:
        return grown[0], grown[1], "greedy-growth"
    for k in range(lo, kmax + 1):
        for _ in range(random_pairs):
            r = sorted(rng.choice(n, size=k, replace=False).tolist())
            cl = sorted(rng.choice(n, size=k, replace=False).tolist())
            if _pair_size(pos, r, cl) >= target:
                return r, cl, "random"
    raise NoBaseline(f"no baseline of size <= {kmax} reaches {target}")


def medium_saturate(A: GSet, B: GSet, c2=Fraction(1, 4), c=1, trials: int = 64,
                    seed: int = 0, beta=0, random_pairs: int = 200) -> SaturationOutcome:
    """Saturate with subsets of size O(sqrt n) in Z_p.

    A baseline pair A', B' with ``|A'+B'| >= 2n-1`` seeds ``S_0``; elements whose
    translate adds at least ``c2 * n`` new sums are then appended (at most
    sqrt(n) of them), and finally the best of ``trials`` random augmentations of
    size ``ceil(c sqrt n)`` is kept.
    """
    ctx = same_ctx(A.ctx, B.ctx)
    if not isinstance(ctx, CyclicMod):
        raise Unsupported("medium_saturate works in Z_p")
    n = len(A)
    if n != len(B):
        raise SizeMismatch("medium_saturate needs |A| = |B|")
    if n == 0:
        raise EmptySet("A and B must be nonempty")
    c2, c, beta = Fraction(c2), Fraction(c), Fraction(beta)
    if 2 * n > (1 - beta) * ctx.N:
        raise BadParams("need 2n <= (1 - beta) p")
    if trials < 1 or c <= 0 or c2 <= 0:
        raise BadParams("trials, c and c2 must be positive")
    rng = np.random.default_rng(seed)
    U, pos = sum_table(A, B)
    nU = len(U)
    rows0, cols0, source = _medium_baseline(pos, n, rng, random_pairs)
    masks_a = _row_masks(pos, nU)
    masks_b = _row_masks(pos.T, nU)
    base = 0
    for i in rows0:
        base |= positions_to_mask(pos[i, cols0], nU)
    covered = base
    extra_a: list[int] = []
    extra_b: list[int] = []
    trace = []
    # S_i = S_{i-1} + (a + B) or + (A + b), while a gain of c2*n is available
    while len(trace) ** 2 < n:
        j, gb = _argmax_gain(masks_b, covered, set(extra_b))
        i, ga = _argmax_gain(masks_a, covered, set(extra_a))
        if max(gb, ga) < c2 * n:
            break
        if gb >= ga:
            extra_b.append(j)
            covered |= masks_b[j]
            trace.append((B.element_at(j), "B", gb))
        else:
            extra_a.append(i)
            covered |= masks_a[i]
            trace.append((A.element_at(i), "A", ga))
    size = min(n, math.ceil(c * math.sqrt(n)))
    fixed_rows = sorted(set(rows0) | set(extra_a))
    fixed_cols = sorted(set(cols0) | set(extra_b))
    best = None
    for _ in range(trials):
        ra = rng.choice(n, size=size, replace=False)
        rb = rng.choice(n, size=size, replace=False)
        rows = sorted(set(fixed_rows) | set(ra.tolist()))
        cols = sorted(set(fixed_cols) | set(rb.tolist()))
        got = _pair_size(pos, rows, cols)
        if best is None or got > best[0]:
            best = (got, rows, cols)
    pair, rows, cols = best
    a_sub, b_sub = A.subset(rows), B.subset(cols)
    root_n = math.sqrt(n)
    s_base = max(len(rows0), len(cols0))
    c_prime = s_base / root_n + len(trace) / root_n
    grown = covered.bit_count()
    extra = {
        "params": {"c2": c2, "trials": trials, "beta": beta},
        "pair_sumset": pair,
        "target": 2 * n - 1,
        "reaches_target": pair >= 2 * n - 1,
        "baseline_source": source,
        "baseline_sizes": [len(rows0), len(cols0)],
        "baseline_sumset": base.bit_count(),
        "c_prime": c_prime,
        "random_size": size,
        "expectation_floor": base.bit_count() + (size / n) * (grown - base.bit_count()),
    }
    return SaturationOutcome("medium", a_sub, b_sub, len(sumset(A, b_sub)),
                             len(sumset(B, a_sub)), trace, Fraction(nU, n),
                             max(len(rows), len(cols)), n, c, seed, extra)


# ---------------------------------------------------------------------------
# exact search

def _search(masks: list[int], size: int, target: int, per: int):
    """Lexicographically first ``size``-combination whose union reaches ``target``."""
    m = len(masks)
    chosen: list[int] = []

    def rec(start: int, covered: int):
        have = covered.bit_count()
        if len(chosen) == size:
            return list(chosen) if have >= target else None
        if have + (size - len(chosen)) * per < target:
            return None
        for j in range(start, m - (size - len(chosen)) + 1):
            chosen.append(j)
            hit = rec(j + 1, covered | masks[j])
            chosen.pop()
            if hit is not None:
                return hit
        return None

    return rec(0, 0)


def brute_min_subset(A: GSet, B: GSet, target: int, cap: int) -> tuple[int, GSet]:
    """Smallest ``s <= cap`` with some ``B_(s)`` reaching ``|A + B_(s)| >= target``."""
    same_ctx(A.ctx, B.ctx)
    if len(A) == 0 or len(B) == 0:
        raise EmptySet("A and B must be nonempty")
    U, pos = sum_table(A, B)
    masks = _row_masks(pos.T, len(U))
    for size in range(1, min(cap, len(B)) + 1):
        if size * len(A) < target:
            continue
        hit = _search(masks, size, target, len(A))
        if hit is not None:
            return size, B.subset(hit)
    raise NotFound(f"no subset of size <= {cap} reaches {target}")


def find_triple(A: GSet, B: GSet) -> GSet:
    """First subset of B of size <= 3 (by size, then canonical order) with |A+B_(3)| >= 2n-1."""
    if len(A) != len(B):
        raise SizeMismatch("find_triple needs |A| = |B|")
    return brute_min_subset(A, B, 2 * len(A) - 1, 3)[1]


# ---------------------------------------------------------------------------
# saturating covers

def saturating_cover(S: GSet, T: GSet, tau=None) -> CoverOutcome:
    """Subsets S', T' with (S'+T) u (S+T') = S+T.

    Phase one collects S* greedily while some translate s+T adds more than tau
    new sums.  Phase two covers what is left with a greedy set cover over all
    translates s+T and S+t (T side first on equal gain).
    """
    same_ctx(S.ctx, T.ctx)
    if len(S) == 0 or len(T) == 0:
        raise EmptySet("S and T must be nonempty")
    U, pos = sum_table(S, T)
    nU = len(U)
    tau = Fraction(math.isqrt(nU - 1) + 1) if tau is None else Fraction(tau)
    via_s = _row_masks(pos, nU)       # s_i + T
    via_t = _row_masks(pos.T, nU)     # S + t_j
    star: list[int] = []
    covered = 0
    while True:
        i, g = _argmax_gain(via_s, covered, set(star))
        if i < 0 or g <= tau:
            break
        star.append(i)
        covered |= via_s[i]
    residual = ((1 << nU) - 1) & ~covered
    residual_size = residual.bit_count()
    more_s: list[int] = []
    pick_t: list[int] = []
    while residual:
        jt, gt = _argmax_gain(via_t, ~residual, set(pick_t))
        js, gs = _argmax_gain(via_s, ~residual, set(star) | set(more_s))
        if gt >= gs:
            pick_t.append(jt)
            residual &= ~via_t[jt]
        else:
            more_s.append(js)
            residual &= ~via_s[js]
    s_prime = S.subset(sorted(set(star) | set(more_s)))
    t_prime = T.subset(sorted(pick_t))
    # independent recomputation rather than trusting the masks
    got = sumset(s_prime, T) if len(s_prime) else GSet(S.ctx, [])
    if len(t_prime):
        got = got | sumset(S, t_prime)
    ok = got == U
    return CoverOutcome(s_prime, t_prime, tau, ok, S.subset(sorted(star)),
                        {"sumset_size": nU, "residual_size": residual_size,
                         "star_bound": math.ceil(Fraction(nU) / tau) if tau > 0 else None,
                         "phase2_s": len(more_s), "phase2_t": len(pick_t)})


# ---------------------------------------------------------------------------
# full-dimensional subsets in Z^d

def _select(A: GSet, t: int, k: int) -> list[int]:
    pts = A.coords
    if k == 0:
        if len(A) <= t:
            raise Infeasible(f"{len(A)} points fit in {t} translates of a point",
                             hyperplane_cover_check(A, t, 0))
        return list(range(t + 1))
    try:
        chosen = _select(A, t * t, k - 1)
    except Infeasible:
        chosen = list(range(min(t + 1, len(A))))
    while True:
        X = A.subset(sorted(chosen))
        cover = hyperplane_cover_check(X, t, k)
        if not cover.covered:
            return sorted(chosen)
        labels, firsts = class_labels(pts, cover.basis)
        if len(firsts) <= t:
            raise Infeasible(f"A lies in {len(firsts)} translates of span{cover.basis}",
                             hyperplane_cover_check(A, t, k))
        chosen = sorted(set(chosen) | set(firsts[: t + 1].tolist()))


def select_full_dim_subset(A: GSet, t: int, k: int, d: int | None = None) -> GSet:
    """Small subset of A not covered by t parallel translates of any k-dim subspace."""
    ctx = A.ctx
    if not isinstance(ctx, IntegerLattice):
        raise Unsupported("select_full_dim_subset works in Z^d")
    d = ctx.d if d is None else d
    if d != ctx.d or d > 3:
        raise BadParams("need d equal to the lattice dimension and d <= 3")
    if not 0 <= k < d or t < 1:
        raise BadParams("need t >= 1 and 0 <= k < d")
    if len(A) > 500:
        raise BadParams("|A| must be <= 500")
    out = A.subset(_select(A, t, k))
    final = hyperplane_cover_check(out, t, k)
    if final.covered:       # cannot happen: the loop exits only on a failed cover
        raise Infeasible("selection still coverable", final)
    return out
