"""Certificate checkers and inequality validators.

Every check returns a :class:`Verdict` (or a small dedicated record) so the
CLI and the acceptance battery can serialise results uniformly.  Inequalities
involving cube or square roots are decided by exact integer/rational
cross-multiplication; floats only ever appear in the reported slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import TYPE_CHECKING, Any, Sequence

import numpy as np

from .errors import (BadParams, DimensionTooLarge, EmptySet, NotSubset, Unsupported,
                     ZeroWalks)
from .groups import CyclicMod, FiniteGroup, IntegerLattice, VectorSpace, same_ctx
from .sets import (GSet, difference_set, joint_keys, neg_set, sorted_member, sum_table, sumset,
                   translate, translate_mask)

if TYPE_CHECKING:
    from .saturator import SaturationOutcome


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, GSet):
        return [list(e) if len(e) > 1 else e[0] for e in x.elements()]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    if isinstance(x, list):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


@dataclass
class Verdict:
    check: str
    passed: bool | None          # None: reported only, nothing asserted
    slack: float | None = None
    params: dict = field(default_factory=dict)
    seed: int | None = None
    witness: Any = None
    detail: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return _jsonable({
            "check": self.check,
            "params": self.params,
            "seed": self.seed,
            "pass": self.passed,
            "slack": self.slack,
            "witness": self.witness,
            "detail": self.detail,
        })


# ---------------------------------------------------------------------------
# walk certificates

def _adjacency(A: GSet, B: GSet, C: GSet) -> tuple[np.ndarray, int]:
    """(M, |A+B|) with M[i, j] true iff a_i + b_j lies in C."""
    same_ctx(A.ctx, B.ctx, C.ctx)
    U, pos = sum_table(A, B)
    ku, kc = joint_keys(U, C)
    if not sorted_member(kc, ku).all():
        raise NotSubset("C must be contained in A+B")
    return sorted_member(ku, kc)[pos], len(U)


def min_walks(A: GSet, B: GSet, C: GSet, k: int) -> int:
    """Minimum number of length-k walks in the bipartite sum graph of C.

    Odd k: minimum over (a, b) in A x B.  Even k: minimum over (b, b') in B x B.
    """
    return _min_walks(A, B, C, k)[0]


def _min_walks(A: GSet, B: GSet, C: GSet, k: int) -> tuple[int, int]:
    if k < 1:
        raise BadParams("walk length must be >= 1")
    if len(A) * len(B) > 10**6:
        raise BadParams("|A||B| exceeds 10^6")
    if len(A) == 0 or len(B) == 0:
        raise EmptySet("walk counts need nonempty A and B")
    M, n_sums = _adjacency(A, B, C)
    big = max(len(A), len(B))
    exact_int64 = k < 5 and big ** (k - 1) < (1 << 62)
    dtype = np.int64 if exact_int64 else object
    M = M.astype(np.int64).astype(dtype)
    if k % 2:
        W = M
        P = M @ M.T
        for _ in range((k - 1) // 2):
            W = P @ W
    else:
        Q = M.T @ M
        W = Q
        for _ in range(k // 2 - 1):
            W = W @ Q
    return int(W.min()), n_sums


@dataclass
class WalkCertificate:
    C: GSet
    k: int
    w: int
    bound: Fraction | None
    target: int
    valid: bool

    def to_record(self) -> dict:
        return _jsonable({"C_size": len(self.C), "k": self.k, "w": self.w,
                          "bound": self.bound, "target": self.target, "valid": self.valid})


def walk_bound_certificate(A: GSet, B: GSet, C: GSet, k: int) -> WalkCertificate:
    w, n_sums = _min_walks(A, B, C, k)
    target = n_sums if k % 2 else len(difference_set(B, B))
    if w == 0:
        cert = WalkCertificate(C, k, 0, None, target, False)
        raise ZeroWalks("some required pair has no walk; certificate is vacuous", cert)
    bound = Fraction(len(C) ** k, w)
    return WalkCertificate(C, k, w, bound, target, target <= bound)


# ---------------------------------------------------------------------------
# saturation inequalities

_THEOREM_SHAPE = {"sym": (3, 1), "asym": (3, 2), "diff": (2, 1)}   # root, factor on c


def _root_min_bound(achieved: int, factor: Fraction, kappa: Fraction, s: int, n: int,
                    root: int) -> tuple[bool, float, dict]:
    """Decide ``achieved >= factor * min(kappa^(1/root), s) * n`` exactly."""
    if Fraction(s) ** root <= kappa:
        bound = factor * s * n
        ok = achieved >= bound
        info = {"regime": "s", "bound": bound}
        slack = float(achieved - bound)
    else:
        lhs = Fraction(achieved) ** root
        rhs = factor ** root * kappa * Fraction(n) ** root
        ok = lhs >= rhs
        info = {"regime": "kappa", "lhs_power": lhs, "rhs_power": rhs}
        slack = achieved - float(factor) * float(kappa) ** (1.0 / root) * n
    return ok, slack, info


def theorem_bound_check(outcome: "SaturationOutcome", theorem: str,
                        c: Fraction | None = None) -> Verdict:
    if theorem not in _THEOREM_SHAPE:
        raise BadParams(f"unknown theorem tag {theorem!r}")
    c = Fraction(outcome.c if c is None else c)
    root, mult = _THEOREM_SHAPE[theorem]
    s, n, kappa = outcome.s_budget, outcome.n, Fraction(outcome.kappa)
    if theorem == "asym":
        achieved = outcome.achieved_a + outcome.achieved_b
    else:
        achieved = outcome.achieved_a
    ok, slack, info = _root_min_bound(achieved, mult * c, kappa, s, n, root)
    detail = {"achieved": achieved, "kappa": kappa, **info}
    if theorem == "asym":
        mx = max(outcome.achieved_a, outcome.achieved_b)
        ok_max, slack_max, _ = _root_min_bound(mx, c, kappa, s, n, root)
        detail.update(max_form_pass=ok_max, max_form_slack=slack_max)
    return Verdict(f"bound-{theorem}", ok, slack,
                   {"n": n, "s": s, "c": c, "algorithm": outcome.algorithm},
                   outcome.seed, None, detail)


def plunnecke_check(X: GSet, Ys: Sequence[GSet]) -> Verdict:
    if not Ys:
        raise BadParams("need at least one Y")
    same_ctx(X.ctx, *(Y.ctx for Y in Ys))
    if len(X) == 0:
        raise EmptySet("X must be nonempty")
    alphas = [Fraction(len(sumset(X, Y)), len(X)) for Y in Ys]
    total = Ys[0]
    for Y in Ys[1:]:
        total = sumset(total, Y)
    rhs = Fraction(len(X))
    for a in alphas:
        rhs *= a
    lhs = len(total)
    return Verdict("plunnecke", lhs <= rhs, float(rhs - lhs),
                   {"k": len(Ys), "X_size": len(X)}, None, None,
                   {"alphas": alphas, "lhs": lhs, "rhs": rhs})


def min_cyclic_interval(B: GSet) -> tuple[int, int]:
    """(length, start) of the shortest cyclic interval of Z_p containing B."""
    p = B.ctx.N
    idx = B.index
    if len(idx) == 0:
        return 0, 0
    starts = np.arange(p, dtype=np.int64)[:, None]
    lengths = ((idx[None, :] - starts) % p).max(axis=1) + 1
    r = int(lengths.argmin())
    return int(lengths[r]), r


def interval_cover_check(B: GSet, c) -> Verdict:
    if not isinstance(B.ctx, CyclicMod):
        raise Unsupported("interval_cover_check works in Z_p")
    c = Fraction(c)
    p, n = B.ctx.N, len(B)
    params = {"p": p, "c": c, "size": n}
    if n == 0:
        return Verdict("interval-cover", True, None, params, detail={"vacuous": True})
    dd = len(difference_set(B, B))
    hypothesis = dd < (2 + c) * n < 4 * c * p
    length, start = min_cyclic_interval(B)
    if not hypothesis:
        return Verdict("interval-cover", True, None, params, None, None,
                       {"vacuous": True, "diff_size": dd, "min_interval": length})
    ok = length <= (1 + c) * n
    return Verdict("interval-cover", ok, float((1 + c) * n - length), params, None,
                   {"start": start, "length": length},
                   {"vacuous": False, "diff_size": dd, "min_interval": length})


# ---------------------------------------------------------------------------
# parallel-translate covers in Z^d, d <= 3

def _primitive(v) -> tuple[int, ...]:
    v = [int(x) for x in v]
    g = 0
    for x in v:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(v)
    v = [x // g for x in v]
    for x in v:
        if x:
            if x < 0:
                v = [-y for y in v]
            break
    return tuple(v)


def _cross(u, v) -> tuple[int, int, int]:
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def quotient_keys(coords: np.ndarray, basis: Sequence[tuple]) -> np.ndarray:
    """Integer keys, one row per point, equal iff the points differ by span(basis).

    ``basis`` holds 0, 1 or 2 integer vectors; dimension up to 3.
    """
    X = np.asarray(coords, dtype=object).reshape(len(coords), -1)
    d = X.shape[1]
    k = len(basis)
    if k == 0:
        return X
    if k == 1 and d == 2:
        vx, vy = basis[0]
        return (vx * X[:, 1] - vy * X[:, 0]).reshape(-1, 1)
    if k == 1 and d == 3:
        v = basis[0]
        return np.stack([v[1] * X[:, 2] - v[2] * X[:, 1],
                         v[2] * X[:, 0] - v[0] * X[:, 2],
                         v[0] * X[:, 1] - v[1] * X[:, 0]], axis=1)
    if k == 2 and d == 3:
        nrm = _primitive(_cross(basis[0], basis[1]))
        return (nrm[0] * X[:, 0] + nrm[1] * X[:, 1] + nrm[2] * X[:, 2]).reshape(-1, 1)
    raise DimensionTooLarge(f"no quotient for k={k}, d={d}")


def class_labels(coords: np.ndarray, basis: Sequence[tuple]) -> tuple[np.ndarray, np.ndarray]:
    """(labels, first_position_of_each_class), classes numbered by first appearance."""
    keys = quotient_keys(coords, basis)
    rows = [tuple(int(v) for v in r) for r in keys]
    seen: dict = {}
    labels = np.empty(len(rows), dtype=np.int64)
    firsts = []
    for i, r in enumerate(rows):
        if r not in seen:
            seen[r] = len(firsts)
            firsts.append(i)
        labels[i] = seen[r]
    return labels, np.asarray(firsts, dtype=np.int64)


@dataclass
class CoverCheck:
    covered: bool
    t: int
    k: int
    basis: list | None = None       # spanning vectors of the covering subspace
    offsets: list | None = None     # one point of A per translate
    candidates: int = 0

    def to_record(self) -> dict:
        return _jsonable({"covered": self.covered, "t": self.t, "k": self.k,
                          "basis": self.basis, "offsets": self.offsets,
                          "candidates": self.candidates})


def _independent(vs: Sequence[tuple]) -> bool:
    if len(vs) == 1:
        return any(vs[0])
    d = len(vs[0])
    if d == 2:
        return vs[0][0] * vs[1][1] - vs[0][1] * vs[1][0] != 0
    return any(_cross(vs[0], vs[1]))


def _canonical_subspace(basis: Sequence[tuple]):
    if len(basis) == 1:
        return ("line", _primitive(basis[0]))
    return ("plane", _primitive(_cross(basis[0], basis[1])))


def _candidate_subspaces(X: np.ndarray, t: int, k: int) -> list[list[tuple]]:
    """Subspaces that could cover X with <= t translates, by pigeonhole.

    If X is covered by t translates of H then any t+1 points with distinct
    classes modulo a subspace H' of H contain two in the same H-translate; their
    difference lies in H and extends H'.  Each level keeps the first t+1
    points that are pairwise distinct modulo the partial span.
    """
    out: dict = {}

    def grow(partial: list[tuple]):
        if len(partial) == k:
            key = _canonical_subspace(partial)
            out.setdefault(key, list(partial))
            return
        _, firsts = class_labels(X, partial)
        reps = X[firsts[: t + 1]]
        if len(firsts) <= t:
            # already few classes: any extension of the partial span works
            ext = _any_extension(partial, X.shape[1])
            grow(partial + [ext])
            return
        for i, j in combinations(range(len(reps)), 2):
            v = _primitive(reps[j] - reps[i])
            if _independent(partial + [v]):
                grow(partial + [v])

    grow([])
    return list(out.values())


def _any_extension(partial: list[tuple], d: int) -> tuple:
    for i in range(d):
        e = tuple(1 if j == i else 0 for j in range(d))
        if _independent(partial + [e]):
            return e
    raise BadParams("no independent extension")


def hyperplane_cover_check(A: GSet, t: int, k: int) -> CoverCheck:
    """Is A inside <= t parallel translates of some k-dim rational subspace?"""
    ctx = A.ctx
    if not isinstance(ctx, IntegerLattice):
        raise Unsupported("hyperplane covers live in Z^d")
    d = ctx.d
    if d > 3:
        raise DimensionTooLarge("cover checks support d <= 3")
    if not 0 <= k < d:
        raise BadParams("need 0 <= k < d")
    if t < 0:
        raise BadParams("t must be >= 0")
    X = A.coords.astype(np.int64)
    pts = [tuple(int(v) for v in r) for r in X]
    if k == 0 or len(pts) <= t:
        covered = len(pts) <= t
        basis = [tuple(int(i == j) for j in range(d)) for i in range(k)]
        return CoverCheck(covered, t, k, basis if covered else None,
                          pts if covered else None, 0)
    cands = _candidate_subspaces(X, t, k)
    for basis in cands:
        labels, firsts = class_labels(X, basis)
        if len(firsts) <= t:
            return CoverCheck(True, t, k, [tuple(b) for b in basis],
                              [pts[i] for i in firsts], len(cands))
    return CoverCheck(False, t, k, None, None, len(cands))


def naive_direction_cover_check(A: GSet, t: int) -> CoverCheck:
    """Planar line covers by brute force over every primitive direction in a box."""
    if not (isinstance(A.ctx, IntegerLattice) and A.ctx.d == 2):
        raise Unsupported("naive direction scan is planar only")
    X = A.coords.astype(np.int64)
    pts = [tuple(int(v) for v in r) for r in X]
    if len(pts) <= t:
        return CoverCheck(True, t, 1, [(1, 0)], pts, 0)
    spread = int(X.max(axis=0).max() - X.min(axis=0).min()) if len(X) else 0
    R = max(spread, 1)
    tried = 0
    for a in range(0, R + 1):
        for b in range(-R, R + 1):
            if (a, b) == (0, 0) or math.gcd(a, b) != 1 or (a == 0 and b < 0):
                continue
            tried += 1
            classes = {}
            for p in pts:
                classes.setdefault(a * p[1] - b * p[0], p)
                if len(classes) > t:
                    break
            if len(classes) <= t:
                return CoverCheck(True, t, 1, [(a, b)], list(classes.values()), tried)
    return CoverCheck(False, t, 1, None, None, tried)


# ---------------------------------------------------------------------------
# Hamming cube

def weight_ball(m: int, radius: int) -> GSet:
    ctx = VectorSpace(2, m)
    idx = np.arange(1 << m, dtype=np.int64)
    weights = np.array([bin(i).count("1") for i in range(1 << m)], dtype=np.int64)
    return GSet.from_index(ctx, idx[weights <= radius])


def popcounts(idx: np.ndarray) -> np.ndarray:
    idx = np.asarray(idx, dtype=np.uint64)
    out = np.zeros(idx.shape, dtype=np.int64)
    while np.any(idx):
        out += (idx & np.uint64(1)).astype(np.int64)
        idx = idx >> np.uint64(1)
    return out


def hamming_neighborhood(A: GSet, k: int) -> GSet:
    """Points within Hamming distance k of A, by k rounds of one-bit flips."""
    ctx = A.ctx
    if not (isinstance(ctx, VectorSpace) and ctx.p == 2):
        raise Unsupported("hamming_neighborhood works in F_2^m")
    if ctx.n > 22:
        raise BadParams("m must be <= 22")
    if k < 0:
        raise BadParams("k must be >= 0")
    m = ctx.n
    units = [tuple(1 if j == i else 0 for j in range(m)) for i in range(m)]
    mask = A.mask
    for _ in range(k):
        new = mask
        for e in units:
            new |= translate_mask(ctx, mask, e)
        if new == mask:
            break
        mask = new
    return GSet.from_mask(ctx, mask)


def harper_check(A: GSet) -> Verdict:
    """|A| >= |ball_q|  implies  |Gamma(A)| >= |ball_{q+1}|, for the largest such q."""
    m = A.ctx.n
    sizes = np.cumsum([math.comb(m, j) for j in range(m + 1)])
    q = int(np.searchsorted(sizes, len(A), side="right")) - 1
    nb = len(hamming_neighborhood(A, 1))
    if q < 0:
        return Verdict("harper", True, None, {"m": m, "size": len(A)},
                       detail={"vacuous": True, "neighborhood": nb})
    need = int(sizes[min(q + 1, m)])
    return Verdict("harper", nb >= need, float(nb - need), {"m": m, "size": len(A), "q": q},
                   detail={"neighborhood": nb, "required": need})


# ---------------------------------------------------------------------------
# representation counting

def _ordered_reps(A: GSet, x) -> list[tuple]:
    """Ordered pairs (a1, a2) in A x A with a1 + a2 = x."""
    ctx = A.ctx
    both = translate(neg_set(A), x) & A      # b in A with x - b in A
    return [(ctx.add(x, ctx.neg(b)), b) for b in both]


def unique_doubling_check(A: GSet, A0: GSet) -> Verdict:
    """Elements a of A0 whose double 2a has only the representation a + a in A + A."""
    same_ctx(A.ctx, A0.ctx)
    if not A0.issubset(A):
        raise NotSubset("A0 must be a subset of A")
    ctx = A.ctx
    forced = []
    for a in A0:
        reps = _ordered_reps(A, ctx.add(a, a))
        if len(reps) == 1:
            forced.append(a)
    forced_set = GSet(ctx, forced)
    return Verdict("unique-doubling", len(forced) == len(A0), float(len(forced) - len(A0)),
                   {"size": len(A), "A0_size": len(A0)}, None, forced_set,
                   {"forced": len(forced)})


def unique_sum_targets(A: GSet, targets: Sequence) -> list[tuple | None]:
    """For each target, its unique unordered representation {u, v} in A + A, or None."""
    out = []
    for x in targets:
        reps = _ordered_reps(A, A.ctx.element(x))
        pairs = {tuple(sorted(r)) for r in reps}
        out.append(next(iter(pairs)) if len(pairs) == 1 else None)
    return out


def forced_lower_bound(pairs: Sequence[tuple | None]) -> int:
    """Lower bound on |A'| for A' + A = A + A from uniquely represented targets.

    Each uniquely represented target forces one of its two summands into A';
    pairwise disjoint pairs therefore force distinct elements.
    """
    used: set = set()
    count = 0
    for pr in pairs:
        if pr is None:
            continue
        if used.isdisjoint(pr):
            used.update(pr)
            count += 1
    return count


# ---------------------------------------------------------------------------
# measured non-saturation ratios

def _representation_counts(A: GSet) -> np.ndarray:
    ctx = A.ctx
    counts = np.zeros(ctx.order, dtype=np.int64)
    idx = A.index
    step = max(1, (1 << 22) // max(len(idx), 1))
    for lo in range(0, len(idx), step):
        sums = ctx.add_index(idx[lo: lo + step, None], idx[None, :]).ravel()
        counts += np.bincount(sums, minlength=ctx.order)
    return counts


def nonsaturation_ratio(A: GSet, eps, s: int, trials: int, seed: int,
                        pool: int = 128) -> dict:
    """Sampled ratios |A' + A_(s)| / |A' + A| for |A'| = ceil((1-eps)|A|).

    Two samplers share each A': ``uniform`` draws A_(s) uniformly from A and
    ``greedy`` grows A_(s) from a seeded candidate pool by marginal gain.
    Nothing is asserted; the report carries every row and per-sampler maxima.

    ``|A' + A|`` is computed without forming the sumset: writing D = A \\ A',
    an element x of A + A misses A' + A exactly when every representation of x
    uses two elements of D, i.e. when its representation counts in A + A and
    D + D agree.
    """
    ctx = A.ctx
    if not isinstance(ctx, FiniteGroup) or ctx.order > (1 << 26):
        raise Unsupported("nonsaturation_ratio needs a finite context of order <= 2^26")
    eps = Fraction(eps)
    if not 0 <= eps < 1 or s < 0 or trials < 1:
        raise BadParams("need 0 <= eps < 1, s >= 0, trials >= 1")
    n = len(A)
    if n == 0:
        raise EmptySet("A must be nonempty")
    size_prime = min(n, math.ceil((1 - eps) * n))
    s = min(s, n)
    rng = np.random.default_rng(seed)
    idx = A.index
    full_counts = _representation_counts(A)
    full_support = int(np.count_nonzero(full_counts))
    rows = []
    for trial in range(trials):
        keep = np.sort(rng.choice(n, size=size_prime, replace=False))
        sub = idx[keep]
        drop = np.setdiff1d(idx, sub)
        if len(drop):
            dd = ctx.add_index(drop[:, None], drop[None, :]).ravel()
            dcount = np.bincount(dd, minlength=ctx.order)
            hit = dcount > 0
            lost = int(np.count_nonzero(full_counts[hit] == dcount[hit]))
        else:
            lost = 0
        denom = full_support - lost
        for sampler in ("uniform", "greedy"):
            if s == 0:
                num = 0
            elif sampler == "uniform":
                pick = idx[rng.choice(n, size=s, replace=False)]
                num = len(np.unique(ctx.add_index(sub[:, None], pick[None, :])))
            else:
                cand = idx[rng.choice(n, size=min(pool, n), replace=False)]
                covered = np.zeros(ctx.order, dtype=bool)
                num = 0
                for _ in range(s):
                    best_gain, best = -1, None
                    for x in cand:
                        g = int(np.count_nonzero(~covered[ctx.add_index(sub, x)]))
                        if g > best_gain:
                            best_gain, best = g, x
                    covered[ctx.add_index(sub, best)] = True
                    num += best_gain
            rows.append({"trial": trial, "sampler": sampler, "size_prime": size_prime,
                         "s": s, "small": num, "full": denom,
                         "ratio": Fraction(num, denom) if denom else Fraction(0)})
    summary = {}
    for sampler in ("uniform", "greedy"):
        rs = [r["ratio"] for r in rows if r["sampler"] == sampler]
        summary[sampler] = {"max": max(rs), "mean": float(sum(rs) / len(rs))}
    return {"check": "nonsaturation-ratio", "params": {"eps": eps, "s": s, "trials": trials,
                                                       "size": n, "pool": pool},
            "seed": seed, "rows": rows, "summary": summary}
