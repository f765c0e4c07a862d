"""Seeded check battery shared by the CLI suites and the acceptance tests.

A suite is a list of :class:`Task` objects.  Each task owns a per-instance
seed derived from (global seed, check name, instance index), so adding
instances to one check never perturbs another.  Running a task yields one
or more result rows carrying the CSV columns plus a JSON-able witness.
"""

from __future__ import annotations

import itertools
import math
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import constructions as K
from .errors import Infeasible, NotFound, ZeroWalks
from .groups import CyclicMod, IntegerLattice, PrimeProduct, VectorSpace
from .saturator import (brute_min_subset, find_triple, greedy_diff_saturate,
                        greedy_pair_saturate, greedy_self_saturate, saturating_cover,
                        select_full_dim_subset)
from .sets import GSet, sumset, sumset_dense, sumset_sparse, translate_mask
from .verifier import (_jsonable, harper_check, hamming_neighborhood, hyperplane_cover_check,
                       naive_direction_cover_check, nonsaturation_ratio, plunnecke_check,
                       popcounts, theorem_bound_check, unique_doubling_check,
                       unique_sum_targets, forced_lower_bound, walk_bound_certificate,
                       weight_ball)

CSV_COLUMNS = ["suite", "check", "ctx", "n", "s", "kappa", "achieved", "bound", "pass",
               "seed", "ms"]
SUITES = ("theorems", "constructions", "covers", "niveau")


def instance_seed(global_seed: int, check: str, idx: int) -> int:
    ss = np.random.SeedSequence(int(global_seed), spawn_key=(zlib.crc32(check.encode()), int(idx)))
    return int(ss.generate_state(1, dtype=np.uint32)[0])


def _row(check, ctx=None, n=None, s=None, kappa=None, achieved=None, bound=None,
         passed=None, witness=None) -> dict:
    return {"check": check, "ctx": ctx, "n": n, "s": s, "kappa": kappa,
            "achieved": achieved, "bound": bound, "pass": passed, "witness": witness}


@dataclass
class Task:
    suite: str
    check: str
    idx: int
    func: str
    kwargs: dict = field(default_factory=dict)
    seed: int | None = None


def run_task(task: Task) -> list[dict]:
    t0 = time.perf_counter()
    rows = CHECKS[task.func](seed=task.seed, **task.kwargs)
    ms = (time.perf_counter() - t0) * 1000.0 / max(len(rows), 1)
    for r in rows:
        r["suite"] = task.suite
        r["seed"] = task.seed
        r["instance"] = task.idx
        r["ms"] = round(ms, 3)
    return rows


def run_tasks(tasks: list[Task], jobs: int = 1) -> list[dict]:
    """Run tasks, possibly in worker processes; rows come back in task order."""
    if jobs <= 1:
        out = [run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            out = list(pool.map(run_task, tasks, chunksize=max(1, len(tasks) // (8 * jobs))))
    return [r for rows in out for r in rows]


# ---------------------------------------------------------------------------
# random inputs

FAMILIES = {"Z": None, "Z31": 31, "Z101": 101}


def _random_set(rng, family: str, n: int) -> GSet:
    p = FAMILIES[family]
    if p is None:
        return GSet(IntegerLattice(1), rng.choice(201, size=n, replace=False).tolist())
    return GSet(CyclicMod(p), rng.choice(p, size=n, replace=False).tolist())


def _fmt_kappa(k) -> str:
    return str(Fraction(k))


# ---------------------------------------------------------------------------
# theorem checks

def chk_greedy(seed, kind: str, family: str, max_n: int = 30) -> list[dict]:
    rng = np.random.default_rng(seed)
    cap = max_n if FAMILIES[family] is None else min(max_n, FAMILIES[family])
    n = int(rng.integers(4, cap + 1))
    s = int(rng.integers(1, 7))
    A = _random_set(rng, family, n)
    c = Fraction(1, 14)
    if kind == "pair":
        B = _random_set(rng, family, n)
        out = greedy_pair_saturate(A, B, s, c)
        v = theorem_bound_check(out, "asym")
        achieved = out.achieved_a + out.achieved_b
    elif kind == "self":
        out = greedy_self_saturate(A, s, c)
        v = theorem_bound_check(out, "sym")
        achieved = out.achieved_a
    else:
        out = greedy_diff_saturate(A, s, c)
        v = theorem_bound_check(out, "diff")
        achieved = out.achieved_a
    bound = achieved - v.slack
    return [_row(f"greedy-{kind}", A.ctx.label(), n, s, _fmt_kappa(out.kappa), achieved,
                 round(bound, 6), bool(v.passed), {"record": out.to_record(), "verdict": v.to_record()})]


_SMALL_SUBSETS = [c for r in range(1, 6) for c in itertools.combinations(range(9), r)]


def chk_walks(seed, a_index: int) -> list[dict]:
    """Every B against one A in the exhaustive family; one row per walk length."""
    lat = IntegerLattice(1)
    A = GSet(lat, _SMALL_SUBSETS[a_index])
    tallies = {k: [0, 0, 0] for k in (1, 2, 3)}       # certified, valid, vacuous
    worst = {k: None for k in (1, 2, 3)}
    for bvals in _SMALL_SUBSETS:
        B = GSet(lat, bvals)
        C = sumset(A, B)
        for k in (1, 2, 3):
            try:
                cert = walk_bound_certificate(A, B, C, k)
            except ZeroWalks:
                tallies[k][2] += 1
                continue
            tallies[k][0] += 1
            tallies[k][1] += cert.valid
            if not cert.valid:
                worst[k] = {"B": list(bvals), "w": cert.w, "bound": cert.bound,
                            "target": cert.target}
    rows = []
    for k, (cert_n, ok, vac) in tallies.items():
        rows.append(_row(f"walks-k{k}", "Z", len(A), k, None, ok, cert_n, ok == cert_n,
                         {"A": list(_SMALL_SUBSETS[a_index]), "vacuous": vac,
                          "failure": worst[k]}))
    return rows


def chk_ap_spikes(seed, n: int, k: int, draws: int = 200) -> list[dict]:
    A = K.ap_plus_spikes(n, k)
    size = len(sumset(A, A))
    closed = K.ap_spikes_closed_form(n, k)
    kappa = Fraction(size, n)
    rows = [_row("ap-spikes-closed-form", "Z", n, k, _fmt_kappa(kappa), size, closed,
                 size == closed and len(A) == n, {"n": n, "k": k})]
    rng = np.random.default_rng(seed)
    worst = None
    fails = 0
    for _ in range(draws):
        s = int(rng.integers(1, n + 1))
        As = A.subset(rng.choice(n, size=s, replace=False))
        Bs = A.subset(rng.choice(n, size=s, replace=False))
        got = len(sumset(As, Bs))
        bound = 2 * n + 2 * kappa * s
        if got > bound:
            fails += 1
        gap = bound - got
        if worst is None or gap < worst[0]:
            worst = (gap, s, got, bound)
    rows.append(_row("ap-spikes-subsets", "Z", n, worst[1], _fmt_kappa(kappa), worst[2],
                     float(worst[3]), fails == 0, {"draws": draws, "failures": fails,
                                                  "min_gap": worst[0]}))
    return rows


def chk_spike_pair(seed, n: int = 20, k: int = 3, eps="1/4", cap: int = 3) -> list[dict]:
    A, B = K.spike_pair(n, k, Fraction(eps))
    total = len(sumset(A, B))
    target = 3 * n
    try:
        s_star, wit = brute_min_subset(A, B, target, cap)
        found = {"s": s_star, "witness": wit}
    except NotFound:
        found = None
    rows = [_row("spike-pair-sumset", "Z", n, None, _fmt_kappa(Fraction(total, n)), total,
                 k * n, total > k * n),
            _row("spike-pair-no-saturation", "Z", n, cap, None,
                 None if found is None else found["s"], target, found is None,
                 {"found": found})]
    return rows


def chk_triple(seed, family: str, max_n: int) -> list[dict]:
    rng = np.random.default_rng(seed)
    if family == "Z":
        n = int(rng.integers(1, max_n + 1))
        vals = 4 * max_n
        A = GSet(IntegerLattice(1), rng.choice(vals, size=n, replace=False).tolist())
        B = GSet(IntegerLattice(1), rng.choice(vals, size=n, replace=False).tolist())
    else:
        p = FAMILIES[family]
        n = int(rng.integers(1, p // 4 + 1))
        A = GSet(CyclicMod(p), rng.choice(p, size=n, replace=False).tolist())
        B = GSet(CyclicMod(p), rng.choice(p, size=n, replace=False).tolist())
    try:
        wit = find_triple(A, B)
        got = len(sumset(A, wit))
        ok = True
    except NotFound:
        wit, got, ok = None, None, False
    return [_row(f"triple-{family}", A.ctx.label(), n, None if wit is None else len(wit), None,
                 got, 2 * n - 1, ok, {"A": A, "B": B, "witness": wit})]


def _random_finite_ctx(rng):
    kind = int(rng.integers(0, 3))
    if kind == 0:
        return CyclicMod(int(rng.integers(2, 600)))
    if kind == 1:
        p = int(rng.choice([2, 3, 5]))
        top = {2: 10, 3: 6, 5: 4}[p]
        return VectorSpace(p, int(rng.integers(1, top + 1)))
    q = int(rng.choice([2, 3]))
    primes = [int(v) for v in rng.choice([5, 7, 11, 13], size=int(rng.integers(1, 3)), replace=False)]
    return PrimeProduct(q, tuple(primes))


def chk_engine(seed, count: int = 100) -> list[dict]:
    """Dense bitmask and sorted-vector kernels agree on random finite instances."""
    rng = np.random.default_rng(seed)
    bad = []
    for i in range(count):
        ctx = _random_finite_ctx(rng)
        G = ctx.order
        na, nb = (int(rng.integers(1, min(G, 60) + 1)) for _ in range(2))
        A = GSet.from_index(ctx, rng.choice(G, size=na, replace=False))
        B = GSet.from_index(ctx, rng.choice(G, size=nb, replace=False))
        if sumset_dense(A, B) != sumset_sparse(A, B):
            bad.append({"ctx": ctx.descriptor(), "A": A, "B": B})
    return [_row("engine-equivalence", "mixed", count, None, None, count - len(bad), count,
                 not bad, {"failures": bad[:3]})]


def chk_cauchy_davenport(seed, p: int) -> list[dict]:
    """All nonempty A, B in Z_p.  Sumset masks are built by adding one element of B
    at a time: mask(A + (B u {b})) = mask(A + B) | translate(mask(A), b)."""
    ctx = CyclicMod(p)
    full = 1 << p
    violations = 0
    pairs = 0
    pop = [bin(m).count("1") for m in range(full)] if p <= 12 else None
    for amask in range(1, full):
        shifts = [translate_mask(ctx, amask, (b,)) for b in range(p)]
        na = pop[amask]
        sums = [0] * full
        for bmask in range(1, full):
            low = bmask & -bmask
            b = low.bit_length() - 1
            sums[bmask] = sums[bmask ^ low] | shifts[b]
            pairs += 1
            if sums[bmask].bit_count() < min(p, na + pop[bmask] - 1):
                violations += 1
    return [_row("cauchy-davenport", ctx.label(), p, None, None, pairs - violations, pairs,
                 violations == 0, {"pairs": pairs, "violations": violations})]


def chk_plunnecke(seed, family: str, count: int = 100) -> list[dict]:
    rng = np.random.default_rng(seed)
    fails = 0
    for _ in range(count):
        if family == "F2":
            ctx = VectorSpace(2, 6)
            mk = lambda m: GSet.from_index(ctx, rng.choice(64, size=m, replace=False))
        elif family == "Z":
            mk = lambda m: GSet(IntegerLattice(1), rng.choice(60, size=m, replace=False).tolist())
        else:
            ctx = CyclicMod(101)
            mk = lambda m: GSet.from_index(ctx, rng.choice(101, size=m, replace=False))
        X = mk(int(rng.integers(1, 12)))
        Ys = [mk(int(rng.integers(1, 12))) for _ in range(int(rng.integers(1, 3)))]
        fails += not plunnecke_check(X, Ys).passed
    return [_row("plunnecke", family, count, None, None, count - fails, count, fails == 0)]


# ---------------------------------------------------------------------------
# covers

def _cover_row(check, S, T, extra=None):
    out = saturating_cover(S, T)
    wit = {"record": out.to_record()}
    if extra:
        wit.update(extra)
    bound_ok = len(out.s_star) <= math.ceil(Fraction(len(sumset(S, T))) / out.tau)
    return out, _row(check, S.ctx.label(), len(S), len(out.s_prime) + len(out.t_prime),
                     None, len(out.s_prime) + len(out.t_prime), None,
                     bool(out.covered and bound_ok), wit)


def chk_cover_random(seed, family: str) -> list[dict]:
    rng = np.random.default_rng(seed)
    if family == "F2":
        ctx = VectorSpace(2, 6)
        S = GSet.from_index(ctx, rng.choice(64, size=int(rng.integers(1, 30)), replace=False))
        T = GSet.from_index(ctx, rng.choice(64, size=int(rng.integers(1, 30)), replace=False))
    else:
        n = int(rng.integers(1, 25))
        S, T = _random_set(rng, family, n), _random_set(rng, family, int(rng.integers(1, 25)))
    return [_cover_row(f"cover-random-{family}", S, T)[1]]


def chk_cover_coset(seed) -> list[dict]:
    rng = np.random.default_rng(seed)
    ctx = VectorSpace(2, 10)
    dim = int(rng.integers(1, 7))
    gens = rng.integers(1, 1 << 10, size=dim)
    span = {0}
    for g in gens:
        span |= {int(x) ^ int(g) for x in span}
    shift_s, shift_t = (int(v) for v in rng.integers(0, 1 << 10, size=2))
    S = GSet.from_index(ctx, np.array(sorted(x ^ shift_s for x in span)))
    T = GSet.from_index(ctx, np.array(sorted(x ^ shift_t for x in span)))
    return [_cover_row("cover-coset-F2^10", S, T, {"dim": len(S).bit_length() - 1})[1]]


def chk_cover_behrend(seed, r: int, n: int) -> list[dict]:
    A, A0 = K.behrend_z_set(r, n)
    forced = unique_doubling_check(A, A0).witness
    out, row = _cover_row("cover-behrend-Z", A, A)
    in_s = forced.issubset(out.s_prime)
    in_union = forced.issubset(out.s_prime | out.t_prime)
    row["witness"].update(forced=forced, forced_in_s_prime=in_s, forced_in_union=in_union)
    row2 = _row("cover-behrend-forced-in-S'", "Z", len(A), len(forced), None,
                len(forced & out.s_prime), len(forced), bool(in_s),
                {"r": r, "n": n, "forced": forced, "s_prime": out.s_prime,
                 "t_prime": out.t_prime, "forced_in_union": in_union})
    return [row, row2]


def chk_cover_fpn(seed, p: int, n: int) -> list[dict]:
    triples = K.brute_tricolored(p, n - 2, 8, seed)
    A = K.fpn_nonsaturating(p, n, triples)
    out, row = _cover_row(f"cover-fpn-F{p}^{n}", A, A)
    return [row]


def _random_planar(rng):
    style = int(rng.integers(0, 3))
    size = int(rng.integers(2, 21))
    if style == 0:          # scattered
        pts = rng.integers(-4, 5, size=(size, 2))
    elif style == 1:        # on a few parallel lines
        v = rng.integers(-2, 3, size=2)
        if not v.any():
            v = np.array([1, 0])
        lines = int(rng.integers(1, 4))
        bases = rng.integers(-3, 4, size=(lines, 2))
        pts = np.array([bases[int(rng.integers(0, lines))] + int(rng.integers(-3, 4)) * v
                        for _ in range(size)])
    else:                   # grid-like
        pts = np.stack([rng.integers(0, 4, size=size), rng.integers(0, 3, size=size)], axis=1)
    return GSet.from_coords(IntegerLattice(2), pts)


def chk_hyperplane_oracle(seed) -> list[dict]:
    rng = np.random.default_rng(seed)
    A = _random_planar(rng)
    t = int(rng.integers(1, 5))
    fast = hyperplane_cover_check(A, t, 1)
    slow = naive_direction_cover_check(A, t)
    witness_ok = True
    if fast.covered:
        from .verifier import class_labels
        _, firsts = class_labels(A.coords, fast.basis)
        witness_ok = len(firsts) <= t
    return [_row("cover-check-vs-naive", "Z^2", len(A), t, None, int(fast.covered),
                 int(slow.covered), fast.covered == slow.covered and witness_ok,
                 {"A": A, "fast": fast.to_record(), "naive": slow.to_record()})]


def chk_full_dim(seed, d: int) -> list[dict]:
    rng = np.random.default_rng(seed)
    k = d - 1 if d == 2 else int(rng.integers(1, d))
    t = int(rng.integers(1, 4))
    size = int(rng.integers(10, 60))
    pts = rng.integers(0, 6, size=(size, d))
    A = GSet.from_coords(IntegerLattice(d), pts)
    try:
        X = select_full_dim_subset(A, t, k, d)
    except Infeasible as exc:
        ok = exc.cover is not None and exc.cover.covered
        return [_row(f"full-dim-d{d}", f"Z^{d}", len(A), t, None, None, k, ok,
                     {"infeasible": True, "cover": exc.cover.to_record() if exc.cover else None})]
    chk = hyperplane_cover_check(X, t, k)
    return [_row(f"full-dim-d{d}", f"Z^{d}", len(A), t, None, len(X), k,
                 X.issubset(A) and not chk.covered, {"subset": X, "k": k})]


def chk_neg_blt(seed, d: int, t: int, n: int, draws: int = 100) -> list[dict]:
    A, core, prog = K.neg_blt_parts(d, t, n)
    rng = np.random.default_rng(seed)
    uncovered = t == 0 or not hyperplane_cover_check(A, t, d - 1).covered
    fails = 0
    worst = None
    for _ in range(draws):
        s = int(rng.integers(1, len(A) + 1))
        sub = A.subset(rng.choice(len(A), size=s, replace=False))
        got = len(sumset(sub, sub))
        loose = 2 * len(A) + (len(core) + 2) * s
        # A'+A' lies in (P+P) u (A_C+A')
        tight = (2 * len(prog) - 1 if len(prog) else 0) + len(core) * s
        ok = got <= loose and got <= tight
        fails += not ok
        if worst is None or loose - got < worst[0]:
            worst = (loose - got, s, got, loose)
    return [_row(f"neg-blt-d{d}-t{t}", f"Z^{d}", len(A), worst[1], None, worst[2], worst[3],
                 uncovered and fails == 0,
                 {"core": core, "uncovered": uncovered, "failures": fails})]


# ---------------------------------------------------------------------------
# constructions

def chk_behrend_free(seed, r: int, n: int) -> list[dict]:
    t, X = K.behrend_sphere(r, n)
    ok = K.is_progression_free_mod(X, 2 * r)
    return [_row("behrend-progression-free", f"Z_{2 * r}^{n}", len(X), None, None, len(X), t,
                 ok, {"t": t, "X": X})]


def chk_behrend_forced(seed, r: int, n: int) -> list[dict]:
    A, A0 = K.behrend_z_set(r, n)
    v = unique_doubling_check(A, A0)
    doubling = len(sumset(A, A))
    return [_row("behrend-forced-exactly-A0", "Z", len(A), None,
                 _fmt_kappa(Fraction(doubling, len(A))), len(v.witness), len(A0),
                 v.witness == A0 and doubling <= 6 * len(A), {"A0": A0, "forced": v.witness})]


def chk_lower_exponent(seed, d: int, m: int, delta: str) -> list[dict]:
    A = K.interval_union_lattice(d, m, Fraction(delta))
    root = math.isqrt(m)
    base = len(set(range(1, math.floor(Fraction(delta) * m) + 1))
               | {k * root for k in range(root)} | {m - k for k in range(root)})
    size = len(sumset(A, A))
    return [_row("lower-exponent", A.ctx.label(), len(A), None,
                 _fmt_kappa(Fraction(size, len(A))), size, (2 * m) ** d,
                 len(A) == base ** d, {"d": d, "m": m, "delta": delta})]


def chk_fpn(seed, p: int, n: int) -> list[dict]:
    triples = K.brute_tricolored(p, n - 2, 8, seed)
    A = K.fpn_nonsaturating(p, n, triples)
    targets = K.fpn_targets(p, triples)
    pairs = unique_sum_targets(A, targets)
    forced = forced_lower_bound(pairs)
    doubling = len(sumset(A, A))
    ok = all(pr is not None for pr in pairs) and forced >= len(triples) and doubling <= 6 * len(A)
    return [_row(f"fpn-F{p}^{n}", f"F_{p}^{n}", len(A), len(triples),
                 _fmt_kappa(Fraction(doubling, len(A))), forced, len(triples), ok,
                 {"triples": triples})]


def chk_tricolored(seed, p: int, n: int) -> list[dict]:
    triples = K.brute_tricolored(p, n, 16, seed)
    ok = K.tricolored_valid(VectorSpace(p, n), triples)
    return [_row("tricolored-valid", f"F_{p}^{n}", p ** n, None, None, len(triples), None, ok,
                 {"triples": triples})]


# ---------------------------------------------------------------------------
# niveau

def chk_niveau_containment(seed, p: int = 2, m: int = 16, theta: str = "1") -> list[dict]:
    A, meta = K.niveau_f2(p, m, Fraction(theta))
    S = sumset(A, A)
    idx = S.index
    inner = popcounts(idx & ((1 << m) - 1))
    outside = int(np.count_nonzero(((idx >> m) != 0) & (inner > Fraction(m, 2))))
    return [_row("niveau-containment", A.ctx.label(), len(A), None,
                 _fmt_kappa(Fraction(len(S), len(A))), outside, 0, outside == 0,
                 {"meta": meta, "sumset": len(S)})]


def chk_harper_random(seed, m: int = 10, count: int = 50) -> list[dict]:
    rng = np.random.default_rng(seed)
    ctx = VectorSpace(2, m)
    sizes = np.cumsum([math.comb(m, j) for j in range(m + 1)])
    fails = 0
    for _ in range(count):
        q = int(rng.integers(0, m))
        lo = int(sizes[q])
        size = int(rng.integers(lo, 1 << m)) if lo < (1 << m) else lo
        A = GSet.from_index(ctx, rng.choice(1 << m, size=size, replace=False))
        fails += not harper_check(A).passed
    return [_row("harper-random", ctx.label(), count, None, None, count - fails, count,
                 fails == 0)]


def chk_harper_balls(seed, m: int = 10) -> list[dict]:
    ok = True
    for q in range(m):
        ball = weight_ball(m, q)
        nb = hamming_neighborhood(ball, 1)
        ok &= nb == weight_ball(m, q + 1) and bool(harper_check(ball).passed)
    return [_row("harper-balls", f"F_2^{m}", m, None, None, int(ok), 1, ok)]


def chk_harper_exhaustive(seed, m: int = 4) -> list[dict]:
    ctx = VectorSpace(2, m)
    G = 1 << m
    sizes = np.cumsum([math.comb(m, j) for j in range(m + 1)])
    flips = [1 << i for i in range(m)]
    fails = 0
    for amask in range(1, 1 << G):
        elems = [x for x in range(G) if amask >> x & 1]
        nb = set(elems)
        for x in elems:
            nb.update(x ^ f for f in flips)
        q = int(np.searchsorted(sizes, len(elems), side="right")) - 1
        if len(nb) < int(sizes[min(q + 1, m)]):
            fails += 1
    # cross-check the engine neighbourhood on a stride of subsets
    for amask in range(1, 1 << G, 997):
        A = GSet.from_mask(ctx, amask)
        elems = [x for x in range(G) if amask >> x & 1]
        nb = {x ^ f for x in elems for f in flips} | set(elems)
        fails += hamming_neighborhood(A, 1) != GSet.from_index(ctx, np.array(sorted(nb)))
    return [_row("harper-exhaustive", ctx.label(), (1 << G) - 1, None, None,
                 (1 << G) - 1 - fails, (1 << G) - 1, fails == 0)]


def chk_lift(seed, q: int, primes: tuple, theta: str) -> list[dict]:
    A, _ = K.niveau_zn(q, list(primes), Fraction(theta))
    hat, hat_p, p = K.lift_construction(A)
    N = A.ctx.order
    ss_hat = sumset(hat, hat)
    ss = len(sumset(A, A))
    inside = int(ss_hat.coords.min()) >= 0 and int(ss_hat.coords.max()) <= 2 * N - 2
    ok = (len(hat) == len(A) == len(hat_p) and inside and len(ss_hat) <= 2 * ss
          and len(sumset(hat_p, hat_p)) == len(ss_hat))
    return [_row("lift", A.ctx.label(), len(A), None, None, len(ss_hat), 2 * ss, ok,
                 {"N": N, "p": p})]


def chk_ratio(seed, eps: str = "1/20", s: int = 3, trials: int = 100,
              p: int = 2, m: int = 16, theta: str = "1") -> list[dict]:
    A, _ = K.niveau_f2(p, m, Fraction(theta))
    rep = nonsaturation_ratio(A, Fraction(eps), s, trials, seed)
    rows = []
    for sampler, summ in rep["summary"].items():
        rows.append(_row(f"nonsaturation-{sampler}", A.ctx.label(), len(A), s, None,
                         str(summ["max"]), None, None,
                         {"summary": summ, "rows": [r for r in rep["rows"]
                                                    if r["sampler"] == sampler]}))
    return rows


CHECKS = {name[4:]: fn for name, fn in globals().items() if name.startswith("chk_")}


# ---------------------------------------------------------------------------
# suite assembly

DEFAULT_SCALE = {
    "greedy_instances": 500, "max_n": 30, "triple_instances": 300, "triple_max_n": 12,
    "engine_instances": 10_000, "plunnecke_instances": 1000, "ap_max_root": 12,
    "ap_draws": 200, "cover_random": 60, "cover_cosets": 40, "hyperplane_instances": 200,
    "full_dim_instances": 40, "neg_blt_draws": 100, "ratio_trials": 100, "walks": True,
    "cd_primes": [7, 11], "harper_random": 200,
}


def _tasks_for(suite: str, seed: int, scale: dict) -> list[Task]:
    sc = {**DEFAULT_SCALE, **(scale or {})}
    out: list[Task] = []

    def add(check, func, instances=1, **kw):
        for i in range(instances):
            out.append(Task(suite, check, i, func, dict(kw), instance_seed(seed, check, i)))

    if suite == "theorems":
        for kind in ("pair", "self", "diff"):
            for fam in FAMILIES:
                add(f"greedy-{kind}-{fam}", "greedy", sc["greedy_instances"], kind=kind,
                    family=fam, max_n=sc["max_n"])
        if sc["walks"]:
            for i in range(len(_SMALL_SUBSETS)):
                out.append(Task(suite, "walks", i, "walks", {"a_index": i},
                                instance_seed(seed, "walks", i)))
        for n in range(1, sc["ap_max_root"] ** 2 + 1):
            for k in range(1, math.isqrt(n) + 1):
                out.append(Task(suite, "ap-spikes", n * 100 + k, "ap_spikes",
                                {"n": n, "k": k, "draws": sc["ap_draws"]},
                                instance_seed(seed, "ap-spikes", n * 100 + k)))
        add("spike-pair", "spike_pair")
        add("triple-Z", "triple", sc["triple_instances"], family="Z", max_n=sc["triple_max_n"])
        for fam in ("Z31", "Z101"):
            add(f"triple-{fam}", "triple", sc["triple_instances"], family=fam, max_n=0)
        chunks = max(1, sc["engine_instances"] // 100)
        add("engine", "engine", chunks, count=sc["engine_instances"] // chunks)
        for p in sc["cd_primes"]:
            out.append(Task(suite, f"cauchy-davenport-{p}", 0, "cauchy_davenport", {"p": p},
                            instance_seed(seed, "cauchy-davenport", p)))
        for fam in ("Z", "Z101", "F2"):
            add(f"plunnecke-{fam}", "plunnecke", 10, family=fam,
                count=max(1, sc["plunnecke_instances"] // 10))
    elif suite == "covers":
        for fam in ("Z", "Z101", "F2"):
            add(f"cover-{fam}", "cover_random", sc["cover_random"], family=fam)
        add("cover-coset", "cover_coset", sc["cover_cosets"])
        for r in (2, 3):
            for n in (1, 2):
                add(f"cover-behrend-{r}-{n}", "cover_behrend", r=r, n=n)
        for p, n in ((2, 4), (2, 5), (3, 3), (3, 4)):
            add(f"cover-fpn-{p}-{n}", "cover_fpn", p=p, n=n)
        add("hyperplane", "hyperplane_oracle", sc["hyperplane_instances"])
        for d in (2, 3):
            add(f"full-dim-{d}", "full_dim", sc["full_dim_instances"], d=d)
        for d, t in ((2, 2), (2, 3), (3, 2), (1, 2), (2, 0)):
            add(f"neg-blt-{d}-{t}", "neg_blt", d=d, t=t, n=50, draws=sc["neg_blt_draws"])
    elif suite == "constructions":
        for r in (1, 2, 3):
            for n in (1, 2, 3):
                add(f"behrend-{r}-{n}", "behrend_free", r=r, n=n)
        for r in (2, 3):
            for n in (1, 2):
                add(f"behrend-forced-{r}-{n}", "behrend_forced", r=r, n=n)
        for d, m in ((1, 16), (2, 16), (1, 64), (3, 9)):
            add(f"lower-exponent-{d}-{m}", "lower_exponent", d=d, m=m, delta="1/2")
        for p, n in ((2, 4), (2, 5), (3, 3), (3, 4), (5, 3)):
            add(f"fpn-{p}-{n}", "fpn", p=p, n=n)
        for p, n in ((2, 2), (3, 1), (3, 2), (2, 4)):
            add(f"tricolored-{p}-{n}", "tricolored", p=p, n=n)
    elif suite == "niveau":
        add("niveau-containment", "niveau_containment")
        add("harper-random", "harper_random", max(1, sc["harper_random"] // 50), count=50)
        add("harper-balls", "harper_balls")
        add("harper-exhaustive", "harper_exhaustive")
        for q, primes, theta in ((2, (3, 5, 7, 11), "1/2"), (2, (3, 5, 7, 11, 13), "1/2"),
                                 (3, (5, 7, 11, 13), "1/2"), (2, (3, 5, 7, 11), "1/4"),
                                 (2, (5, 7, 11, 13), "1/2")):
            add(f"lift-{q}-{'-'.join(map(str, primes))}", "lift", q=q, primes=primes, theta=theta)
        add("nonsaturation", "ratio", trials=sc["ratio_trials"])
    else:
        raise ValueError(f"unknown suite {suite!r}")
    return out


def suite_tasks(name: str, seed: int, scale: dict | None = None) -> list[Task]:
    names = SUITES if name == "all" else (name,)
    return [t for s in names for t in _tasks_for(s, seed, scale or {})]


def csv_value(v) -> str:
    if v is None:
        return ""
    if v is True:
        return "true"
    if v is False:
        return "false"
    if isinstance(v, float):
        return repr(round(v, 9))
    return str(v)


def row_to_csv(r: dict) -> list[str]:
    out = []
    for col in CSV_COLUMNS:
        v = r.get(col)
        if col == "pass" and v is None:
            out.append("n/a")
        else:
            out.append(csv_value(v))
    return out


def row_to_json(r: dict) -> dict:
    return _jsonable({k: v for k, v in r.items() if k != "ms"})
