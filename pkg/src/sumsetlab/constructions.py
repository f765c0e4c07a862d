"""Generators for the explicit extremal set families.

Each generator is deterministic in its parameters (the tricolored search also
takes a seed).  :func:`build` maps a variant name and a parameter dict to
``(GSet, metadata)`` for the CLI.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

import numpy as np
from sympy import isprime, nextprime

from .errors import BadParams, Infeasible, NoPrimeFound, Unsupported
from .groups import CyclicMod, FiniteGroup, IntegerLattice, PrimeProduct, VectorSpace
from .saturator import select_full_dim_subset
from .sets import GSet
from .verifier import popcounts

# ---------------------------------------------------------------------------
# lattice families


def interval_union_lattice(d: int, m: int, delta, eps=None) -> GSet:
    """``({1..floor(delta m)} u B)^d`` with B the sqrt(m)-spaced points plus the top sqrt(m)."""
    root = math.isqrt(m)
    if m <= 1 or root * root != m:
        raise BadParams("m must be a perfect square > 1")
    if d < 1:
        raise BadParams("d must be >= 1")
    delta = Fraction(delta)
    upper = 1 - Fraction(1, root)
    if not 0 < delta < upper:
        raise BadParams(f"delta must lie in (0, {upper})")
    if eps is not None:
        eps = Fraction(eps)
        if not 0 < eps or not delta > 2 / (eps * root):
            raise BadParams("delta must exceed 2 / (eps sqrt m)")
    base = set(range(1, math.floor(delta * m) + 1))
    base |= {k * root for k in range(root)}
    base |= {m - k for k in range(root)}
    pts = sorted(base)
    if d == 1:
        return GSet(IntegerLattice(1), pts)
    return GSet.from_coords(IntegerLattice(d), np.array(list(product(pts, repeat=d))))


def spike_pair(n: int, k: int, eps) -> tuple[GSet, GSet]:
    """A = {1..n} plus k spikes at multiples of n/eps (rounded up), B = {1..n}."""
    eps = Fraction(eps)
    if n < 1 or k < 1 or not 0 < eps <= 1:
        raise BadParams("need n >= 1, k >= 1 and 0 < eps <= 1")
    spikes = [math.ceil(i * n / eps) for i in range(1, k + 1)]
    block = list(range(1, n + 1))
    if spikes[0] <= n:
        raise BadParams("spikes must sit beyond the block")
    return Z_(block + spikes), Z_(block)


def ap_plus_spikes(n: int, k: int) -> GSet:
    """{0..n0-1} u {2 n0, ..., k n0} with n0 = n - k + 1, a set of size n."""
    if k < 1 or k * k > n:
        raise BadParams("need 1 <= k <= sqrt(n)")
    n0 = n - k + 1
    return Z_(list(range(n0)) + [j * n0 for j in range(2, k + 1)])


def ap_spikes_closed_form(n: int, k: int) -> int:
    return (k + 1) * (n - k + 1) + k - 1


def Z_(values) -> GSet:
    return GSet(IntegerLattice(1), [int(v) for v in values])


# ---------------------------------------------------------------------------
# progression-free sphere sets


def sphere_layers(r: int, n: int) -> dict[int, list[tuple]]:
    layers: dict[int, list[tuple]] = {}
    for x in product(range(1, r + 1), repeat=n):
        layers.setdefault(sum(v * v for v in x), []).append(x)
    return layers


def behrend_sphere(r: int, n: int) -> tuple[int, GSet]:
    """Largest level set of the squared norm on [1, r]^n (smallest level on ties)."""
    if r < 1 or n < 1:
        raise BadParams("need r, n >= 1")
    if r ** n > 2_000_000:
        raise BadParams("r^n too large to enumerate")
    layers = sphere_layers(r, n)
    best = max(sorted(layers), key=lambda t: (len(layers[t]), -t))
    return best, GSet(IntegerLattice(n), layers[best])


def digit_map(x, r: int) -> int:
    """Base-2r positional value with the first coordinate least significant."""
    return sum(int(v) * (2 * r) ** i for i, v in enumerate(x))


def behrend_z_set(r: int, n: int) -> tuple[GSet, GSet]:
    """(A, A0): A0 the digit image of the sphere set, A = A0 u [-2T, -T-1], T = (2r)^n."""
    if r < 2 or n < 1:
        raise BadParams("need r >= 2 and n >= 1")
    T = (2 * r) ** n
    if T > 10**6:
        raise BadParams("T = (2r)^n must be <= 10^6")
    _, X = behrend_sphere(r, n)
    A0 = Z_(digit_map(x, r) for x in X)
    A = A0 | Z_(range(-2 * T, -T))
    return A, A0


def is_progression_free_mod(X: GSet, modulus: int) -> bool:
    """No three distinct points x, y, z of X with 2y = x + z coordinatewise mod ``modulus``."""
    pts = [tuple(v % modulus for v in x) for x in X]
    present = set(pts)
    for i, x in enumerate(pts):
        for z in pts[i + 1:]:
            # 2y = x + z has gcd(2, m) solutions per coordinate
            options = []
            for a, b in zip(x, z):
                s = (a + b) % modulus
                sols = [y for y in range(modulus) if (2 * y) % modulus == s]
                options.append(sols)
            for y in product(*options):
                if y in present and y != x and y != z:
                    return False
    return True


# ---------------------------------------------------------------------------
# tricolored sum-free collections and the F_p^n construction


def _tricolored_valid(ctx: FiniteGroup, xs, ys, zs) -> bool:
    xs, ys, zs = (np.asarray(v, dtype=np.int64) for v in (xs, ys, zs))
    m = len(xs)
    if m == 0:
        return True
    s = ctx.add_index(ctx.add_index(xs[:, None, None], ys[None, :, None]), zs[None, None, :])
    return bool(np.array_equal(s == 0, _diag3(m)))


def _diag3(m: int) -> np.ndarray:
    out = np.zeros((m, m, m), dtype=bool)
    idx = np.arange(m)
    out[idx, idx, idx] = True
    return out


def tricolored_valid(ctx: FiniteGroup, triples) -> bool:
    if not triples:
        return True
    idx = [[ctx.canonical_index(t[j]) for t in triples] for j in range(3)]
    return _tricolored_valid(ctx, *idx)


def brute_tricolored(p: int, n: int, budget: int = 32, seed: int = 0) -> list[tuple]:
    """Randomised greedy search for triples with x_i + y_j + z_k = 0 iff i = j = k."""
    ctx = VectorSpace(p, n)
    if ctx.order > 3 ** 6:
        raise BadParams("p^n must be <= 729")
    if budget < 1:
        raise BadParams("budget must be >= 1")
    rng = np.random.default_rng(seed)
    G = ctx.order
    best: list[tuple[int, int, int]] = [(0, 0, 0)]
    for _ in range(budget):
        xs: list[int] = []
        ys: list[int] = []
        zs: list[int] = []
        for _ in range(4 * G):
            x, y = (int(v) for v in rng.integers(0, G, size=2))
            z = int(ctx.neg_index(ctx.add_index(x, y)))
            if x in xs or y in ys or z in zs:
                continue
            X = np.array(xs + [x], dtype=np.int64)
            Y = np.array(ys + [y], dtype=np.int64)
            Zs = np.array(zs + [z], dtype=np.int64)
            m = len(X)
            # only sums that involve the new index can be new zeros
            s_new_x = ctx.add_index(ctx.add_index(x, Y[:, None]), Zs[None, :])
            s_new_y = ctx.add_index(ctx.add_index(X[:, None], y), Zs[None, :])
            s_new_z = ctx.add_index(ctx.add_index(X[:, None], Y[None, :]), z)
            ok = True
            for s in (s_new_x, s_new_y, s_new_z):
                hits = np.argwhere(s == 0)
                if any((i, j) != (m - 1, m - 1) for i, j in hits):
                    ok = False
                    break
            if ok:
                xs.append(x)
                ys.append(y)
                zs.append(z)
        if len(xs) > len(best):
            best = list(zip(xs, ys, zs))
    triples = [tuple(ctx.from_index(i) for i in t) for t in best]
    if not tricolored_valid(ctx, triples):
        raise RuntimeError("tricolored search produced an invalid collection")
    return triples


def fpn_nonsaturating(p: int, n: int, triples) -> GSet:
    """{(0,0)} x X  u  {(0,1)} x Y  u  {(1,0)} x F_p^(n-2) inside F_p^n."""
    if n < 3:
        raise BadParams("n must be >= 3")
    inner = VectorSpace(p, n - 2)
    triples = [tuple(inner.element(v) for v in t) for t in triples]
    if not tricolored_valid(inner, triples):
        raise BadParams("triples are not tricolored sum-free")
    pts = [(0, 0) + t[0] for t in triples] + [(0, 1) + t[1] for t in triples]
    pts += [(1, 0) + w for w in product(range(p), repeat=n - 2)]
    return GSet(VectorSpace(p, n), pts)


def fpn_targets(p: int, triples) -> list[tuple]:
    """The sums (0, 1, -z_i) whose only representation is (0,0,x_i) + (0,1,y_i)."""
    return [(0, 1) + tuple((-v) % p for v in t[2]) for t in triples]


# ---------------------------------------------------------------------------
# niveau sets


def _weight_cut(m: int, theta: Fraction, top: Fraction) -> int:
    """Largest integer w with w <= top - theta sqrt(m) (exact), or -1 if none."""
    w = math.floor(top)
    while w >= 0:
        gap = top - w
        if gap >= 0 and gap * gap >= theta * theta * m:
            return w
        w -= 1
    return -1


def _ball_cut(m: int, theta: Fraction) -> int:
    """Largest integer w with w <= theta sqrt(m)."""
    w = 0
    while Fraction(w + 1) ** 2 <= theta * theta * m:
        w += 1
    return w


def niveau_thresholds(m: int, theta, delta) -> dict:
    theta, delta = Fraction(theta), Fraction(delta)
    root = math.sqrt(m)
    return {
        "a0_cut": _weight_cut(m, theta, Fraction(m, 2)),
        "b0_cut": _ball_cut(m, theta),
        "upper_layer": _weight_cut(m, delta, Fraction(m, 2)),
        "half": Fraction(m, 2),
        "a0_threshold": m / 2 - float(theta) * root,
        "b0_threshold": float(theta) * root,
        "delta_threshold": m / 2 - float(delta) * root,
    }


def _niveau_checks(m: int, theta: Fraction) -> None:
    if theta <= 0:
        raise BadParams("theta must be positive")
    if theta * theta * m > Fraction(m * m, 16):
        raise BadParams("need theta sqrt(m) <= m/4")
    if _weight_cut(m, theta, Fraction(m, 2)) < 0:
        raise BadParams("m/2 - theta sqrt(m) < 0 leaves the inner ball empty")


def niveau_f2(p: int, m: int, theta, delta=None) -> tuple[GSet, dict]:
    """Niveau set in F_2^p x F_2^m: inner ball over x1 = 0, small ball elsewhere."""
    theta = Fraction(theta)
    delta = Fraction(7, 24) * theta if delta is None else Fraction(delta)
    if p < 1 or m < 1 or p + m > 22:
        raise BadParams("need p, m >= 1 and p + m <= 22")
    _niveau_checks(m, theta)
    meta = niveau_thresholds(m, theta, delta)
    ctx = VectorSpace(2, p + m)
    idx = np.arange(1 << (p + m), dtype=np.int64)
    outer = idx >> m
    w = popcounts(idx & ((1 << m) - 1))
    keep = np.where(outer == 0, w <= meta["a0_cut"], w <= meta["b0_cut"])
    meta.update(p=p, m=m, theta=theta, delta=delta)
    return GSet.from_index(ctx, idx[keep]), meta


def odd_residue_pattern(digits: np.ndarray) -> np.ndarray:
    """0/1 matrix: coordinate i is an odd residue in [1, p_i - 1]."""
    return (digits % 2 == 1).astype(np.int64)


def niveau_zn(q: int, primes, theta, delta=None) -> tuple[GSet, dict]:
    """Niveau set in Z_q x prod Z_{p_i} with weight = number of odd-residue coordinates."""
    primes = tuple(int(v) for v in primes)
    theta = Fraction(theta)
    delta = Fraction(7, 24) * theta if delta is None else Fraction(delta)
    if not primes or any(pi <= q for pi in primes):
        raise BadParams("need at least one p_i and every p_i > q")
    ctx = PrimeProduct(q, primes)
    if ctx.order > (1 << 22):
        raise BadParams("q * prod p_i must be <= 2^22")
    m = len(primes)
    _niveau_checks(m, theta)
    meta = niveau_thresholds(m, theta, delta)
    idx = np.arange(ctx.order, dtype=np.int64)
    digits = ctx.digits(idx)
    w = odd_residue_pattern(digits[:, 1:]).sum(axis=1)
    keep = np.where(digits[:, 0] == 0, w <= meta["a0_cut"], w <= meta["b0_cut"])
    meta.update(q=q, primes=list(primes), m=m, theta=theta, delta=delta)
    return GSet.from_index(ctx, idx[keep]), meta


# ---------------------------------------------------------------------------
# lifting Z_N-type sets to Z and Z_p


def crt_weights(radices) -> tuple[int, list[int]]:
    N = math.prod(radices)
    weights = []
    for r in radices:
        rest = N // r
        if math.gcd(rest, r) != 1:
            raise Unsupported("factors must be pairwise coprime")
        weights.append(rest * pow(rest, -1, r) % N)
    return N, weights


def lift_construction(A: GSet, p: int | None = None) -> tuple[GSet, GSet, int]:
    """Representatives of A in [0, N-1] and their reduction modulo a prime p > 2N."""
    ctx = A.ctx
    if not isinstance(ctx, FiniteGroup):
        raise Unsupported("lift needs a finite context")
    N, weights = crt_weights(ctx.radices)
    if p is None:
        p = int(nextprime(2 * N))
        if p > 4 * N:
            raise NoPrimeFound(f"least prime above {2 * N} exceeds {4 * N}")
    elif not (isprime(p) and p > 2 * N):
        raise BadParams("p must be a prime > 2N")
    dig = ctx.digits(A.index)
    vals = np.zeros(len(A), dtype=object)
    for j, wgt in enumerate(weights):
        vals = vals + dig[:, j].astype(object) * wgt
    reps = sorted(int(v) % N for v in vals)
    return Z_(reps), GSet(CyclicMod(p), reps), p


# ---------------------------------------------------------------------------
# full-dimensional set plus a long progression


def neg_blt_parts(d: int, t: int, n: int) -> tuple[GSet, GSet, GSet]:
    """(A, A_C, P): A_C beats every t-fold hyperplane cover, P an axis progression."""
    if not 1 <= d <= 3:
        raise BadParams("need 1 <= d <= 3")
    if t < 0 or n < 1:
        raise BadParams("need t >= 0 and n >= 1")
    ctx = IntegerLattice(d)
    if t == 0:
        core = GSet(ctx, [])
        side = 0
    else:
        side = t + 2
        while True:
            cube = GSet.from_coords(ctx, np.array(list(product(range(side), repeat=d))))
            if len(cube) > 500:
                raise BadParams("t too large for a desk-scale cube")
            try:
                core = select_full_dim_subset(cube, t, d - 1, d)
                break
            except Infeasible:
                side += 1
    length = n - len(core)
    if length < 0:
        raise BadParams(f"n = {n} is below the core size {len(core)}")
    prog = GSet.from_coords(ctx, np.array([[side + i] + [0] * (d - 1) for i in range(length)],
                                          dtype=np.int64).reshape(-1, d))
    return core | prog, core, prog


def neg_blt_set(d: int, t: int, n: int) -> GSet:
    return neg_blt_parts(d, t, n)[0]


# ---------------------------------------------------------------------------
# CLI dispatch

def build(variant: str, params: dict) -> tuple[GSet, dict]:
    """Construct ``variant`` from a parameter dict; returns (set, metadata)."""
    v = variant.replace("_", "-")
    P = dict(params)
    try:
        if v == "lower-exponent":
            S = interval_union_lattice(int(P["d"]), int(P["m"]), Fraction(P["delta"]), P.get("eps"))
            return S, {"size": len(S)}
        if v == "spike-pair":
            A, B = spike_pair(int(P["n"]), int(P["k"]), Fraction(P["eps"]))
            return A, {"size": len(A), "B": [e[0] for e in B]}
        if v == "ap-spikes":
            n, k = int(P["n"]), int(P["k"])
            S = ap_plus_spikes(n, k)
            return S, {"size": len(S), "closed_form": ap_spikes_closed_form(n, k)}
        if v == "behrend":
            t, X = behrend_sphere(int(P["r"]), int(P["n"]))
            return X, {"t": t, "size": len(X)}
        if v == "behrend-z":
            A, A0 = behrend_z_set(int(P["r"]), int(P["n"]))
            return A, {"A0": [e[0] for e in A0], "T": (2 * int(P["r"])) ** int(P["n"])}
        if v == "tricolored":
            p, n = int(P["p"]), int(P["n"])
            if n < 3:
                raise BadParams("tricolored construction needs n >= 3")
            tr = brute_tricolored(p, n - 2, int(P.get("budget", 32)), int(P.get("seed", 0)))
            S = fpn_nonsaturating(p, n, tr)
            return S, {"m": len(tr), "triples": [[list(x) for x in t] for t in tr]}
        if v == "niveau-f2":
            return niveau_f2(int(P["p"]), int(P["m"]), Fraction(P["theta"]),
                             None if P.get("delta") is None else Fraction(P["delta"]))
        if v == "niveau-zn":
            return niveau_zn(int(P["q"]), [int(x) for x in P["primes"]], Fraction(P["theta"]),
                             None if P.get("delta") is None else Fraction(P["delta"]))
        if v == "neg-blt":
            A, core, prog = neg_blt_parts(int(P["d"]), int(P["t"]), int(P["n"]))
            return A, {"core": [list(e) for e in core], "progression_length": len(prog)}
    except KeyError as exc:
        raise BadParams(f"variant {variant} missing parameter {exc}") from None
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, BadParams):
            raise
        raise BadParams(f"bad parameters for {variant}: {exc}") from None
    raise BadParams(f"unknown variant {variant!r}")
