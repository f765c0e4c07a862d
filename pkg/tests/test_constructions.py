import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

import oracles
from sumsetlab.constructions import (ap_plus_spikes, ap_spikes_closed_form, behrend_sphere,
                                     behrend_z_set, brute_tricolored, build, fpn_nonsaturating,
                                     interval_union_lattice, is_progression_free_mod,
                                     lift_construction, neg_blt_parts, neg_blt_set, niveau_f2,
                                     niveau_zn, spike_pair, tricolored_valid)
from sumsetlab.errors import BadParams
from sumsetlab.groups import CyclicMod, VectorSpace
from sumsetlab.sets import GSet, Zmod, sumset
from sumsetlab.verifier import hyperplane_cover_check, popcounts


def test_lower_exponent_examples():
    A = interval_union_lattice(1, 16, Fraction(1, 2))
    assert oracles.ints(A) == sorted(set(range(1, 9)) | {0, 4, 8, 12, 13, 14, 15, 16})
    assert len(A) == 14
    assert oracles.ints(sumset(A, A)) == list(range(0, 33))
    assert len(interval_union_lattice(2, 16, Fraction(1, 2))) == 14 ** 2
    with pytest.raises(BadParams):
        interval_union_lattice(1, 15, Fraction(1, 2))


def test_spike_pair_example():
    A, B = spike_pair(20, 3, Fraction(1, 4))
    assert oracles.ints(A) == list(range(1, 21)) + [80, 160, 240]
    assert oracles.ints(B) == list(range(1, 21))
    assert len(sumset(A, B)) > 3 * 20


def test_ap_spikes_examples():
    A = ap_plus_spikes(10, 3)
    assert oracles.ints(A) == list(range(8)) + [16, 24]
    assert len(sumset(A, A)) == 34 == ap_spikes_closed_form(10, 3)
    for n in (1, 4, 9, 30):
        A = ap_plus_spikes(n, 1)
        assert oracles.ints(A) == list(range(n))
        assert len(oracles.sumset(A.elements(), A.elements())) == 2 * n - 1


def test_ap_spikes_closed_form_exhaustive():
    misses = []
    for root in range(1, 21):
        for n in range(root * root, min((root + 1) ** 2, 401)):
            for k in range(1, math.isqrt(n) + 1):
                A = ap_plus_spikes(n, k)
                got = len(sumset(A, A))
                if got != ap_spikes_closed_form(n, k):
                    misses.append((n, k, got, ap_spikes_closed_form(n, k)))
    assert not misses, f"{len(misses)} mismatches, first {misses[:4]}"


def test_behrend_sphere_examples():
    t, X = behrend_sphere(2, 2)
    assert t == 5 and X.elements() == [(1, 2), (2, 1)]
    for n in (1, 2, 3):
        _, X = behrend_sphere(1, n)
        assert X.elements() == [(1,) * n]


def _has_3ap(points, modulus):
    pts = set(points)
    for x, z in itertools.permutations(pts, 2):
        s = tuple((a + b) % modulus for a, b in zip(x, z))
        for y in pts:
            if tuple((2 * v) % modulus for v in y) == s and y not in (x, z):
                return True
    return False


@pytest.mark.parametrize("r,n", [(r, n) for r in (1, 2, 3) for n in (1, 2, 3)])
def test_behrend_progression_free(r, n):
    _, X = behrend_sphere(r, n)
    assert is_progression_free_mod(X, 2 * r)
    assert not _has_3ap(X.elements(), 2 * r)


def test_behrend_z_shape():
    A, A0 = behrend_z_set(2, 2)
    assert oracles.ints(A0) == [6, 9]
    assert A0 <= A and len(A) == 2 + 16


def test_tricolored_examples():
    tr = brute_tricolored(2, 2)
    assert len(tr) == 2
    ctx = VectorSpace(2, 2)
    assert tricolored_valid(ctx, tr)
    for i, j, k in itertools.product(range(len(tr)), repeat=3):
        s = oracles.add(oracles.add(tr[i][0], tr[j][1], (2, 2)), tr[k][2], (2, 2))
        assert (s == (0, 0)) == (i == j == k)
    tr3 = brute_tricolored(3, 1)
    assert tricolored_valid(VectorSpace(3, 1), tr3) and len(tr3) >= 1


def test_fpn_examples():
    tr = brute_tricolored(2, 2)
    A = fpn_nonsaturating(2, 4, tr)
    assert len(A) == 2 + 2 + 4
    layers = {e[:2] for e in oracles.sumset(A.elements(), A.elements(), (2,) * 4)}
    assert len(layers) <= 6
    A = fpn_nonsaturating(3, 4, [])
    assert {e[:2] for e in A.elements()} == {(1, 0)} and len(A) == 9
    assert {e[:2] for e in sumset(A, A).elements()} == {(2, 0)}


def test_niveau_f2_examples():
    A, meta = niveau_f2(2, 16, 1)
    idx = A.index
    inner = idx[(idx >> 16) == 0]
    assert len(inner) == sum(math.comb(16, j) for j in range(5)) == 2517
    assert len(A) == 4 * 2517
    S = sumset(A, A).index
    ok = ((S >> 16) == 0) | (popcounts(S & 0xFFFF) <= 8)
    assert ok.all()
    with pytest.raises(BadParams):
        niveau_f2(2, 16, 3)


def test_niveau_f2_layer_invariants():
    for m, theta in ((9, Fraction(1, 2)), (16, Fraction(1))):
        _, meta = niveau_f2(1, m, theta)
        ctx = VectorSpace(2, m)
        w = popcounts(np.arange(1 << m))
        ball = GSet.from_index(ctx, np.flatnonzero(w <= meta["b0_cut"]))
        inner = GSet.from_index(ctx, np.flatnonzero(w <= meta["a0_cut"]))
        assert popcounts(sumset(ball, ball).index).max() <= 2 * theta * math.sqrt(m)
        assert popcounts(sumset(inner, ball).index).max() <= m / 2


def test_niveau_zn_size():
    A, meta = niveau_zn(2, [3, 5, 7, 11], Fraction(1, 2))
    assert len(A) == 1080 and meta["m"] == 4


def test_lift_examples():
    A = Zmod(105, [0, 104])
    hat, hat_p, p = lift_construction(A)
    assert p == 211
    assert oracles.ints(sumset(hat, hat)) == [0, 104, 208]
    assert len(sumset(hat_p, hat_p)) == 3
    A, _ = niveau_zn(2, [3, 5, 7, 11], Fraction(1, 2))
    hat, hat_p, p = lift_construction(A)
    assert len(hat) == len(hat_p) == len(A)
    assert len(sumset(hat, hat)) <= 2 * len(sumset(A, A))
    with pytest.raises(BadParams):
        lift_construction(Zmod(10, [1]), p=21)


def test_lift_is_two_faithful():
    rng = np.random.default_rng(4)
    A = GSet.from_index(CyclicMod(105), rng.choice(105, 20, replace=False))
    hat, hat_p, p = lift_construction(A)
    vals = oracles.ints(hat)
    for a, b, c, d in itertools.product(vals[:8], repeat=4):
        assert (a + b == c + d) == ((a + b) % p == (c + d) % p)


def test_neg_blt_examples():
    A = neg_blt_set(2, 2, 50)
    assert len(A) == 50
    assert not hyperplane_cover_check(A, 2, 1).covered
    A, core, prog = neg_blt_parts(2, 0, 30)
    assert len(core) == 0 and len(A) == 30
    assert len(sumset(A, A)) == 2 * 30 - 1


def test_neg_blt_random_subsets():
    A, core, _ = neg_blt_parts(2, 2, 50)
    rng = np.random.default_rng(8)
    elems = A.elements()
    for _ in range(20):
        pick = [elems[i] for i in rng.choice(len(elems), 5, replace=False)]
        assert len(oracles.sumset(pick, pick)) <= 2 * len(A) + (len(core) + 2) * 5


def test_build_is_deterministic():
    for variant, params in (("behrend", {"r": 3, "n": 2}), ("ap-spikes", {"n": 16, "k": 4}),
                            ("tricolored", {"p": 2, "n": 4}), ("neg-blt", {"d": 2, "t": 2, "n": 40})):
        assert build(variant, params)[0] == build(variant, params)[0]
    with pytest.raises(BadParams):
        build("behrend", {"r": 2})
