from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from sumsetlab.errors import ContextMismatch
from sumsetlab.groups import CyclicMod, IntegerLattice, PrimeProduct, VectorSpace
from sumsetlab.sets import (GSet, F2, Z, Zmod, difference_set, doubling_kappa, format_set,
                            iterated_sumset, kappa_ab, neg_set, parse_set, read_set, sum_table,
                            sumset, sumset_dense, sumset_sparse, translate, write_set)


def test_sumset_examples():
    assert sumset(Z([0, 1]), Z([0, 1])) == Z([0, 1, 2])
    A = Z([4, 9, -3])
    assert sumset(A, Z([0])) == A
    S = sumset(Zmod(7, [0, 1, 3]), Zmod(7, [0, 1, 3]))
    assert S == Zmod(7, [0, 1, 2, 3, 4, 6]) and len(S) == 6


def test_difference_translate_iterate():
    assert difference_set(Z([0, 1, 3]), Z([0, 1, 3])) == Z(range(-3, 4))
    assert translate(Z([1, 2]), 10) == Z([11, 12])
    assert iterated_sumset(Z([0, 1]), 3) == Z([0, 1, 2, 3])
    assert iterated_sumset(Zmod(5, [0, 2]), 2) == Zmod(5, [0, 2, 4])


def test_kappa_examples():
    assert doubling_kappa(Z([0])) == 1
    assert doubling_kappa(Z([0, 1, 2])) == Fraction(5, 3)
    for n in (1, 7, 30):
        assert doubling_kappa(Z(range(n))) == Fraction(2 * n - 1, n)
    assert kappa_ab(Z([0, 1]), Z([0, 10])) == Fraction(4, 2)


def test_from_index_rejects_rows():
    with pytest.raises(ContextMismatch):
        F2(3, [(0, 1, 1)])


def _finite_pair(draw):
    ctx = draw(st.sampled_from([CyclicMod(31), CyclicMod(101), VectorSpace(2, 6),
                                VectorSpace(3, 3), PrimeProduct(2, [3, 5])]))
    idx = st.lists(st.integers(0, ctx.order - 1), min_size=1, max_size=25)
    return GSet.from_index(ctx, draw(idx)), GSet.from_index(ctx, draw(idx))


finite_pairs = st.composite(_finite_pair)


def _mods(ctx):
    return tuple(ctx.radices)


@given(finite_pairs())
def test_kernels_match_naive(pair):
    A, B = pair
    want = oracles.sumset(A.elements(), B.elements(), _mods(A.ctx))
    assert set(sumset_dense(A, B).elements()) == want
    assert set(sumset_sparse(A, B).elements()) == want
    assert set(difference_set(A, B).elements()) == oracles.diffset(A.elements(), B.elements(),
                                                                   _mods(A.ctx))


@given(st.lists(st.tuples(st.integers(-50, 50), st.integers(-50, 50)), min_size=1, max_size=20),
       st.lists(st.tuples(st.integers(-50, 50), st.integers(-50, 50)), min_size=1, max_size=20))
def test_lattice_sumset_matches_naive(a, b):
    ctx = IntegerLattice(2)
    A, B = GSet(ctx, a), GSet(ctx, b)
    assert set(sumset(A, B).elements()) == oracles.sumset(a, b)
    assert set(neg_set(A).elements()) == {(-x, -y) for x, y in a}


@given(st.lists(st.integers(-200, 200), min_size=1, max_size=30),
       st.lists(st.integers(-200, 200), min_size=1, max_size=30))
def test_one_dim_lattice_kernels_agree(a, b):
    A, B = Z(a), Z(b)
    assert sumset_dense(A, B) == sumset_sparse(A, B) == Z({x + y for x in a for y in b})


@given(finite_pairs())
def test_sum_table_positions(pair):
    A, B = pair
    U, pos = sum_table(A, B)
    assert U == sumset(A, B)
    ea, eb, eu = A.elements(), B.elements(), U.elements()
    mods = _mods(A.ctx)
    for i in range(len(A)):
        for j in range(len(B)):
            assert eu[pos[i, j]] == oracles.add(ea[i], eb[j], mods)


def test_set_algebra():
    A, B = Z([1, 2, 3, 9]), Z([2, 3, 4])
    assert A | B == Z([1, 2, 3, 4, 9])
    assert A & B == Z([2, 3])
    assert A - B == Z([1, 9])
    assert Z([2, 3]) <= A and not B <= A
    assert 9 in A and 5 not in A


def test_mask_roundtrip():
    ctx = VectorSpace(2, 8)
    A = GSet.from_index(ctx, np.arange(0, 256, 7))
    assert GSet.from_mask(ctx, A.mask) == A


@pytest.mark.parametrize("S", [
    Z([-5, 0, 17]),
    GSet(IntegerLattice(3), [(1, -2, 3), (0, 0, 0)]),
    Zmod(101, [0, 50, 100]),
    F2(5, [0, 3, 31]),
    GSet(PrimeProduct(2, [3, 5]), [(1, 2, 4), (0, 0, 0)]),
])
def test_set_file_roundtrip(S, tmp_path):
    path = tmp_path / "s.set"
    write_set(path, S, comment="roundtrip")
    assert read_set(path) == S
    assert parse_set(format_set(S)) == S
