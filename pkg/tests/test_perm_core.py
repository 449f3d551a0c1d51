import itertools
import math
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from riffle.errors import CapacityError
from riffle.perm_core import (Permutation, cycle_type, descent_set, enumerate_sn, ides,
                              is_lyndon, lyndon_factorization, sign)
from riffle.qsym import partitions_of, z_of


def perms(max_n=8):
    return st.integers(1, max_n).flatmap(
        lambda n: st.permutations(list(range(1, n + 1))).map(lambda w: Permutation(tuple(w))))


def test_descent_set_examples():
    assert descent_set(Permutation.parse("231")).elements == (2,)
    assert descent_set(Permutation.identity(5)).elements == ()
    assert descent_set(Permutation.reversal(5)).elements == (1, 2, 3, 4)


def test_ides_examples():
    w = Permutation.parse("231")
    assert w.inverse().word == (3, 1, 2)
    assert ides(w).elements == (1,)
    assert ides(Permutation.identity(4)).elements == ()
    assert ides(Permutation.reversal(4)).elements == (1, 2, 3)


@pytest.mark.parametrize("n", range(1, 8))
def test_ides_is_descent_set_of_inverse(n):
    for w in enumerate_sn(n):
        assert ides(w) == descent_set(w.inverse())


def test_cycle_type_examples():
    ct = cycle_type(Permutation.parse("231"))
    assert ct.partition.parts == (3,) and ct.n_i(3) == 1
    assert cycle_type(Permutation.identity(4)).partition.parts == (1, 1, 1, 1)
    assert cycle_type(Permutation.parse("2143")).partition.parts == (2, 2)


def test_sign_examples():
    assert sign(Permutation.identity(6)) == 1
    assert sign(Permutation.parse("213")) == -1
    assert sign(Permutation.parse("231")) == 1


@pytest.mark.parametrize("n", range(1, 7))
def test_sign_multiplicative(n):
    words = list(itertools.permutations(range(1, n + 1)))
    signs = {w: sign(w) for w in words}
    for v in words:
        for u in words:
            assert signs[tuple(v[i - 1] for i in u)] == signs[v] * signs[u]


@given(perms())
def test_inverse_and_compose(w):
    assert w.inverse().inverse() == w
    assert w.compose(w.inverse()) == Permutation.identity(w.n)
    assert w.inverse().compose(w) == Permutation.identity(w.n)


def test_invalid_permutation():
    with pytest.raises(ValueError):
        Permutation((1, 1, 2))
    with pytest.raises(ValueError):
        Permutation(())


def test_lyndon_examples():
    assert lyndon_factorization((2, 3, 6, 4, 1, 5)).factors == ((2, 3, 6, 4), (1, 5))
    assert lyndon_factorization((3, 1, 2)).factors == ((3,), (1, 2))
    rev = lyndon_factorization(Permutation.reversal(6))
    assert rev.lengths == (1,) * 6
    assert lyndon_factorization(range(1, 8)).factors == (tuple(range(1, 8)),)
    assert is_lyndon(range(1, 8))
    assert is_lyndon((1, 3, 2)) and not is_lyndon((2, 1, 3))


def test_lyndon_empty_word():
    with pytest.raises(ValueError):
        lyndon_factorization(())


@given(st.lists(st.integers(0, 3), min_size=1, max_size=12))
def test_lyndon_invariants(word):
    f = lyndon_factorization(word).factors
    assert sum(f, ()) == tuple(word)
    assert all(is_lyndon(x) for x in f)
    assert all(a >= b for a, b in zip(f, f[1:]))


@pytest.mark.parametrize("n", range(1, 8))
def test_lyndon_length_types_count_like_cycle_types(n):
    counts = Counter(tuple(sorted(lyndon_factorization(w).lengths, reverse=True))
                     for w in itertools.permutations(range(1, n + 1)))
    for lam in partitions_of(n):
        assert counts[lam.parts] == math.factorial(n) // z_of(lam)


def test_enumerate_sn():
    assert [p.word for p in enumerate_sn(1)] == [(1,)]
    assert len(list(enumerate_sn(3))) == 6
    words = [p.word for p in enumerate_sn(4)]
    assert len(words) == 24 == len(set(words))
    with pytest.raises(CapacityError):
        next(enumerate_sn(11))
    assert len(list(enumerate_sn(4, cap=4))) == 24
