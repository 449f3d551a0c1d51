import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from riffle.errors import CapacityError
from riffle.perm_core import Permutation, enumerate_sn
from riffle.qsym import eval_complete
from riffle.shuffle_measure import BiasVector, convolve_power, exact_law
from riffle.distances import (beta_of_word, birthday_bound, birthday_exact,
                              birthday_inclusion_exclusion, birthday_partition, ell_exact,
                              enum_law, enum_metrics, linf_enum, linf_partition, sep_enum,
                              sep_partition, spectrum, sst_tail_mc, transition_matrix, tv_enum)

F = Fraction
THETAS = (F(1, 2), F(3, 10), F(7, 10))


def test_metrics_n3_one_shuffle():
    m = enum_metrics(3, F(1, 2), 1)
    assert m == {"sep": 1, "linf": 2, "tv": F(1, 3)}


@pytest.mark.parametrize("t", THETAS)
@pytest.mark.parametrize("k", range(0, 5))
def test_two_cards(t, k):
    collide = (t * t + (1 - t) ** 2) ** k
    assert sep_enum(2, t, k) == collide
    assert linf_enum(2, t, k) == collide
    assert tv_enum(2, t, k) == collide / 2
    assert sep_partition(2, t, k) == collide


def test_zero_shuffles():
    assert sep_partition(5, F(1, 3), 0) == 1
    assert linf_partition(5, F(1, 3), 0) == math.factorial(5) - 1


@pytest.mark.parametrize("n", range(1, 8))
@pytest.mark.parametrize("t", THETAS)
def test_closed_forms_agree_with_enumeration(n, t):
    for k in range(1, 5):
        m = enum_metrics(n, t, k)
        for method in ("partitions", "fast"):
            assert sep_partition(n, t, k, method=method) == m["sep"]
            assert linf_partition(n, t, k, method=method) == m["linf"]


@pytest.mark.parametrize("n", range(2, 7))
def test_extremes_at_reversal_and_identity(n):
    for t in THETAS:
        law = enum_law(n, t, 2)
        nf = math.factorial(n)
        assert sep_enum(n, t, 2) == 1 - nf * law[Permutation.reversal(n)]
        assert linf_enum(n, t, 2) == nf * law[Permutation.identity(n)] - 1
        assert min(law.probs.values()) == law[Permutation.reversal(n)]
        assert max(law.probs.values()) == law[Permutation.identity(n)]


@pytest.mark.parametrize("k", [8, 12, 15, 20, 30])
@pytest.mark.parametrize("t", [F(1, 2), F(7, 20)])
def test_float_routes_match_exact_n52(k, t):
    exact_sep = sep_partition(52, t, k)
    exact_linf = linf_partition(52, t, k)
    for method in ("fast", "partitions"):
        assert sep_partition(52, float(t), k, method=method) == pytest.approx(
            float(exact_sep), rel=1e-9, abs=1e-13)
        assert linf_partition(52, float(t), k, method=method) == pytest.approx(
            float(exact_linf), rel=1e-9, abs=1e-15)


def test_real_k_float_route():
    # a non-integer k is allowed on the float route and interpolates monotonically
    lo, mid, hi = (sep_partition(20, 0.5, k) for k in (7, 7.5, 8))
    assert hi < mid < lo


def test_monotone_in_k():
    seps = [float(sep_partition(52, F(1, 2), k)) for k in range(1, 31)]
    assert all(a >= b for a, b in zip(seps, seps[1:]))
    # two piles cannot produce the reversal of 6 cards until 8 piles are in play (k=3)
    ex = [sep_partition(6, F(3, 10), k) for k in range(0, 12)]
    assert ex[:3] == [1, 1, 1]
    assert all(a > b for a, b in zip(ex[2:], ex[3:]))


@pytest.mark.parametrize("n", range(2, 8))
@pytest.mark.parametrize("t", THETAS)
def test_separation_is_birthday_probability(n, t):
    theta = BiasVector.two_pile(t)
    for k in (1, 2, 3):
        eta = convolve_power(theta, k).weights
        assert sep_partition(n, theta, k) == birthday_exact(n, eta)
        assert sep_partition(n, theta, k) <= birthday_bound(n, theta, k)


def test_birthday_examples():
    assert birthday_bound(52, F(1, 2), 15) == F(1326, 32768)
    assert birthday_exact(2, [F(1, 2), F(1, 2)]) == F(1, 2)
    assert birthday_exact(3, [F(1, 2), F(1, 2)]) == 1
    assert float(birthday_exact(23, [F(1, 365)] * 365)) == pytest.approx(0.507297, abs=1e-6)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 5), st.lists(st.integers(1, 9), min_size=1, max_size=4))
def test_birthday_three_ways(n, raw):
    eta = [F(v, sum(raw)) for v in raw]
    a = birthday_exact(n, eta)
    assert a == birthday_partition(n, eta)
    if n >= 2:
        assert a == birthday_inclusion_exclusion(n, eta)


def test_birthday_inclusion_exclusion_cap():
    with pytest.raises(CapacityError):
        birthday_inclusion_exclusion(7, [F(1, 2), F(1, 2)])


def test_spectrum_small():
    t = F(3, 10)
    p2 = t * t + (1 - t) ** 2
    entries = {e.counts: (e.eigenvalue, e.multiplicity) for e in spectrum(2, t)}
    assert entries == {(2, 0): (1, 1), (0, 1): (p2, 1)}


@pytest.mark.parametrize("n", range(1, 41))
def test_spectrum_multiplicities(n):
    assert sum(e.multiplicity for e in spectrum(n, 0.5)) == math.factorial(n)


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("t", [F(1, 2), F(3, 10)])
def test_spectrum_trace(n, t):
    tr = sum(e.eigenvalue * e.multiplicity for e in spectrum(n, t))
    assert tr == math.factorial(n) * eval_complete(n, [t, 1 - t])


@pytest.mark.parametrize("n", range(1, 5))
def test_transition_matrix_eigenvalues(n):
    K, perms = transition_matrix(n, BiasVector.two_pile(F(3, 10)))
    assert all(sum(row) == 1 for row in K)
    got = np.sort(np.linalg.eigvals(np.array(K, dtype=float)).real)
    want = np.sort([float(e.eigenvalue) for e in spectrum(n, F(3, 10))
                    for _ in range(e.multiplicity)])
    assert got == pytest.approx(want, abs=1e-9)


def test_beta_of_word():
    t = F(3, 10)
    p = lambda j: t ** j + (1 - t) ** j
    assert beta_of_word(Permutation.reversal(5).word, t) == 1
    assert beta_of_word(Permutation.identity(5).word, t) == p(5)
    assert beta_of_word((2, 3, 6, 4, 1, 5), t) == p(4) * p(2)


@pytest.mark.parametrize("n", range(1, 7))
def test_lyndon_eigenvalue_multiset_matches_spectrum(n):
    t = F(3, 10)
    from collections import Counter
    got = Counter(beta_of_word(w.word, t) for w in enumerate_sn(n))
    want = Counter()
    for e in spectrum(n, t):
        want[e.eigenvalue] += e.multiplicity
    assert got == want


def test_ell_exact_is_linf_plus_one():
    assert ell_exact(10, F(1, 2), 6) == linf_partition(10, F(1, 2), 6) + 1


def test_capacity_errors():
    with pytest.raises(CapacityError):
        sep_enum(11, F(1, 2), 1)
    with pytest.raises(CapacityError):
        sep_partition(70, F(1, 2), 10)
    with pytest.raises(CapacityError):
        sep_partition(20, F(1, 2), 10, method="fast", partition_cap=10)
    with pytest.raises(CapacityError):
        enum_law(3, F(1, 2), 30)


def test_sst_tail_mc_validation_and_determinism():
    with pytest.raises(ValueError):
        sst_tail_mc(4, 0.5, trials=0)
    a = sst_tail_mc(5, 0.4, 30, 120_000, seed=7, threads=1)
    b = sst_tail_mc(5, 0.4, 30, 120_000, seed=7, threads=4)
    assert a.tail == b.tail
    assert a.tail[0] == 1.0 and a.censored == 0


def test_sst_tail_tracks_separation():
    est = sst_tail_mc(5, 0.3, 40, 200_000, seed=3)
    for k in range(0, 15):
        exact = float(sep_partition(5, F(3, 10), k))
        assert abs(est.tail[k] - exact) <= 5 * est.stderr[k] + 1e-3
