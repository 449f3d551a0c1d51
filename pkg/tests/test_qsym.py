import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from riffle.perm_core import enumerate_sn, ides
from riffle.qsym import (Composition, DescentSubset, Partition, composition_to_subset,
                         compositions_of, cycle_index_partitions, eval_complete,
                         eval_elementary, eval_fundamental, eval_monomial, eval_power,
                         partition_count, partitions_of, refines, subset_to_composition, z_of)

F = Fraction

rationals = st.fractions(min_value=0, max_value=1, max_denominator=20)


def test_composition_subset_examples():
    assert composition_to_subset((1, 2, 1)).elements == (1, 3)
    assert composition_to_subset((5,)).elements == ()
    assert subset_to_composition({1}, 4).parts == (1, 3)
    with pytest.raises(ValueError):
        subset_to_composition({4}, 4)


@given(st.lists(st.integers(1, 4), min_size=1, max_size=7))
def test_composition_round_trip(parts):
    alpha = Composition(tuple(parts))
    assert alpha.to_subset().to_composition() == alpha


def test_refines_examples():
    assert refines((1, 2, 1), (1, 3))
    assert refines((1, 1, 2), (1, 3))
    assert not refines((2, 1, 1), (1, 3))
    assert refines((2, 2), (2, 2))
    with pytest.raises(ValueError):
        refines((1, 1), (3,))


@pytest.mark.parametrize("n", range(1, 7))
def test_refines_iff_subset_containment(n):
    comps = list(compositions_of(n))
    assert len(comps) == 2 ** (n - 1)
    for a in comps:
        for b in comps:
            assert refines(a, b) == a.to_subset().issuperset(b.to_subset())


def test_monomial_examples():
    assert eval_monomial((2,), [F(1, 3)]) == F(1, 9)
    assert eval_monomial((1, 1), [F(1, 3), F(2, 3)]) == F(2, 9)
    assert eval_monomial((1, 2, 1), [F(1, 2), F(1, 2)]) == 0


def test_fundamental_examples():
    x = [F(1, 5), F(3, 10), F(1, 2)]
    for n in range(1, 6):
        assert eval_fundamental(DescentSubset((), n), x) == eval_complete(n, x)
        assert eval_fundamental(DescentSubset(tuple(range(1, n)), n), x) == eval_elementary(n, x)
    a, b = F(2, 7), F(5, 7)
    assert eval_fundamental(DescentSubset((1,), 3), [a, b]) == a * b ** 2
    # variable order matters
    assert eval_fundamental(DescentSubset((1,), 3), [b, a]) == b * a ** 2


def test_fundamental_doc_example_n4():
    # Q_{1} = M_(1,3) + M_(1,2,1) + M_(1,1,2) + M_(1,1,1,1)
    x = [F(1, 10), F(2, 10), F(3, 10), F(4, 10)]
    rhs = sum(eval_monomial(a, x) for a in [(1, 3), (1, 2, 1), (1, 1, 2), (1, 1, 1, 1)])
    assert eval_fundamental(DescentSubset((1,), 4), x) == rhs


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.lists(rationals, min_size=1, max_size=4), st.data())
def test_fundamental_equals_monomial_refinement_sum(n, x, data):
    D = data.draw(st.sets(st.integers(1, max(1, n - 1))).filter(lambda s: all(d < n for d in s)))
    beta = subset_to_composition(D, n)
    rhs = sum(eval_monomial(a, x) for a in compositions_of(n) if refines(a, beta))
    assert eval_fundamental(DescentSubset(tuple(D), n), x) == rhs


@pytest.mark.parametrize("n", range(1, 7))
def test_fundamental_over_sn_sums_to_power(n):
    x = [F(1, 7), F(2, 7), F(3, 7), F(1, 7)]
    total = sum(eval_fundamental(ides(w), x) for w in enumerate_sn(n))
    assert total == sum(x) ** n


def test_fundamental_float_matches_exact():
    x = [F(1, 8), F(3, 8), F(1, 4), F(1, 4)]
    D = DescentSubset((2, 3), 5)
    assert eval_fundamental(D, [float(v) for v in x]) == pytest.approx(
        float(eval_fundamental(D, x)), rel=1e-14)


def test_symmetric_examples():
    assert eval_elementary(2, [0.3, 0.7]) == pytest.approx(0.21)
    assert eval_elementary(3, [F(1, 2), F(1, 2)]) == 0
    assert eval_power(2, [0.3, 0.7]) == pytest.approx(0.58)
    assert eval_power(2, [F(3, 10), F(7, 10)]) == F(29, 50)
    assert eval_complete(2, [F(1, 2), F(1, 2)]) == F(3, 4)


def test_partition_examples():
    assert len(list(partitions_of(4))) == 5
    assert [p.parts for p in partitions_of(0)] == [()]
    assert z_of((1,) * 6) == math.factorial(6)
    assert z_of((2, 2, 1)) == 8
    assert Partition((1, 3, 1)).parts == (3, 1, 1)


@pytest.mark.parametrize("n", range(0, 21))
def test_partitions_complete_and_class_sizes(n):
    parts = [p.parts for p in partitions_of(n)]
    assert len(parts) == len(set(parts)) == partition_count(n)
    assert all(sum(p) == n for p in parts)
    assert sum(Fraction(math.factorial(n), z_of(p)) for p in parts) == math.factorial(n)


def test_partition_count_known():
    assert partition_count(60) == 966467
    assert partition_count(40) == 37338


@pytest.mark.parametrize("n", range(1, 9))
def test_power_sum_expansions(n):
    x = [F(1, 6), F(1, 3), F(1, 2), F(2, 9)]
    xs = [None] + [eval_power(j, x) for j in range(1, n + 1)]
    assert cycle_index_partitions(n, xs, signed=True) == eval_elementary(n, x)
    assert cycle_index_partitions(n, xs, signed=False) == eval_complete(n, x)
    fx = [None] + [float(v) for v in xs[1:]]
    assert cycle_index_partitions(n, fx, signed=False) == pytest.approx(
        float(eval_complete(n, x)), rel=1e-12)
