import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest
from hypothesis import given, strategies as st

from processing.partitions import (
    Cell, GeneralizedPartition, Partition, PartitionError, arm_leg, complement, conjugate, contains,
    dominance_leq, enumerate_partitions, generalized_window, in_box, multiplicity, n_stat, partitions_of, z_lambda,
)

partitions = st.lists(st.integers(min_value=0, max_value=6), max_size=6).map(
    lambda xs: Partition(sorted(xs, reverse=True)))


def test_trailing_zeros_are_stripped():
    assert Partition((2, 1, 0, 0)) == Partition((2, 1))
    assert Partition(()).weight == 0
    assert Partition((3, 1)).padded(4) == (3, 1, 0, 0)


def test_malformed_partitions_raise():
    with pytest.raises(PartitionError):
        Partition((1, 2))
    with pytest.raises(PartitionError):
        Partition((2, -1))
    with pytest.raises(PartitionError):
        Partition((2, 2, 1)).padded(2)


def test_conjugate_of_three_one():
    assert conjugate((3, 1)) == Partition((2, 1, 1))
    assert Partition((2, 2)).conjugate() == Partition((2, 2))


def test_arm_leg_statistics():
    # cell (1,1) of (3,1): arm 2, arm-colength 0, leg 1, leg-colength 0
    assert arm_leg((3, 1), Cell(1, 1)) == (2, 0, 1, 0)
    assert arm_leg((3, 1), Cell(2, 1)) == (0, 0, 0, 1)
    with pytest.raises(PartitionError):
        arm_leg((3, 1), Cell(2, 2))


def test_small_statistics():
    assert n_stat((2, 1)) == 1
    assert n_stat((1, 1, 1)) == 3
    assert multiplicity((2, 1, 1), 1) == 2
    assert z_lambda((2, 1, 1)) == 4
    assert z_lambda((1, 1, 1)) == 6


def test_partitions_of_four_in_reverse_lex_order():
    assert partitions_of(4) == [Partition(p) for p in ((4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1))]
    assert partitions_of(4, max_length=2) == [Partition(p) for p in ((4,), (3, 1), (2, 2))]


def test_enumeration_is_graded_and_bounded():
    parts = enumerate_partitions(3, 2, 2)
    assert parts == [Partition(p) for p in ((), (1,), (2,), (1, 1), (2, 1))]
    assert in_box(1, 2) == [Partition(()), Partition((1,)), Partition((1, 1))]


def test_complement_in_box():
    assert complement((2, 1), 3, 2) == Partition((2, 1))
    assert complement((1,), 2, 2) == Partition((2, 1))
    assert complement((), 2, 2) == Partition((2, 2))
    with pytest.raises(PartitionError):
        complement((3,), 2, 2)


def test_dominance_weight_mismatch():
    with pytest.raises(PartitionError):
        dominance_leq((2,), (1,))


def test_containment():
    assert contains((3, 1), (2, 1))
    assert not contains((2, 1), (1, 1, 1))


def test_generalized_partition_split_and_shift():
    lam = GeneralizedPartition((1, -1))
    assert lam.split() == (Partition((2,)), -1)
    assert lam.shift(1) == GeneralizedPartition((2, 0))
    assert not lam.is_partition()
    with pytest.raises(PartitionError):
        GeneralizedPartition((0, 1))


def test_generalized_window_respects_bounds():
    window = generalized_window(2, -1, 2)
    assert all(lam[-1] >= -1 and lam.weight <= 2 for lam in window)
    assert GeneralizedPartition((1, -1)) in window
    assert len(set(window)) == len(window)


@given(partitions)
def test_conjugation_is_an_involution(lam):
    assert conjugate(conjugate(lam)) == lam
    assert conjugate(lam).weight == lam.weight


@given(partitions, partitions)
def test_conjugation_reverses_dominance(lam, mu):
    if lam.weight != mu.weight:
        return
    assert dominance_leq(mu, lam) == dominance_leq(conjugate(lam), conjugate(mu))


@given(partitions)
def test_complement_is_an_involution(lam):
    N = max(lam[0] if lam else 0, 1)
    n = max(lam.length, 1)
    assert complement(complement(lam, N, n), N, n) == lam
