import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from math import comb

import mpmath
import pytest

from processing.chains import (
    ChainConditionError, b_sequence, chain_b_form, chain_tv, compare_chains, domain_order, drop_vanishing,
    enumerate_chain, non_integrality_holds, ordering_from_word, orderings, swap_word,
)

TOL = mpmath.mpf("1e-30")


def test_orderings_are_weakly_increasing():
    assert orderings(2, 1) == [(0, 0), (0, 1), (1, 1)]
    assert orderings(0, 3) == [()]
    with pytest.raises(ValueError):
        orderings(-1, 2)


def test_domain_order_interleaving():
    assert domain_order((1,), 1, 2) == (("y", 1), ("x", 1), ("y", 2))
    assert domain_order((0, 2), 2, 2) == (("x", 1), ("y", 1), ("y", 2), ("x", 2))
    with pytest.raises(ValueError):
        domain_order((2, 1), 2, 2)


def test_word_round_trip_and_swap():
    word = domain_order((0, 1), 2, 1)
    assert ordering_from_word(word) == (0, 1)
    assert swap_word(word) == (("y", 1), ("x", 1), ("y", 2))
    assert b_sequence((0, 1), 2, 1) == (1,)


@pytest.mark.parametrize("k1,k2", [(1, 1), (1, 2), (2, 1), (2, 2), (3, 2)])
def test_chain_has_one_domain_per_interleaving(k1, k2):
    domains = enumerate_chain(k1, k2, 0.7, 0.2)
    assert len(domains) == comb(k1 + k2, k1)
    assert len({d.word for d in domains}) == len(domains)


def test_single_pair_weights():
    beta, gamma = mpmath.mpf("0.7"), mpmath.mpf("0.2")
    with mpmath.workdps(40):
        weights = {d.ordering: d.weight for d in enumerate_chain(1, 1, beta, gamma)}
        assert abs(weights[(0,)] - 1) < TOL
        expected = mpmath.sinpi(beta) / mpmath.sinpi(beta - gamma)
        assert abs(weights[(1,)] - expected) < TOL


def test_label_reads_the_cell():
    labels = [d.label() for d in enumerate_chain(1, 1, 0.7, 0.2)]
    assert labels == ["x1<y1", "y1<x1"]


@pytest.mark.parametrize("k1,k2", [(1, 1), (1, 2), (2, 1), (2, 2)])
@pytest.mark.parametrize("gamma", [0.1, 0.15, 0.2, 0.25])
def test_b_description_gives_the_same_chain(k1, k2, gamma):
    result = compare_chains(enumerate_chain(k1, k2, 0.6, gamma), chain_b_form(k1, k2, 0.6, gamma))
    assert result["match"], result


@pytest.mark.parametrize("k1,k2", [(1, 1), (1, 2), (2, 2)])
@pytest.mark.parametrize("gamma", [0.1, 0.25])
def test_beta_one_chain_drops_to_the_short_chain(k1, k2, gamma):
    result = compare_chains(drop_vanishing(enumerate_chain(k1, k2, 1, gamma)), chain_tv(k1, k2, gamma))
    assert result["match"], result


def test_short_chain_for_one_pair_is_the_ordered_cell():
    domains = chain_tv(1, 1, 0.2)
    assert [d.ordering for d in domains] == [(0,)]
    assert abs(domains[0].weight - 1) < TOL


def test_integral_pole_is_rejected():
    assert not non_integrality_holds(1, 1, 0.2, 0.2)
    with pytest.raises(ChainConditionError):
        enumerate_chain(1, 1, 0.2, 0.2)
    with pytest.raises(ChainConditionError):
        chain_b_form(1, 1, 0.2, 0.2)


def test_vanishing_denominator_is_rejected():
    # non-integrality holds (beta - gamma = 0.8) but sin(pi beta) sits in a denominator
    assert non_integrality_holds(2, 1, 1, 0.2)
    with pytest.raises(ChainConditionError):
        enumerate_chain(2, 1, 1, 0.2)


def test_short_chain_needs_fewer_x_than_y():
    with pytest.raises(ChainConditionError):
        chain_tv(2, 1, 0.2)


def test_compare_reports_missing_domain():
    left = enumerate_chain(1, 1, 0.7, 0.2)
    result = compare_chains(left, left[:1])
    assert not result["match"]
    assert result["mismatch"]["ordering"] == [1]
