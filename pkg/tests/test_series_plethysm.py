import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

from processing.coeffield import Q, T, one, poch_int, poch_partition, var
from processing.plethysm import binomial_alphabet, empty_alphabet, letters, mixed_alphabet, pleth_eval, principal_letters
from processing.series import (
    PowerSeries, from_symmetric, infinite_ratio, inverse_linear_factor, linear_factor, poch_partition_series, product,
)
from processing.symfunc import evaluate, macdonald_P, monomial_sym, normalized_Q, principal_point

A = var("a")


def test_infinite_ratio_first_coefficients():
    s = infinite_ratio(A, 1, (1,), 1, 3)
    assert s.coefficient((0,)) == one()
    assert s.coefficient((1,)) == (1 - A) / (1 - Q)
    assert s.coefficient((2,)) == poch_int(A, 2) / poch_int(Q, 2)


def test_equal_parameters_give_one():
    assert infinite_ratio(A, A, (1, 1), 2, 4) == PowerSeries.constant(1, 2, 4)


def test_geometric_series_inverts_linear_factor():
    f = linear_factor(Q, (1, 0), 2, 5) * inverse_linear_factor(Q, (1, 0), 2, 5)
    assert f == PowerSeries.constant(1, 2, 5)


def test_truncation_drops_high_degree():
    f = product([linear_factor(1, (1,), 1, 2)] * 3, 1, 2)
    assert f.coefficient((3,)).is_zero()
    assert f.coefficient((2,)) == 3


def test_first_difference_reports_lowest_monomial():
    a = PowerSeries(2, 3, {(0, 1): one(), (2, 0): one()})
    b = PowerSeries(2, 3, {(2, 0): one()})
    exps, diff = a.first_difference(b)
    assert exps == (0, 1)
    assert diff == one()
    with pytest.raises(ValueError):
        a.first_difference(PowerSeries(3, 3))


def test_symmetric_block_embedding():
    s = from_symmetric(monomial_sym((1,)), 3, 1, 2, 2)
    assert set(s.terms) == {(0, 1, 0), (0, 0, 1)}


def test_poch_partition_series_linear_term():
    s = poch_partition_series(A, (2,), (1,), 1, 2)
    assert s.coefficient((1,)) == -(A + A * Q)


def test_letters_power_sums_add():
    alphabet = letters(Q, T) + letters(A)
    assert alphabet.power_sum(2) == Q ** 2 + T ** 2 + A ** 2
    assert empty_alphabet().power_sum(3).is_zero()


def test_scaled_binomial_alphabet():
    assert binomial_alphabet(1, A).scaled(Q).power_sum(1) == (Q - Q * A) / (1 - T)


@pytest.mark.parametrize("lam", [(1,), (2,), (1, 1), (2, 1)])
def test_bla_pochhammer_as_plethysm(lam):
    assert pleth_eval(normalized_Q(lam), binomial_alphabet(1, A)) == poch_partition(A, lam)


@pytest.mark.parametrize("lam", [(1,), (2,), (1, 1)])
def test_principal_value_of_Q_normalization(lam):
    assert pleth_eval(normalized_Q(lam), principal_letters((), 2)) == poch_partition(T ** 2, lam)


def test_finite_alphabet_is_evaluation():
    P = macdonald_P((2, 1), 2)
    pts = principal_point((1,), 2, A)
    assert pleth_eval(P, letters(*pts)) == evaluate(P, pts)
    assert pleth_eval(P, mixed_alphabet(A, (1,), 2)) == evaluate(P, pts)
