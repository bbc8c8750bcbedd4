import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

from processing.coeffield import Q, T, b_norm, const, one, zero
from processing.partitions import Partition, dominance_leq, partitions_of
from processing.symfunc import (
    gram_schmidt, lr_coefficients, macdonald_P, macdonald_Q, monomial_sym, multiply, normalized_P,
    normalized_tilde, power_sum_sym, principal_spec, principal_value_formula, qt_pnorm, scalar_product_qt, skew_Q,
)

U = (1 + Q) * (1 - T) / (1 - Q * T)


def test_single_box_is_m1():
    assert macdonald_P((1,), 2).coeffs == {Partition((1,)): one()}


def test_two_row_coefficient():
    P = macdonald_P((2,), 2)
    assert P.coefficient((2,)) == one()
    assert P.coefficient((1, 1)) == U


def test_too_many_parts_gives_zero():
    assert macdonald_P((1, 1, 1), 2).is_zero()


def test_multiply_in_power_sums():
    m1 = monomial_sym((1,))
    assert multiply(m1, m1) == monomial_sym((2,)) + monomial_sym((1, 1)).scale(2)
    assert power_sum_sym((2,)) == monomial_sym((2,))


@pytest.mark.parametrize("d", [1, 2, 3])
def test_unitriangular_in_dominance(d):
    for lam in partitions_of(d):
        P = macdonald_P(lam)
        assert P.coefficient(lam) == one()
        assert all(dominance_leq(mu, lam) for mu in P.coeffs)


@pytest.mark.parametrize("d", [2, 3])
def test_orthogonality_and_duality(d):
    parts = partitions_of(d)
    for lam in parts:
        for mu in parts:
            pairing = scalar_product_qt(macdonald_P(lam), macdonald_Q(mu))
            assert pairing == (one() if lam == mu else zero())


def test_schur_at_q_equal_t():
    P = macdonald_P((2, 1))
    assert P.coefficient((2, 1)).substitute({"q": T}) == one()
    assert P.coefficient((1, 1, 1)).substitute({"q": T}) == const(2)


def test_t_equal_one_gives_monomials():
    P = macdonald_P((2, 1))
    assert P.coefficient((1, 1, 1)).substitute({"t": 1}).is_zero()


def test_stability_under_restriction():
    assert macdonald_P((2, 1), 3).restrict(2) == macdonald_P((2, 1), 2)


def test_gram_schmidt_with_the_qt_pairing_matches_cache():
    table = gram_schmidt(2, qt_pnorm)
    assert table[Partition((2,))][Partition((1, 1))] == U


def test_littlewood_richardson_two_boxes():
    f = lr_coefficients((1,), (1,))
    assert f[Partition((2,))] == one()
    assert f[Partition((1, 1))] == (1 - Q) * (1 + T) / (1 - Q * T)
    assert set(f) == {Partition((2,)), Partition((1, 1))}


def test_lr_support_conditions():
    for lam in lr_coefficients((2,), (1,)):
        assert lam.weight == 3
        assert lam[0] >= 2


def test_skew_by_empty_is_Q():
    assert skew_Q((2, 1), ()) == macdonald_Q((2, 1))
    assert skew_Q((1,), (2,)).is_zero()


def test_Q_is_b_times_P():
    assert macdonald_Q((2,), 2) == macdonald_P((2,), 2).scale(b_norm((2,)))


@pytest.mark.parametrize("lam", [(), (1,), (2,), (1, 1), (2, 1)])
def test_principal_value_formula_against_evaluation(lam):
    assert principal_spec(normalized_P(lam, 2), (), n=2) == principal_value_formula(lam, 2)


def test_tilde_normalization_is_one_at_the_principal_point():
    assert principal_spec(normalized_tilde((2, 1), 2), (), n=2) == one()


def test_tabulated_three_box_coefficients():
    P21 = macdonald_P((2, 1))
    assert P21.coefficient((1, 1, 1)) == (1 - T) * (2 + Q + T + 2 * Q * T) / (1 - Q * T ** 2)
    P3 = macdonald_P((3,))
    assert P3.coefficient((2, 1)) == (1 - T) * (1 + Q + Q ** 2) / (1 - Q ** 2 * T)
    assert P3.coefficient((1, 1, 1)) == (
        (1 - T) ** 2 * (1 + Q) * (1 + Q + Q ** 2) / ((1 - Q * T) * (1 - Q ** 2 * T)))
