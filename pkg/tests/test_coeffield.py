import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from processing.coeffield import (
    PochhammerPole, PolynomialZeroDivision, Q, T, RatFunc, b_norm, c_poly, c_poly_rows, configure_gcd, const,
    cprime_poly, cprime_poly_rows, monomial, one, poch_int, poch_multi, poch_partition, poch_partition_cells,
    poch_ratio, reciprocal_poch_int, tau, var, zero,
)

A = var("a")

small = st.builds(
    lambda c, i, j, k: const(c) * monomial(q=i, t=j) + const(k),
    st.integers(-3, 3), st.integers(0, 2), st.integers(-1, 2), st.integers(-2, 2),
)


def test_cancellation_to_canonical_form():
    assert (1 - Q ** 2) / (1 - Q) == 1 + Q
    assert ((1 - Q ** 2) / (1 - Q)).normalize().to_string() == (1 + Q).to_string()


def test_zero_denominator_raises():
    with pytest.raises(PolynomialZeroDivision):
        one() / zero()


def test_monomial_with_negative_exponent():
    assert monomial(q=1, t=-1) == Q / T
    assert monomial(sign=-1, q=2) == -Q ** 2


def test_poch_int_signs():
    assert poch_int(Q, 2) == (1 - Q) * (1 - Q ** 2)
    assert poch_int(A, 0) == one()
    assert poch_int(T, -1) == 1 / (1 - T / Q)


def test_poch_int_pole_and_reciprocal_convention():
    with pytest.raises(PochhammerPole):
        poch_int(Q, -1)
    # 1/(q)_{-N} = 0
    assert reciprocal_poch_int(Q, -2).is_zero()


def test_poch_partition_row_and_cell_forms_agree():
    for lam in [(1,), (2, 1), (3, 1, 1), (2, 2)]:
        assert poch_partition(A, lam) == poch_partition_cells(A, lam)


def test_poch_multi_is_a_product():
    assert poch_multi([A, Q], 2) == poch_int(A, 2) * poch_int(Q, 2)
    assert poch_multi([A], (2, 1)) == poch_partition(A, (2, 1))


def test_poch_ratio_zero_numerator_factor():
    assert poch_ratio([1], [Q], 1).is_zero()
    assert poch_ratio([A], [A], 3) == one()


def test_c_forms_match_row_forms():
    for lam in [(1,), (2,), (1, 1), (2, 1)]:
        for n in (2, 3):
            assert c_poly_rows(lam, n) == c_poly(lam)
            assert cprime_poly_rows(lam, n) == cprime_poly(lam)


def test_b_norm_and_tau_small():
    assert b_norm((1,)) == (1 - T) / (1 - Q)
    assert tau((1,)) == -one()
    assert tau((1, 1)) == 1 / T


def test_string_round_trip():
    x = (1 - A * Q) / (1 - Q * T ** 2)
    assert RatFunc.parse(x.to_string()) == x


def test_substitute_and_evaluate():
    assert (Q + T).substitute({"t": Q ** 2}) == Q + Q ** 2
    assert (Q / (1 - T)).evaluate({"q": Fraction(1, 2), "t": Fraction(1, 3)}) == Fraction(3, 4)
    with pytest.raises(PolynomialZeroDivision):
        (1 / (1 - T)).substitute({"t": 1})


def test_gcd_modes_agree():
    x = (1 - Q ** 3) / (1 - Q)
    try:
        configure_gcd("always")
        eager = (x * (1 - T) / (1 - T)).to_string()
        configure_gcd("lazy", 48)
        lazy = (x * (1 - T) / (1 - T)).to_string()
    finally:
        configure_gcd("lazy", 48)
    assert eager == lazy
    with pytest.raises(ValueError):
        configure_gcd("sometimes")


@settings(max_examples=40, deadline=None)
@given(small, small, small)
def test_field_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert x + y == y + x
    assert (x * y) * z == x * (y * z)
    if not x.is_zero():
        assert x / x == one()
