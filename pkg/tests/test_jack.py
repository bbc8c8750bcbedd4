import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from fractions import Fraction

import numpy as np
import pytest

from processing.coeffield import const, one
from processing.jack import (
    jack_P, jack_value_formula, macdonald_jack_limit, normalized_jack, schur_oracle,
)
from processing.partitions import Partition, partitions_of


def test_two_box_jack():
    P = jack_P((2,), 2)
    # m11 coefficient of P^(alpha)_(2) is 2/(1 + alpha)
    assert P.coefficient((1, 1)).evaluate({"alpha": Fraction(3)}) == Fraction(1, 2)


def test_too_long_partition_raises():
    with pytest.raises(ValueError):
        jack_P((1, 1, 1), 2)


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_alpha_one_matches_alternant_schur(d):
    for lam in partitions_of(d, max_length=3):
        P = jack_P(lam, 3, alpha=1)
        expected = schur_oracle(lam, 3)
        got = {nu: c for nu, c in P.series.coeffs.items()}
        assert set(got) == set(expected)
        for nu, c in expected.items():
            assert got[nu] == const(c)


@pytest.mark.parametrize("lam", [(1,), (2,), (1, 1), (2, 1), (3,)])
def test_value_at_ones_product_formula(lam):
    n = 3
    assert jack_P(lam, n).value_at_ones() == jack_value_formula(lam, n)


def test_normalized_jack_is_one_at_ones():
    assert normalized_jack((2, 1), 2).value_at_ones() == one()


@pytest.mark.parametrize("lam", [(2,), (1, 1), (2, 1), (3,)])
def test_macdonald_to_jack_limit(lam):
    alpha = 2
    limit = macdonald_jack_limit(lam, alpha)
    exact = jack_P(lam, len(lam) + 2, alpha=alpha).series.coeffs
    for nu, value in limit.items():
        target = float(exact.get(Partition(nu), const(0)).evaluate({}))
        assert value == pytest.approx(target, abs=1e-4)


def test_vectorized_evaluation_matches_exact():
    P = jack_P((2, 1), 2)
    f = P.vectorized(alpha_value=2.0)
    pts = np.array([[0.3, 0.5], [0.7, 0.2]])
    exact = [float(P.coefficient((2, 1)).evaluate({"alpha": Fraction(2)})) * (x * x * y + x * y * y) for x, y in pts]
    assert f(pts) == pytest.approx(exact)
