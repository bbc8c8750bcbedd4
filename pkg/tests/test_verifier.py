import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

from processing.coeffield import one
from processing.series import PowerSeries
from processing.verifier import (
    ComparisonResult, InfeasibleSize, check_feasible, verify_bfq, verify_bla, verify_coproduct,
    verify_complement_relations, verify_eval_symmetry, verify_gen_eval_I, verify_gen_eval_II, verify_heine,
    verify_phi_transformation, verify_pieri_lemma, verify_principal_formula, verify_qbt, verify_skew_cauchy,
    verify_skew_factorization, verify_double_qbt, verify_double_qbt_symmetry, verify_bilateral, verify_bilateral_reduction,
    verify_skew_binomial, verify_kawanaka_specialization, verify_pq_intermediate,
)


def test_feasibility_table():
    check_feasible("qbt", n=2, D=4)
    with pytest.raises(InfeasibleSize):
        check_feasible("qbt", n=4, D=2)
    with pytest.raises(ValueError):
        check_feasible("heine", D=-1)


def test_comparison_records_first_difference_only():
    result = ComparisonResult()
    assert result.record({"i": 0}, one(), one())
    assert not result.record({"i": 1}, one(), one() + one())
    assert result.status == "fail"
    assert result.checked == 2
    assert result.witness["index"] == {"i": 1}


def test_series_witness_names_variable_blocks():
    result = ComparisonResult()
    lhs = PowerSeries(2, 2, {(1, 0): one()})
    rhs = PowerSeries(2, 2)
    assert not result.record_series(lhs, rhs, [("x", 1), ("y", 1)])
    assert result.witness["index"] == {"x": [1], "y": [0]}


def test_qbt_degree_zero_is_trivial():
    assert verify_qbt(2, 0).ok


@pytest.mark.parametrize("n,D", [(1, 5), (2, 3)])
def test_qbt(n, D):
    result = verify_qbt(n, D)
    assert result.ok, result.witness
    assert result.checked > 0


def test_qbt_needs_a_variable():
    with pytest.raises(ValueError):
        verify_qbt(0, 2)


def test_eval_symmetry_two_variables():
    assert verify_eval_symmetry(2, 2).ok


def test_generalized_evaluation_symmetries():
    assert verify_gen_eval_I(1, 2).ok
    assert verify_gen_eval_II(1, 2).ok


def test_heine():
    assert verify_heine(4).ok


def test_phi_single_variables():
    assert verify_phi_transformation(1, 1, 3).ok


def test_double_qbt_single_variables():
    result = verify_double_qbt(1, 1, 3)
    assert result.ok, result.witness


def test_kawanaka_and_symmetry():
    assert verify_kawanaka_specialization(1, 1, 3).ok
    assert verify_double_qbt_symmetry(1, 1, 2).ok


def test_skew_identities_small():
    assert verify_skew_binomial(1, 2).ok
    assert verify_skew_factorization(1, 2).ok
    assert verify_pieri_lemma(1, 1, 2).ok
    assert verify_skew_cauchy(1, 2, 1).ok


def test_supporting_relations():
    assert verify_bla(2).ok
    assert verify_bfq(2).ok
    assert verify_coproduct(2, 1, 1).ok
    assert verify_principal_formula(2, 3).ok
    assert verify_pq_intermediate(1, 1).ok


def test_complement_relations_small_box():
    assert verify_complement_relations(1, 2).ok


def test_bilateral_reduction_exact():
    assert verify_bilateral_reduction(1, 1, 2, 1).ok


def test_bilateral_rejects_three_variables():
    with pytest.raises(InfeasibleSize):
        verify_bilateral(3, 1, 2, 1)


@pytest.mark.slow
def test_bilateral_numeric():
    result = verify_bilateral(1, 1, 3, 2)
    assert result.ok, result.details["numeric"]
    assert result.details["reduction_ab_q"]["status"] == "pass"
    assert result.details["mode"].startswith("numeric")


@pytest.mark.slow
@pytest.mark.parametrize("n,m,D", [(1, 1, 4), (2, 1, 3), (2, 2, 3)])
def test_double_qbt_matrix(n, m, D):
    assert verify_double_qbt(n, m, D).ok


@pytest.mark.slow
@pytest.mark.parametrize("n,D", [(2, 4), (3, 3)])
def test_qbt_matrix(n, D):
    assert verify_qbt(n, D).ok


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2, 3])
def test_eval_symmetry_matrix(n):
    assert verify_eval_symmetry(n, 3).ok


@pytest.mark.slow
def test_acceptance_skew_cases():
    assert verify_phi_transformation(2, 1, 3).ok
    assert verify_skew_binomial(2, 3).ok
    assert verify_pieri_lemma(2, 2, 3).ok
    assert verify_skew_cauchy(2, 3, 2).ok
    assert verify_complement_relations(2, 2).ok
    assert verify_kawanaka_specialization(1, 1, 4).ok
