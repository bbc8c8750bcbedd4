import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import mpmath
import pytest

from processing.coeffield import PochhammerPole
from processing.qnum import (
    GENERAL_READINGS, GammaPoleError, LatticeIntegrand, PoleProximity, QContext, TailBoundError,
    adjudicate_q_sl3_general, check_ahk, check_pole_distance, check_qbeta, check_qkm, check_q_sl3, check_q_sl3_general,
    compositions, q_sl3_general_exponent, qgamma, qint_multi, qpoch_int_num, qpoch_num, qpoch_real, shell_decay,
)

# Shared context: q = 1/2 at 256 bits
CTX = QContext()


def test_context_validation():
    with pytest.raises(ValueError):
        QContext(q=mpmath.mpf(1))
    with pytest.raises(ValueError):
        QContext(K=0)
    assert CTX.doubled().prec == 512


def test_finite_pochhammer_both_signs():
    q = mpmath.mpf(1) / 2
    assert qpoch_int_num(q, 2, q) == (1 - q) * (1 - q * q)
    with pytest.raises(PochhammerPole):
        qpoch_int_num(q, -1, q)


def test_infinite_product_tail_bound():
    inf = qpoch_num(mpmath.mpf(1) / 2, CTX)
    assert inf.bound <= CTX.tolerance
    with mpmath.workprec(CTX.prec):
        half = mpmath.mpf(1) / 2
        assert abs(inf.value - mpmath.qp(half, half)) < mpmath.mpf("1e-28")


def test_huge_base_cannot_be_truncated():
    with pytest.raises(TailBoundError):
        qpoch_num(mpmath.mpf(2) ** 300, QContext(K=4))


def test_real_index_matches_integer_index():
    with mpmath.workprec(256):
        b = mpmath.mpf(3) / 10
        assert qpoch_real(b, 3, CTX).value == qpoch_int_num(b, 3, CTX.q)


def test_qgamma_of_two_is_one():
    assert abs(qgamma(2, CTX).value - 1) < mpmath.mpf("1e-25")
    with pytest.raises(GammaPoleError):
        qgamma(0, CTX)


def test_qgamma_recurrence():
    with mpmath.workprec(256):
        x = mpmath.mpf(7) / 3
        lhs = qgamma(x + 1, CTX).value
        rhs = (1 - CTX.q ** x) / (1 - CTX.q) * qgamma(x, CTX).value
        assert abs(lhs / rhs - 1) < mpmath.mpf("1e-28")


def test_jackson_integral_of_x():
    result = qint_multi(lambda xs: xs[0], 1, CTX)
    with mpmath.workprec(CTX.prec):
        assert abs(result.value - mpmath.mpf(2) / 3) < mpmath.mpf("1e-25")


def test_shell_decay_follows_the_envelope():
    with mpmath.workprec(CTX.prec):
        shells = [mpmath.mpf(1), mpmath.mpf(4), mpmath.mpf(1) / 16, mpmath.mpf(1) / 4]
        assert shell_decay(shells) == mpmath.mpf(1) / 4
        assert shell_decay([mpmath.mpf(1), mpmath.mpf(2), mpmath.mpf(0), mpmath.mpf(0)]) == 0


def test_alternating_shells_converge():
    q = CTX.q

    # shells q^{2s}, sixteen times larger at odd s
    def single(_i, kk):
        return q ** kk * (16 if kk % 2 else 1)

    result = qint_multi(LatticeIntegrand(1, single), 1, CTX)
    with mpmath.workprec(CTX.prec):
        assert abs(result.value - mpmath.mpf(8) / 3) < mpmath.mpf("1e-25")
    assert result.shells < 80


def test_leading_zero_shells_do_not_stop_the_sum():
    q = CTX.q

    def single(_i, kk):
        return q ** kk if kk >= 7 else 0

    result = qint_multi(LatticeIntegrand(1, single), 1, CTX)
    with mpmath.workprec(CTX.prec):
        assert abs(result.value * 24576 - 1) < mpmath.mpf("1e-25")


def test_compositions_order():
    assert list(compositions(2, 2)) == [(2, 0), (1, 1), (0, 2)]


def test_pole_distance():
    check_pole_distance({"beta": mpmath.mpf("0.5")})
    with pytest.raises(PoleProximity):
        check_pole_distance({"beta": mpmath.mpf(-1)})


@pytest.mark.parametrize("alpha,beta", [(2, 2), (mpmath.mpf(3) / 2, 2)])
def test_qbeta(alpha, beta):
    out = check_qbeta(alpha, beta, CTX)
    assert out.status == "pass"
    assert out.rel_diff < mpmath.mpf("1e-20")


def test_ahk_two_variables():
    out = check_ahk(2, 1, 2, 2, CTX)
    assert out.status == "pass"


def test_qkm_with_one_box():
    assert check_qkm(2, 1, 2, 2, (1,), CTX).status == "pass"


def test_qkm_rejects_long_partitions():
    with pytest.raises(ValueError):
        check_qkm(1, 1, 2, 2, (1, 1), CTX)


def test_q_sl3_single_variables():
    assert check_q_sl3(1, 1, 1, 2, 2, 2, (1,), (), CTX).status == "pass"


def test_q_sl3_with_m_zero_reduces_to_qkm():
    out = check_q_sl3(1, 0, 1, 2, 2, 2, (1,), (), CTX)
    assert out.status == "pass"
    assert out.details["reduces_to"] == "qkm"


def test_q_sl3_general_integer_beta_is_skipped():
    with pytest.raises(PoleProximity):
        check_q_sl3_general(1, 1, 1, 2, 2, 1, (), (), CTX)


def test_q_sl3_general_balances():
    out = check_q_sl3_general(1, 1, 1, 2, 2, mpmath.mpf(3) / 4, (), (), CTX)
    assert out.status == "pass"
    assert out.details["balanced_reading"] is not None
    assert out.details["prefactor_readings_coincide"]


def test_q_sl3_general_without_y_is_qkm():
    out = check_q_sl3_general(2, 0, 1, 2, 2, mpmath.mpf(3) / 2, (), (), CTX)
    assert out.status == "pass"
    ahk = check_ahk(2, 1, 2, mpmath.mpf(3) / 2, CTX)
    with mpmath.workprec(CTX.prec):
        assert abs(out.lhs / ahk.lhs - 1) < mpmath.mpf("1e-25")


def test_readings_differ_only_in_the_cubic_term():
    with mpmath.workprec(CTX.prec):
        nn = q_sl3_general_exponent(3, 1, 1, 2, 2, "cubic_nn")
        nm = q_sl3_general_exponent(3, 1, 1, 2, 2, "cubic_nm")
        assert nn - nm == 2
        assert q_sl3_general_exponent(2, 1, 1, 2, 2, "cubic_nn") == q_sl3_general_exponent(2, 1, 1, 2, 2, "cubic_nm")
    assert sorted(GENERAL_READINGS) == ["cubic_nm", "cubic_nn"]


@pytest.mark.slow
@pytest.mark.parametrize("n,k", [(2, 1), (2, 2), (3, 1)])
@pytest.mark.parametrize("alpha", [mpmath.mpf(3) / 2, 2])
@pytest.mark.parametrize("beta", [mpmath.mpf(3) / 2, 2])
def test_ahk_matrix(n, k, alpha, beta):
    assert check_ahk(n, k, alpha, beta, CTX).status == "pass"


@pytest.mark.slow
@pytest.mark.parametrize("n,m", [(3, 0), (3, 1)])
def test_q_sl3_general_adjudication(n, m):
    out = adjudicate_q_sl3_general(n, m, 1, 2, 2, mpmath.mpf(3) / 4, (), (), CTX)
    assert out["status"] == "pass"
    assert out["balanced_reading"] == "cubic_nm"
    assert not out["prefactor_readings_coincide"]
    # the repeated binom(n, 3) misses by exactly q^2
    assert out["losing_q_powers"] == {"cubic_nn": -2}


@pytest.mark.slow
def test_qkm_two_rows():
    assert check_qkm(2, 1, 2, 2, (2, 1), CTX).status == "pass"


@pytest.mark.slow
@pytest.mark.parametrize("lam,mu", [((1,), ()), ((1, 1), (1,))])
def test_q_sl3_two_and_one(lam, mu):
    out = check_q_sl3(2, 1, 1, 2, 2, 2, lam, mu, CTX)
    assert out.status == "pass", out.rel_diff
