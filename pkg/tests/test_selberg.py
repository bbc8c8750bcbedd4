import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import mpmath
import numpy as np
import pandas as pd
import pytest

from processing.chains import enumerate_chain
from processing.qnum import GammaPoleError
from processing.selberg import (
    BudgetExceeded, IntegrationBudget, chain_gamma_ratio, check_cc_symmetry, check_classical_selberg, check_sin_limit,
    check_chain_integral, check_tv_overlap, export_breakdown_csv, integrate_domain, selberg_classical_rhs, selberg_rhs, sl3_rhs,
    chain_integrand,
)

SMALL = IntegrationBudget(samples=20000)


def test_one_variable_selberg_is_a_beta_integral():
    with mpmath.workdps(40):
        assert abs(selberg_classical_rhs(1, 2, 2, 0.5) - mpmath.mpf(1) / 6) < mpmath.mpf("1e-30")


def test_closed_form_without_insertions_is_the_plain_product():
    plain = sl3_rhs(1, 2, 2, 1.5, 0.6, 0.55, 0.15)
    with_empty = selberg_rhs(1, 2, 2, 1.5, 0.6, 0.55, 0.15)
    assert abs(plain - with_empty) < mpmath.mpf("1e-30") * abs(plain)


def test_unbalanced_betas_are_rejected():
    with pytest.raises(ValueError):
        selberg_rhs(1, 1, 2, 2, 0.7, 0.7, 0.2)


def test_nonpositive_gamma_argument():
    with pytest.raises(GammaPoleError):
        selberg_classical_rhs(1, -1, 2, 0.5)


def test_beta_integral_by_quadrature():
    report = check_classical_selberg(1, 2, 2, 0.5, method="quad")
    assert report.status == "pass"
    assert report.lhs == pytest.approx(1 / 6, rel=1e-7)


def test_two_variable_selberg_by_quadrature():
    report = check_classical_selberg(2, 2, 2, 0.5, method="quad")
    assert report.status == "pass", report.details


def test_single_pair_chain_estimate():
    report = check_chain_integral(1, 1, 2, 2, 0.7, 0.2, budget=IntegrationBudget(samples=200000), seed=0)
    assert report.lhs == pytest.approx(report.rhs, rel=0.05)
    assert [r.label for r in report.domains] == ["x1<y1", "y1<x1"]


def test_monte_carlo_is_reproducible_per_seed():
    first = check_chain_integral(1, 1, 2, 2, 0.7, 0.2, budget=SMALL, seed=11)
    again = check_chain_integral(1, 1, 2, 2, 0.7, 0.2, budget=SMALL, seed=11)
    other = check_chain_integral(1, 1, 2, 2, 0.7, 0.2, budget=SMALL, seed=12)
    assert first.lhs == again.lhs
    assert first.lhs != other.lhs
    assert first.lhs_error > 0


def test_budget_miss_raises():
    integrand = chain_integrand(1, 1, 2, 2, 0.7, 0.2)
    domain = enumerate_chain(1, 1, 0.7, 0.2)[0]
    with pytest.raises(BudgetExceeded):
        integrate_domain(domain, integrand, "mc", IntegrationBudget(samples=1000, target_rel_error=1e-12))
    with pytest.raises(BudgetExceeded):
        integrate_domain(domain, integrand, "quad", IntegrationBudget(max_evals=10))
    with pytest.raises(ValueError):
        integrate_domain(domain, integrand, "simpson")


def test_singular_log_from_spacings_near_the_right_endpoint():
    integrand = chain_integrand(1, 1, 2, 2, 1.0, 0.25)
    # s_2 = 0.5 + 0.5 rounds to 1.0 in float64, but 1 - s_2 is the last spacing
    gaps = np.array([[0.5, 0.5, 1e-20]])
    out = integrand.log_singular((("x", 1), ("y", 1)), gaps)
    assert np.isfinite(out).all()
    assert out[0] == pytest.approx(0.75 * np.log(0.5) - 0.75 * np.log(1e-20))


def test_strong_endpoint_singularity_estimate_is_finite():
    report = check_chain_integral(1, 1, 2, 2, 1.0, 0.25, budget=IntegrationBudget(samples=200000), seed=0)
    assert np.isfinite(report.lhs) and np.isfinite(report.lhs_error)
    assert report.lhs == pytest.approx(report.rhs, rel=0.05)
    assert report.details["rejected"] >= 0


def test_overlap_with_the_short_chain():
    for k1, k2 in ((1, 1), (1, 2)):
        out = check_tv_overlap(k1, k2, 2.0, 2.0, 0.25)
        assert out["status"] == "pass", out
        assert out["chains"]["match"]


def test_label_swap_scale_for_one_pair():
    beta1, gamma = mpmath.mpf("0.7"), mpmath.mpf("0.2")
    with mpmath.workdps(40):
        expected = mpmath.sinpi(beta1 - gamma) / mpmath.sinpi(beta1)
        assert abs(chain_gamma_ratio(1, 1, beta1, gamma) - expected) < mpmath.mpf("1e-30")


@pytest.mark.parametrize("k1,k2", [(1, 1), (1, 2), (2, 2)])
def test_label_swap_symmetry(k1, k2):
    out = check_cc_symmetry(k1, k2, 0.6, 0.2)
    assert out["status"] == "pass", out["witness"]


@pytest.mark.parametrize("x,y", [(0.7, 0.4), (0.3, 0.6)])
def test_sin_limit_both_orderings(x, y):
    out = check_sin_limit(0.6, 0.2, 1, 2, 1, 1, x, y)
    assert out["status"] == "pass", out["rows"]
    assert out["ordering"] == ("x<y" if x < y else "x>y")


def test_breakdown_csv(tmp_path):
    report = check_chain_integral(1, 1, 2, 2, 0.7, 0.2, budget=SMALL, seed=3)
    path = tmp_path / "domains.csv"
    export_breakdown_csv(report, path)
    df = pd.read_csv(path)
    assert list(df.columns) == ["ordering", "domain", "weight", "integral", "error", "contribution"]
    assert len(df) == 2
    assert df["contribution"].sum() == pytest.approx(report.lhs)


@pytest.mark.slow
@pytest.mark.parametrize("k1,k2,beta1,gamma", [(1, 1, 1.0, 0.25), (1, 1, 0.7, 0.2), (1, 2, 0.6, 0.15)])
def test_monte_carlo_matrix(k1, k2, beta1, gamma):
    report = check_chain_integral(k1, k2, 2, 2, beta1, gamma, budget=IntegrationBudget(samples=10 ** 7), seed=0, workers=2)
    assert np.isfinite(report.lhs), report.details
    assert report.status == "pass", (report.lhs, report.rhs, report.lhs_error)


@pytest.mark.slow
def test_jack_insertion_monte_carlo():
    report = check_chain_integral(1, 1, 2, 2, 0.7, 0.2, lam=(1,), budget=IntegrationBudget(samples=10 ** 7))
    assert report.status == "pass"
