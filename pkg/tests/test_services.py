import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import json

import pytest
from pydantic import ValidationError

from backend.models.db import SCHEMA_VERSION, get_conn, init_db
from backend.models.reports import REPORT_SCHEMA, ReportBundle, RunConfig, VerificationReport
from processing.coeffield import Q, T
from processing.partitions import enumerate_partitions
from processing.symfunc import macdonald_P
from service.polynomial_service import polynomial_service
from service.qcheck_service import THEOREMS, parse_number, qcheck_service
from service.selberg_service import resolve_params, selberg_service
from service.verifier_service import CASES, ACCEPTANCE_SUITE, verifier_service


@pytest.fixture
def cache(tmp_path):
    polynomial_service.attach(tmp_path)
    yield tmp_path
    polynomial_service.attach(None, use_cache=False)


def _report(status, millis=5):
    return {"id": "x", "params": {}, "status": status, "witness": None, "millis": millis, "details": {}}


# ----- polynomial cache -----

def test_render_text_and_json(cache):
    assert polynomial_service.render((1,), 2) == "m[1]"
    assert polynomial_service.render((1, 1, 1), 2) == "0"
    rendered = polynomial_service.render((2,), 2, fmt="json")
    assert rendered["partition"] == [2]
    assert [t["m"] for t in rendered["terms"]] == [[2], [1, 1]]


def test_unknown_basis(cache):
    with pytest.raises(ValueError):
        polynomial_service.build((1,), 2, basis="schur")


def test_warm_list_clear(cache):
    status = polynomial_service.warm(2, 2)
    assert status["warmed"] == len(enumerate_partitions(2, 2, 2))
    assert status["records"] >= 3
    assert set(status["families"]) == {"macdonald"}
    assert status["schema_version"] == SCHEMA_VERSION
    again = polynomial_service.warm(2, 2)
    assert again["records"] == status["records"]
    assert polynomial_service.clear() == status["records"]
    assert polynomial_service.list_records()["records"] == 0


def test_corrupt_record_is_rebuilt(cache):
    conn = get_conn(cache)
    conn.execute("INSERT INTO polynomials (family, partition, payload) VALUES ('macdonald', '[2]', '{broken')")
    conn.commit()
    conn.close()
    P = macdonald_P((2,), 2)
    assert P.coefficient((1, 1)) == (1 + Q) * (1 - T) / (1 - Q * T)
    conn = get_conn(cache)
    row = conn.execute("SELECT payload FROM polynomials WHERE family = 'macdonald' AND partition = '[2]'").fetchone()
    conn.close()
    assert row is None or json.loads(row["payload"])


def test_schema_change_drops_polynomials(tmp_path):
    init_db(tmp_path)
    conn = get_conn(tmp_path)
    conn.execute("INSERT INTO polynomials (family, partition, payload) VALUES ('macdonald', '[1]', '{}')")
    conn.execute("UPDATE cache_meta SET value = '0' WHERE key = 'schema_version'")
    conn.commit()
    conn.close()
    init_db(tmp_path)
    conn = get_conn(tmp_path)
    assert conn.execute("SELECT COUNT(*) AS c FROM polynomials").fetchone()["c"] == 0
    version = conn.execute("SELECT value FROM cache_meta WHERE key = 'schema_version'").fetchone()["value"]
    conn.close()
    assert version == SCHEMA_VERSION


# ----- report bundle -----

def test_bundle_nulls_millis_without_timings():
    bundle = ReportBundle.build(RunConfig(subcommand="verify"), [_report("pass"), _report("skipped")])
    assert all(r.millis is None for r in bundle.reports)
    assert bundle.summary == {"pass": 1, "fail": 0, "error": 0, "skipped": 1}
    assert not bundle.failed


def test_bundle_json_is_deterministic():
    config = RunConfig(subcommand="qcheck", q="0.5", precision=256, timings=True)
    first = ReportBundle.build(config, [_report("fail")]).to_json()
    second = ReportBundle.build(config, [_report("fail")]).to_json()
    assert first == second
    body = json.loads(first)
    assert body["schema"] == REPORT_SCHEMA
    assert body["reports"][0]["millis"] == 5
    assert ReportBundle.build(config, [_report("error")]).failed


def test_unknown_status_rejected():
    with pytest.raises(ValidationError):
        VerificationReport(id="x", params={}, status="maybe")


# ----- verifier service -----

def test_suite_only_names_known_cases():
    assert all(cid in CASES for cid, _ in ACCEPTANCE_SUITE)
    assert verifier_service.case_ids() == sorted(CASES)


def test_run_case_reports(cache):
    ok = verifier_service.run("qbt", {"n": 1, "D": 3})
    assert ok["status"] == "pass"
    assert ok["details"]["checked"] > 0
    assert ok["params"] == {"n": 1, "D": 3}


def test_run_case_errors_become_reports(cache):
    assert verifier_service.run("no_such_case")["status"] == "error"
    out = verifier_service.run("qbt", {"n": 4, "D": 2})
    assert out["status"] == "error"
    assert out["details"]["error"] == "InfeasibleSize"


# ----- qcheck service -----

def test_parse_number():
    assert parse_number("3/2") == parse_number(1.5) == parse_number("1.5")
    assert parse_number(2) == 2


def test_qcheck_default_run():
    out = qcheck_service.run("qbeta")
    assert out["status"] == "pass"
    assert out["details"]["precision"] == 256
    assert out["details"]["K"] == 120


def test_qcheck_integer_beta_is_skipped():
    out = qcheck_service.run("q_sl3_general", {"beta1": "1"})
    assert out["status"] == "skipped"
    assert out["details"]["error"] == "PoleProximity"
    assert "integer beta1" in out["details"]["note"]
    assert "not evaluated" in out["details"]["note"]


def test_readings_adjudicated_where_they_differ():
    params = THEOREMS["q_sl3_readings"][1]
    assert params["n"] != params["m"]
    assert max(params["n"], params["m"]) >= 3


def test_qcheck_bad_inputs():
    assert qcheck_service.run("nope")["status"] == "error"
    assert qcheck_service.run("qbeta", q="2")["status"] == "error"


# ----- selberg service -----

def test_resolve_params_derives_beta1():
    p = resolve_params({"beta2": "0.5", "gamma": "0.2"})
    assert p["beta1"] == pytest.approx(0.7)
    assert p["beta2"] == pytest.approx(0.5)


def test_selberg_chain_checks():
    out = selberg_service.run("chain_cardinality", {"k1": 2, "k2": 2, "beta1": 0.6, "gamma": 0.2})
    assert out["status"] == "pass"
    assert out["details"]["domains"] == 6
    assert selberg_service.run("chain_tv", {"k1": 1, "k2": 2, "gamma": 0.15})["status"] == "pass"


def test_selberg_errors_become_reports():
    out = selberg_service.run("chain_b_form", {"beta1": 0.2, "gamma": 0.2})
    assert out["status"] == "error"
    assert out["details"]["error"] == "ChainConditionError"
    assert selberg_service.run("nope")["status"] == "error"


def test_selberg_breakdown_export(tmp_path):
    path = tmp_path / "chain.csv"
    out = selberg_service.run("chain_integral", {}, samples=20000, seed=1, csv_path=path)
    assert out["status"] in ("pass", "fail")
    assert len(out["details"]["domains"]) == 2
    assert path.exists()
