import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import json

import pytest

from backend.cli.options import partition_arg
from main import main


def _bundle(path):
    return json.loads(path.read_text(encoding="utf-8"))


def test_partition_arg():
    assert partition_arg("2,1") == [2, 1]
    assert partition_arg("(3, 1, 0)") == [3, 1]
    assert partition_arg("") == []


def test_subcommand_is_required():
    with pytest.raises(SystemExit):
        main([])


def test_poly_prints_monomial_expansion(tmp_path, capsys):
    assert main(["poly", "--lambda", "1", "--n", "2", "--cache-dir", str(tmp_path)]) == 0
    assert capsys.readouterr().out.strip() == "m[1]"
    assert main(["poly", "--lambda", "1,1,1", "--n", "2", "--no-cache", "--cache-dir", str(tmp_path)]) == 0
    assert capsys.readouterr().out.strip() == "0"


def test_poly_json(tmp_path, capsys):
    assert main(["poly", "--lambda", "2", "--n", "2", "--format", "json", "--cache-dir", str(tmp_path)]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["basis"] == "P"
    assert [t["m"] for t in body["terms"]] == [[2], [1, 1]]


def test_poly_too_large_exits_two(tmp_path):
    assert main(["poly", "--lambda", "9", "--n", "2", "--cache-dir", str(tmp_path)]) == 2


def test_verify_single_case(tmp_path):
    out = tmp_path / "report.json"
    code = main(["verify", "qbt", "--n", "1", "--deg", "3", "--cache-dir", str(tmp_path), "--out", str(out)])
    assert code == 0
    body = _bundle(out)
    assert body["schema"] == "macsel-report/1"
    assert body["reports"][0]["status"] == "pass"
    assert body["reports"][0]["millis"] is None
    assert body["summary"]["pass"] == 1


def test_verify_timings_and_failure_exit(tmp_path):
    out = tmp_path / "report.json"
    assert main(["verify", "heine", "--deg", "3", "--timings", "--cache-dir", str(tmp_path), "--out", str(out)]) == 0
    assert isinstance(_bundle(out)["reports"][0]["millis"], int)
    code = main(["verify", "qbt", "--n", "4", "--deg", "2", "--cache-dir", str(tmp_path), "--out", str(out)])
    assert code == 1
    assert _bundle(out)["reports"][0]["status"] == "error"


def test_qcheck_skipped_does_not_fail(tmp_path):
    out = tmp_path / "q.json"
    assert main(["qcheck", "q_sl3_general", "--beta1", "1", "--cache-dir", str(tmp_path), "--out", str(out)]) == 0
    body = _bundle(out)
    assert body["reports"][0]["status"] == "skipped"
    assert body["config"]["precision"] == 256


def test_selberg_chain_check(tmp_path):
    out = tmp_path / "s.json"
    code = main(["selberg", "chain_cardinality", "--k1", "2", "--k2", "1", "--beta1", "0.6", "--gamma", "0.2",
                 "--cache-dir", str(tmp_path), "--out", str(out)])
    assert code == 0
    assert _bundle(out)["reports"][0]["details"]["expected"] == 3


def test_cache_actions(tmp_path, capsys):
    assert main(["cache", "warm", "--wmax", "2", "--n", "2", "--cache-dir", str(tmp_path)]) == 0
    warmed = json.loads(capsys.readouterr().out)
    assert warmed["records"] > 0
    assert main(["cache", "list", "--cache-dir", str(tmp_path)]) == 0
    assert json.loads(capsys.readouterr().out)["records"] == warmed["records"]
    assert main(["cache", "clear", "--cache-dir", str(tmp_path)]) == 0
    cleared = json.loads(capsys.readouterr().out)
    assert cleared["deleted"] == warmed["records"]
    assert cleared["records"] == 0
