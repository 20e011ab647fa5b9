import json
import pathlib

import pytest
from jsonschema import Draft7Validator

from pswork import fixtures
from pswork.cli import main

DATA = pathlib.Path(__file__).resolve().parent.parent / "src" / "pswork" / "data"

SCHEMA = json.loads((DATA / "report.schema.json").read_text())
Draft7Validator.check_schema(SCHEMA)
VALIDATOR = Draft7Validator(SCHEMA)


def run(capsys, *argv) -> tuple[int, str]:
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv) -> tuple[int, dict]:
    code, out = run(capsys, *argv, "--json")
    report = json.loads(out)
    errors = list(VALIDATOR.iter_errors(report))
    assert not errors, errors
    return code, report


def test_validate_all_fixture_files(capsys):
    for name in ("set.model.json", "cat.model.json", "two.presheaf.json",
                 "f_ob.kan.json", "times2_glu.morphism.json",
                 "times2_glu_domE.trace.json"):
        code, report = run_json(capsys, "validate", str(DATA / name))
        assert code == 0
        assert report["ok"] is True


def test_validate_bad_file_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["validate", str(bad)]) == 1
    doc = fixtures.data_document("two.presheaf.json")
    doc["payload"]["actions"]["ident"]["n0"] = "e01"
    invalid = tmp_path / "invalid.json"
    invalid.write_text(json.dumps(doc))
    assert main(["validate", str(invalid)]) == 1


def test_check_la_ob_holds_exit_0(capsys):
    code, report = run_json(
        capsys, "check-la",
        "--kan", str(DATA / "f_ob.kan.json"),
        "--source", str(DATA / "cat.model.json"),
        "--target", str(DATA / "set.model.json"),
    )
    assert code == 0
    assert report["summary"] == "holds"
    by_name = {v["name"]: v for v in report["verdicts"]}
    assert by_name["g^p"]["domain_sizes"] == {"*": 3}
    assert by_name["g^lu"]["domain_sizes"] == {"*": 2}
    assert by_name["g^ru"]["domain_sizes"] == {"*": 2}
    assert by_name["g^ass"]["domain_sizes"] == {"*": 4}


def test_check_la_prod_fails_exit_2(capsys):
    code, report = run_json(
        capsys, "check-la",
        "--kan", str(DATA / "f_prod.kan.json"),
        "--source", str(DATA / "setset.model.json"),
        "--target", str(DATA / "set.model.json"),
    )
    assert code == 2
    assert report["summary"] == "fails"
    v = report["verdicts"][0]
    assert v["domain_sizes"] == {"*": 0}
    assert v["codomain_sizes"] == {"*": 1}


def test_check_cc_setset_holds(capsys):
    code, report = run_json(capsys, "check-cc", "--model", str(DATA / "setset.model.json"))
    assert code == 0
    assert report["summary"] == "holds"
    assert set(report["objects"]) == {"s_l", "s_r", "p"}


def test_lan_reports_sizes(capsys):
    code, report = run_json(
        capsys, "lan",
        "--kan", str(DATA / "f_ob.kan.json"),
        "--input", str(DATA / "two.presheaf.json"),
    )
    assert code == 0
    assert report["sizes"] == {"*": 2}


def test_lan_rejects_foreign_base(capsys, tmp_path):
    doc = fixtures.data_document("two.presheaf.json")
    doc["payload"]["base"] = fixtures.SETSET_BASE
    f = tmp_path / "wrong.json"
    f.write_text(json.dumps(doc))
    assert main(["lan", "--kan", str(DATA / "f_ob.kan.json"), "--input", str(f)]) == 1


def test_reflect_converged_exit_0(capsys):
    code, report = run_json(
        capsys, "reflect",
        "--model", str(DATA / "cat.model.json"),
        "--input", str(DATA / "two.presheaf.json"),
        "--max-steps", "5",
    )
    assert code == 0
    assert report["status"] == "converged"
    assert report["steps_used"] == 0
    assert report["sizes"] == {"o": 2, "m": 3, "p": 4}


def test_replay_trace_exit_0(capsys):
    code, report = run_json(capsys, "replay",
                            "--trace", str(DATA / "times2_glu_domE.trace.json"))
    assert code == 0
    assert report["ok"] is True
    assert report["won"] is True
    assert report["steps"] == 3


def test_replay_tampered_trace_fails(tmp_path, capsys):
    doc = fixtures.data_document("times2_glu_domE.trace.json")
    doc["payload"]["steps"][0]["digest"] = "f" * 64
    f = tmp_path / "tampered.json"
    f.write_text(json.dumps(doc))
    code, report = run_json(capsys, "replay", "--trace", str(f))
    assert code == 1
    assert report["ok"] is False


def test_check_la_wrong_kind_exit_1(capsys):
    assert main([
        "check-la",
        "--kan", str(DATA / "set.model.json"),
        "--source", str(DATA / "cat.model.json"),
        "--target", str(DATA / "set.model.json"),
    ]) == 1
