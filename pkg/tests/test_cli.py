"""Exit codes, output formats, and schema conformance of the console tool."""

import json

import jsonschema
import pytest

from d2lab import cli
from d2lab.fixtures import MATRIX_IDS, TARGETS, paper_matrix
from d2lab.matrix import read_matrix, write_matrix


@pytest.fixture(scope="module")
def validator():
    import importlib.resources
    schema = json.loads(importlib.resources.files("d2lab")
                        .joinpath("report_schema.json").read_text())
    return jsonschema.Draft202012Validator(schema)


def check_json(validator, argv, capsys):
    status = cli.main(argv + ["--format", "json"])
    payload = json.loads(capsys.readouterr().out)
    validator.validate(payload)
    assert payload["exit_status"] == status
    return payload


def test_s5_valid_example(capsys):
    assert cli.main(["s5", "<>(<>p -> p)"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "VALID"


def test_s5_invalid_example(capsys):
    assert cli.main(["s5", "<>p -> p"]) == 1
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "INVALID"
    assert "world 0" in lines[1]


def test_translate_example(capsys):
    assert cli.main(["translate", "p ^ q"]) == 0
    assert capsys.readouterr().out.strip() == "p & <>q"


def test_exit_codes():
    assert cli.main(["d2", "p => p"]) == 0
    assert cli.main(["d2", "DDK16"]) == 1
    assert cli.main(["eval", "P1", "DDK10"]) == 1
    assert cli.main(["eval", "P1", "p | ~p", "--assign", "p=2"]) == 0
    assert cli.main(["check", "P5", "--system", "C"]) == 0
    assert cli.main(["check", "P1", "--system", "C"]) == 1
    assert cli.main(["classify"]) == 1        # table disagreements exist
    assert cli.main(["paper-verify"]) == 1    # findings exist


def test_usage_and_input_errors(capsys):
    assert cli.main(["eval", "P1", "p ("]) == 2          # parse error
    assert cli.main(["eval", "nowhere.mat", "C1"]) == 2  # missing file
    assert cli.main(["eval", "P1", "C99"]) == 2          # unknown axiom
    assert cli.main(["eval", "P1", "p", "--assign", "p=x"]) == 2
    assert cli.main(["s5", "p ^ q"]) == 2                # wrong language
    assert cli.main(["search", "--size", "2", "--validate", "Z1"]) == 2
    capsys.readouterr()
    with pytest.raises(SystemExit) as err:
        cli.main(["no-such-command"])
    assert err.value.code == 2
    capsys.readouterr()


def test_resource_limit_exit():
    assert cli.main(["s5", "p | q | r | s | t"]) == 3
    assert cli.main(["d2", "p | q | r", "--atom-limit", "2"]) == 3


def test_search_budget_exit(monkeypatch):
    nine = ",".join(f"C{i}" for i in range(1, 10))
    argv = ["search", "--size", "3", "--validate", nine,
            "--refute", "DDK10", "--designated", "1,3", "--neg", "3,3,2"]
    assert cli.main(argv + ["--budget", "0.05"]) == 3
    # the environment variable supplies a default budget
    monkeypatch.setenv(cli.BUDGET_ENV, "0.05")
    assert cli.main(argv) == 3
    monkeypatch.setenv(cli.BUDGET_ENV, "not-a-number")
    assert cli.main(argv) == 2


def test_matrix_argument_accepts_files(tmp_path, capsys):
    path = tmp_path / "copy.mat"
    write_matrix(paper_matrix("P5"), path)
    assert cli.main(["check", str(path), "--system", "C"]) == 0
    capsys.readouterr()


def test_search_out_writes_readable_files(tmp_path, capsys):
    status = cli.main(["search", "--size", "2", "--validate", "C1",
                       "--limit", "3", "--out", str(tmp_path)])
    assert status == 0
    capsys.readouterr()
    files = sorted(tmp_path.glob("*.mat"))
    assert len(files) == 3
    for path in files:
        m = read_matrix(path)
        assert m.matrix_id == path.stem


def test_json_schema_across_subcommands_and_fixtures(validator, capsys):
    for mid in MATRIX_IDS:
        refuted, system = TARGETS[mid]
        payload = check_json(validator,
                             ["check", mid, "--system", system,
                              "--refute", refuted], capsys)
        assert payload["result"]["refute"]["refuted"]
        check_json(validator, ["eval", mid, refuted], capsys)
        check_json(validator, ["eval", mid, "p | q", "--assign", "p=1,q=2"],
                   capsys)
    for argv in (
        ["s5", "<>(<>p -> p)"],
        ["s5", "<>p -> p"],
        ["d2", "DDK19"],
        ["d2", "DDK19", "--dconj", "left"],
        ["d2", "p => p", "--no-outer-diamond"],
        ["translate", "DDK22"],
        ["classify"],
        ["paper-verify"],
        ["search", "--size", "2", "--validate", "C1,C2", "--refute",
         "DDK10", "--limit", "4", "--prune-isomorphic"],
        ["search", "--size", "1"],
    ):
        check_json(validator, argv, capsys)


def test_paper_verify_json_has_13_records(validator, capsys):
    payload = check_json(validator, ["paper-verify"], capsys)
    records = payload["result"]["records"]
    assert len(records) == 13
    assert all(r["refutation_confirmed"] for r in records)
    assert payload["findings"]
    assert payload["exit_status"] == 1


def test_classify_reports_both_conjunction_variants(validator, capsys):
    payload = check_json(validator, ["classify"], capsys)
    rows = {row["axiom"]: row for row in payload["result"]["rows"]}
    assert rows["DDK19"]["right"]["valid"] is False
    assert rows["DDK19"]["left"]["valid"] is True
    assert rows["DDK18"]["status"] == "resolved"
    cli.main(["classify"])
    text = capsys.readouterr().out
    assert "left-variant conjunction: Valid" in text


def test_run_returns_report_object():
    report = cli.run(["translate", "p ^ q", "--dconj", "left"])
    assert report.command == "translate"
    assert report.result["translation"] == "<>p & q"
    assert report.exit_status == 0
    assert json.loads(report.to_json())["command"] == "translate"
