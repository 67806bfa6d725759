"""End-to-end tests of the spheretc command line."""

import csv
import io
import json

import pytest

from spheretc.cli import main


@pytest.fixture
def action_file(tmp_path):
    path = tmp_path / "action.json"
    path.write_text(json.dumps(
        {"p": 3, "fixed_dim": 2, "weights": [1], "sign_dim": 0}))
    return str(path)


@pytest.fixture
def query_file(tmp_path):
    path = tmp_path / "query.json"
    path.write_text(json.dumps(
        {"x": [1, 0, 0, 0], "y": [0, 1, 0, 0], "samples": 11}))
    return str(path)


def test_plan_json(action_file, query_file, capsys):
    assert main(["plan", "--action", action_file, "--query", query_file]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["domain"] == "U1"
    assert payload["planner"] == "two"
    assert len(payload["rows"]) == 11
    assert payload["rows"][0]["point"] == [1.0, 0.0, 0.0, 0.0]


def test_plan_csv(action_file, query_file, capsys):
    assert main(["plan", "--action", action_file, "--query", query_file,
                 "--format", "csv"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ["t", "x0", "x1", "x2", "x3", "domain"]
    assert len(rows) == 12
    assert rows[1][-1] == "U1"


def test_plan_to_file(action_file, query_file, tmp_path):
    out = tmp_path / "path.json"
    assert main(["plan", "--action", action_file, "--query", query_file,
                 "--out", str(out)]) == 0
    assert json.loads(out.read_text())["domain"] == "U1"


def test_verify_exit_zero_on_pass(action_file, capsys):
    code = main(["verify", "--action", action_file, "--seed", "3",
                 "--samples", "2000", "--pair-samples", "200", "--t-grid", "51"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["passed"] is True
    assert payload["planner"] == "two"


def test_verify_exit_one_on_precondition(tmp_path, capsys):
    path = tmp_path / "even.json"
    path.write_text(json.dumps({"p": 2, "fixed_dim": 2, "weights": [], "sign_dim": 1}))
    code = main(["verify", "--action", str(path), "--planner", "two",
                 "--samples", "1000", "--pair-samples", "100", "--t-grid", "21"])
    assert code == 1


def test_tc_single_query(capsys):
    assert main(["tc", "--n", "3", "--k", "1", "--p", "2",
                 "--invariant", "TC_G"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["value"] == "2"
    assert payload["status"] == "exact"
    assert payload["provenance"]


def test_tc_query_file(tmp_path, capsys):
    q = tmp_path / "q.json"
    q.write_text(json.dumps({"n": 2, "k": 1, "p": 2, "invariant": "TC^G"}))
    assert main(["tc", "--query", str(q)]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == "2..3"


def test_tc_table(capsys):
    assert main(["tc", "--table", "--max-n", "3", "--p", "2,3"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    lookup = {(int(r["n"]), int(r["k"]), int(r["p"])): r for r in rows}
    assert lookup[(3, 1, 2)]["TC_G"] == "2"
    assert lookup[(2, 1, 2)]["TC_G"] == "3"
    assert lookup[(2, 0, 2)]["TC_G"] == "inf"
    assert (3, 0, 3) not in lookup


def test_tc_invalid_query_is_reported(capsys):
    assert main(["tc", "--n", "3", "--k", "0", "--p", "3"]) == 2
    assert "InvalidQuery" in capsys.readouterr().err


def test_euler_action(action_file, capsys):
    assert main(["euler", "--action", action_file]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["routes_agree"] is True
    assert payload["chi_definition"]["coefficients"] == {}
    assert payload["orbit_space_euler"] == 0
    assert payload["vector_field"] == "guaranteed"
    assert payload["weak_gap"]["holds"] is True


def test_euler_gcw(tmp_path, capsys):
    path = tmp_path / "gcw.json"
    path.write_text(json.dumps({
        "group_order": 2,
        "cells": [{"dim": 0, "isotropy": 2, "count": 1},
                  {"dim": 1, "isotropy": 1, "count": 2}],
    }))
    assert main(["euler", "--gcw", str(path)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["chi_definition"]["coefficients"] == {"1": -2, "2": 1}
    assert payload["routes_agree"] is True


def test_vfield_certificate(action_file, capsys):
    assert main(["vfield", "--action", action_file, "--samples", "500"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["existence"] == "guaranteed"
    assert abs(payload["certificate"]["min_norm"] - 1.0) <= 1e-12
    assert payload["certificate"]["commutator_max"] == 0.0


def test_vfield_parity_error_exit_code(tmp_path, capsys):
    path = tmp_path / "even.json"
    path.write_text(json.dumps({"p": 2, "fixed_dim": 2, "weights": [], "sign_dim": 1}))
    assert main(["vfield", "--action", str(path)]) == 2
    assert "ParityMismatch" in capsys.readouterr().err


def test_missing_file_exit_code(capsys):
    assert main(["euler", "--action", "/nonexistent/a.json"]) == 2
