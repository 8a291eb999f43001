import json
import subprocess
import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

from boxlab.boxes import bb84_box, example2_box
from boxlab.cli import TARGETS, analyze_box, classification_tag, jsonable, main

DATA = Path(__file__).resolve().parents[1] / "data"


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_jsonable():
    assert jsonable({"a": F(3, 8), "b": [1.0 / 3, True]}) == {"a": "3/8", "b": [0.333333333333, True]}


def test_classification_tag():
    assert classification_tag(False, None, 2) == "steerable"
    assert classification_tag(True, 4, 2) == "super-unsteerable:min-dim-4"
    assert classification_tag(True, 3, 2) == "super-unsteerable:min-dim-3"
    assert classification_tag(True, 2, 2) == "not-super-unsteerable"


def test_data_files_match_constructors():
    from boxlab.boxes import box_from_json

    assert box_from_json((DATA / "example2.json").read_text()) == example2_box()
    assert box_from_json((DATA / "bb84_1_2.json").read_text()) == bb84_box(F(1, 2))
    assert box_from_json((DATA / "bb84_9_10.json").read_text()) == bb84_box(F(9, 10))


def test_analyze_steerable(capsys):
    code, rep, err = run(["analyze", str(DATA / "bb84_9_10.json"), "--dimA", "2"], capsys)
    assert code == 0
    assert rep["classification"] == "steerable"
    assert rep["local"] and rep["superlocal"]
    assert rep["chsh_max"] == "9/5"


def test_analyze_maximally_mixed(capsys):
    code, rep, err = run(["analyze", str(DATA / "maximally_mixed.json")], capsys)
    assert code == 0 and "dimA" in err
    assert rep["classification"] == "not-super-unsteerable"
    assert rep["min_dim_lhvlhs"]["min_dim"] == 1


def test_analyze_bb84_reports_model(capsys):
    code, rep, _ = run(["analyze", str(DATA / "bb84_1_2.json"), "--dimA", "2"], capsys)
    assert code == 0
    w = rep["min_dim_lhvlhs"]["witness"]
    assert len(w["weights"]) == rep["min_dim_lhvlhs"]["min_dim"]
    assert rep["super_unsteerable"]["2"] is True


def test_signalling_box_report():
    from boxlab.boxes import make_box

    rows = [[F(1, 2), 0, 0, F(1, 2)], [1, 0, 0, 0], [F(1, 4)] * 4, [F(1, 4)] * 4]
    assert analyze_box(make_box(rows))["classification"] == "signalling"


def test_mindim(capsys):
    code, rep, _ = run(["mindim", str(DATA / "example2.json"), "--model", "lhv"], capsys)
    assert code == 0 and rep["min_dim"] == 2
    code, rep, _ = run(["mindim", str(DATA / "example2.json"), "--class", "distinct"], capsys)
    assert code == 0 and rep["min_dim"] == 3 and rep["model_class"] == "distinct"


@pytest.mark.parametrize("target", [t for t in TARGETS if t != "thm2-enum"])
def test_reproduce_targets(target, capsys):
    code, rep, _ = run(["reproduce", target], capsys)
    assert code == 0 and rep["status"] == "match"


def test_reproduce_with_visibility(capsys):
    code, rep, _ = run(["reproduce", "werner-born", "--v", "3/10"], capsys)
    assert code == 0 and rep["V"] == "3/10"
    code, rep, _ = run(["reproduce", "eq25-model", "--v", "7/10"], capsys)
    assert code == 0


def test_reproduce_mismatch_exit_code(capsys):
    # a steerable visibility makes the enumeration target fail
    code, rep, err = run(["reproduce", "thm1-enum", "--v", "9/10"], capsys)
    assert code == 1 and rep["status"] == "mismatch" and "mismatch" in err


def test_errors_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["analyze", str(bad)], capsys)[0] == 2
    assert run(["mindim", str(tmp_path / "missing.json")], capsys)[0] == 2
    assert run(["reproduce", "bb84", "--v", "3/2"], capsys)[0] == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "boxlab", "reproduce", "bb84", "--v", "1/4"], capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["table"][0] == ["5/16", "3/16", "3/16", "5/16"]
