import json
from importlib.resources import files

import jsonschema
import pytest

from conftest import run_dgr
from dgr.cli import Mode, main
from dgr.mechanics import PHASE

SCHEMA = json.loads(files("dgr").joinpath("data/report.schema.json").read_text())


def test_reproduce_is_deterministic(reproduce_runs):
    (c1, out1, _), (c2, out2, _) = reproduce_runs
    assert out1 == out2
    assert c1 == c2


def test_reproduce_report_validates(reproduce_runs):
    code, out, err = reproduce_runs[0]
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["config"] == {"a": "0", "order": 24, "weight_cap": None, "seed": 7}
    assert [s["stage"] for s in doc["stages"]][:3] == ["canonicalize", "locus", "exponents"]
    # exit status mirrors the overall verdict
    assert (code == 0) == doc["pass"]
    if not doc["pass"]:
        assert doc["first_failure"] and "FAIL at" in err


def test_polynomial_strings_round_trip(capsys):
    assert main(["canonicalize", "--quiet"]) == 0
    doc = json.loads(capsys.readouterr().out)
    res = doc["stages"][0]["result"]
    for key in ("H", "G"):
        assert str(PHASE(res[key])) == res[key]


def test_exponents_single_point(capsys):
    assert main(["exponents", "--point", "I3", "--quiet"]) == 0
    doc = json.loads(capsys.readouterr().out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["stages"][0]["result"]["exponents"] == {"I3": [-1, 1, 4, 6]}


def test_text_format(capsys, tmp_path):
    out = tmp_path / "r.txt"
    assert main(["locus", "--format", "text", "--out", str(out), "--quiet"]) == 0
    text = out.read_text()
    assert text.splitlines()[1] == "[PASS] locus"
    assert text.rstrip().endswith("overall: PASS")


def test_bad_deformation_value_exits_2():
    code, _, err = run_dgr("locus", "--a", "x/y")
    assert code == 2 and "--a" in err


def test_unknown_command_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_mode_parsing():
    assert Mode("0").kind == "zero" and Mode("0/5").kind == "zero"
    assert Mode("sym").symbolic
    m = Mode("2/3")
    assert m.kind == "value" and m.label == "2/3"
    assert m.fix(PHASE("a*q + 1")) == PHASE("2/3*q + 1")


def test_filtration_symbolic_dimension(capsys):
    main(["filtration", "--pole", "2", "--a", "sym", "--quiet"])
    doc = json.loads(capsys.readouterr().out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["stages"][0]["result"]["dimension"] == 24


def test_failing_stage_sets_exit_1(capsys):
    # the order is too small for the plane model; the stage fails and is reported
    assert main(["plane-model", "--order", "6", "--quiet"]) == 1
    doc = json.loads(capsys.readouterr().out)
    assert doc["first_failure"] == "plane-model: stage completed"
