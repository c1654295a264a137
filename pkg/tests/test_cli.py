import io
import json
import random
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from ncabel.cli import run
from ncabel.expr import parse_polynomial
from ncabel.freealg import Polynomial, RingSpec, serialize

from .reference import random_terms

SCHEMA = json.loads(resources.files("ncabel").joinpath("report_schema.json").read_text())


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def cli_json(*argv):
    code, out, err = cli(*argv, "--format", "json")
    return code, json.loads(out), err


def test_verify_thm2_both_modes():
    code, report, _ = cli_json("verify", "--identity", "thm2", "--n", "4", "--mode", "both")
    assert code == 0
    assert report["equal"] is True and report["diff"] == "0"
    assert report["oracle"]["verdict"] == "EQUAL_WHP"
    assert report["seed"] == 0 and report["model"] == "universal_xy"
    jsonschema.validate(report, SCHEMA)


def test_expand_example():
    code, out, _ = cli("expand", "--ring", "central:c; free:X,x1", "--expr", "(X+x1)^2")
    assert code == 0
    assert out.strip() == "X.X + X.x1 + x1.X + x1.x1"


def test_verify_polar2():
    code, report, _ = cli_json("verify", "--identity", "polar2", "--n", "3", "--m", "2")
    assert code == 0 and report["diff"] == "0" and report["m"] == 2
    jsonschema.validate(report, SCHEMA)


def test_corrupted_identity_exit_1():
    code, report, _ = cli_json("verify", "--identity", "thm1", "--n", "2", "--rhs-identity", "thm2",
                               "--mode", "both")
    assert code == 1
    assert report["equal"] is False
    assert report["diff"] == "c*x1 + c*x2 + x1.x2 + x2.x1"
    assert report["oracle"]["verdict"] == "UNEQUAL" and report["oracle"]["witness_trial"] < 10
    jsonschema.validate(report, SCHEMA)
    code, text, _ = cli("verify", "--identity", "thm1", "--n", "2", "--rhs-identity", "thm2")
    assert code == 1 and "NOT EQUAL" in text and "x1.x2" in text


def test_rhs_identity_model_mismatch():
    code, _, err = cli("verify", "--identity", "thm1", "--n", "2", "--rhs-identity", "thm5")
    assert code == 2 and "model" in err


@pytest.mark.parametrize("identity,extra", [
    ("thm1", []), ("thm4", []), ("thm5", []), ("polar1", []), ("polar2", ["--m", "1"]),
    ("hurwitz3", []), ("abel1", []),
])
def test_reports_validate(identity, extra):
    for mode in ("symbolic", "oracle", "both"):
        code, report, _ = cli_json("verify", "--identity", identity, "--n", "3", "--mode", mode, *extra)
        assert code == 0
        jsonschema.validate(report, SCHEMA)
        assert (report["diff"] is None) == (mode == "oracle")
        assert ("oracle" in report) == (mode != "symbolic")


def test_json_byte_identical():
    argv = ("verify", "--identity", "thm5", "--n", "3", "--mode", "both", "--seed", "42", "--no-timing",
            "--format", "json")
    first, second = cli(*argv), cli(*argv)
    assert first == second
    assert json.loads(first[1])["elapsed_ms"] is None
    fuzz = ("fuzz", "--ring", "free:a,b", "--lhs", "a*b", "--rhs", "b*a", "--seed", "9", "--format", "json")
    assert cli(*fuzz) == cli(*fuzz)


def test_diff_truncation():
    code, report, _ = cli_json("verify", "--identity", "thm1", "--n", "5", "--rhs-identity", "thm2")
    assert code == 1
    assert report["diff"].endswith("terms total]") and "[truncated:" in report["diff"]
    assert report["diff"].count(" + ") + report["diff"].count(" - ") <= 200


def test_expand_roundtrip_100():
    ring = RingSpec(("X", "x1", "x2"), ("c", "d"))
    rng = random.Random(2024)
    for _ in range(100):
        p = Polynomial(ring, random_terms(rng, ring, max_terms=8, coeff_range=10 ** 6))
        text = serialize(p)
        code, out, _ = cli("expand", "--ring", str(ring), f"--expr={text}")
        assert code == 0
        assert out.strip() == text
        assert parse_polynomial(out.strip(), ring) == p


def test_parse_error_exit_2():
    code, out, err = cli("expand", "--ring", "free:X", "--expr", "X^-1")
    assert code == 2 and out == ""
    assert "negative exponent" in err
    assert err.splitlines()[-1].strip() == "^"
    code, _, err = cli("expand", "--ring", "free:X", "--expr", "X Y")
    assert code == 2 and "position" in err


@pytest.mark.parametrize("argv", [
    ["verify", "--identity", "thm1", "--n", "2", "--bogus"],
    ["verify", "--identity", "nope", "--n", "2"],
    ["verify", "--identity", "polar2", "--n", "2", "--m", "2"],
    ["verify", "--identity", "thm1", "--n", "2", "--m", "1"],
    ["verify", "--identity", "thm1", "--n", "2", "--mode", "oracle", "--dim", "0"],
    ["expand", "--ring", "free:X,X", "--expr", "X"],
    ["bench", "--identity", "polar2", "--n-max", "2"],
    ["bench", "--identity", "thm1", "--n-min", "3", "--n-max", "2"],
    [],
])
def test_usage_errors(argv):
    assert cli(*argv)[0] == 2


def test_fuzz():
    code, out, _ = cli("fuzz", "--ring", "free:a,b", "--lhs", "a*b", "--rhs", "b*a")
    assert code == 1 and out.startswith("UNEQUAL") and "matrix a:" in out
    code, report, _ = cli_json("fuzz", "--ring", "central:c; free:a", "--lhs", "(a+c)^2",
                               "--rhs", "a^2 + 2*c*a + c^2")
    assert code == 0 and report["oracle"]["verdict"] == "EQUAL_WHP"


def test_warn_n():
    code, _, err = cli("verify", "--identity", "thm2", "--n", "3", "--warn-n", "2")
    assert code == 0 and "warning: n=3" in err
    assert cli("verify", "--identity", "thm2", "--n", "3")[2] == ""


def test_bench():
    code, report, _ = cli_json("bench", "--identity", "thm1", "--n-max", "3", "--backend", "all", "--no-timing")
    assert code == 0
    assert [r["n"] for r in report["rows"]] == [0, 1, 2, 3]
    assert all(r["equal"] for r in report["rows"])
    code, text, _ = cli("bench", "--identity", "hurwitz1", "--n-min", "2", "--n-max", "3")
    assert code == 0 and "lhs_terms" in text


def test_seed_env(monkeypatch):
    monkeypatch.setenv("NCABEL_SEED", "77")
    code, report, _ = cli_json("verify", "--identity", "thm1", "--n", "2", "--mode", "oracle")
    assert code == 0 and report["seed"] == 77
    code, report, _ = cli_json("verify", "--identity", "thm1", "--n", "2", "--mode", "oracle", "--seed", "5")
    assert report["seed"] == 5
    monkeypatch.setenv("NCABEL_SEED", "x")
    assert cli("verify", "--identity", "thm1", "--n", "2")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ncabel", "expand", "--ring", "free:X,x1", "--expr", "x1*X - X*x1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "-X.x1 + x1.X"
