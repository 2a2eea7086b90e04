import json
import subprocess
import sys
from fractions import Fraction

import pytest

from pitail.catalog import catalog_from_json, get_series, load_catalog
from pitail.hpeval import remainder_report
from pitail.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_coeffs_text(capsys):
    assert run(capsys, "coeffs", "--series", "7", "--J", "1") == (0, "-2/557403\n", "")
    code, out, _ = run(capsys, "coeffs", "--series", "23", "--J", "1")
    assert (code, out.strip()) == (0, "1/3640")


def test_coeffs_json_schema(capsys):
    code, out, _ = run(capsys, "coeffs", "--series", "33", "--J", "4", "--format", "json")
    payload = json.loads(out)
    assert code == 0
    assert payload["command"] == "coeffs"
    assert payload["result"] == {"series": 33, "J": 4, "c": ["-2/1", "0/1", "0/1", "-1/4"]}
    assert any("conjectural" in w for w in payload["warnings"])


def test_unknown_series_is_usage_error(capsys):
    code, out, err = run(capsys, "coeffs", "--series", "99", "--J", "1")
    assert code == 2 and out == ""
    assert "series not in catalog" in err


@pytest.mark.parametrize(
    "argv",
    [["frobnicate"], ["coeffs", "--series", "7"], ["coeffs", "--series", "7", "--J", "x"], ["alpha", "--q", "a/b", "--n", "3"], []],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "usage" in err or "error" in err


def test_json_output_is_deterministic(capsys):
    argv = ["order-sweep", "--series", "23", "--n", "5,10", "--J", "3", "--format", "json", "--jobs", "1"]
    first = run(capsys, *argv)
    second = run(capsys, *argv[:-2], "--jobs", "2")
    assert first == second


def test_catalog_export_round_trip(capsys):
    code, out, _ = run(capsys, "catalog", "export", "--format", "json")
    assert code == 0
    assert catalog_from_json(out) == load_catalog()


def test_catalog_list(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 37
    assert "426880/1*sqrt(10005)" in lines[7] and "-1/151931373056000" in lines[7]


def test_alpha_coeffs(capsys):
    code, out, _ = run(capsys, "alpha-coeffs", "--q", "1/2", "--J", "4")
    assert code == 0
    assert out.split() == ["-3/8", "0/1", "1/64"]


def test_alpha_value(capsys):
    code, out, _ = run(capsys, "alpha", "--q", "1/4", "--n", "10", "--prec", "128", "--format", "json")
    payload = json.loads(out)
    assert code == 0
    assert payload["result"]["alpha"]["bits"] == 128
    assert payload["result"]["alpha"]["value"].startswith("-")


def test_remainder_report(capsys):
    code, out, _ = run(capsys, "remainder", "--series", "7", "--n", "10", "--J", "2", "--prec", "512", "--format", "json")
    res = json.loads(out)["result"]
    assert code == 0
    assert res["series"] == 7 and res["n"] == 10 and res["J"] == 2
    assert res["ratio"]["bits"] == 512
    two_terms = Fraction(-2, 557403) + Fraction(885616447271, 519552166475669481) / 10
    assert res == remainder_report(get_series(7), 10, 2, 512).to_json()
    assert res["expansion_value"] == f"{two_terms.numerator}/{two_terms.denominator}"


def test_envelope_pass_and_exploratory_fail(capsys):
    code, out, _ = run(capsys, "envelope", "--L-max", "2", "--n-max", "5")
    assert code == 0
    assert out.strip().splitlines()[-1].startswith("verdict: PASS")
    code, out, err = run(capsys, "envelope", "--L-max", "3", "--n-max", "20", "--series", "34", "--format", "json")
    payload = json.loads(out)
    assert code == 1
    assert payload["result"]["pass"] is False
    assert any("exploratory" in w for w in payload["warnings"])


def test_accelerate_exit_codes(capsys):
    code, _, err = run(capsys, "accelerate", "--series", "23", "--n", "3", "--prec", "128")
    assert code == 3 and "increase precision" in err
    code, out, _ = run(capsys, "accelerate", "--series", "23", "--n", "3", "--prec", "1024", "--format", "json")
    assert code == 0
    assert json.loads(out)["result"]["J_used"] >= 2
    code, _, _ = run(capsys, "accelerate", "--series", "23", "--n", "3", "--J", "two")
    assert code == 2


def test_signs(capsys):
    code, out, err = run(capsys, "signs", "--series", "33", "--J", "10")
    assert code == 0 and out.strip() == "- - + + - - + +"
    assert "conjectural" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "pitail", "coeffs", "--series", "7", "--J", "2"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout.split() == ["-2/557403", "885616447271/519552166475669481"]
