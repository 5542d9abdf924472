"""End-to-end tests of the command-line interface (in-process and one
subprocess check of the installed script)."""

import json
import math
import shutil
import subprocess
import sys
from fractions import Fraction

import pytest

from lipsel.cli import main

SEP4 = {
    "n": 2,
    "metric": {"matrix": [[0, 1], [1, 0]]},
    "sets": {
        "halfplanes": [
            {"h": [1, 0], "alpha": 0},
            {"h": [-1, 0], "alpha": 4},
        ]
    },
}

TWO_SQUARES = {
    "n": 2,
    "metric": {"matrix": [[0, 1], [1, 0]]},
    "sets": {
        "polygons": [
            [
                {"h": [1, 0], "alpha": -1},
                {"h": [-1, 0], "alpha": -1},
                {"h": [0, 1], "alpha": -1},
                {"h": [0, -1], "alpha": -1},
            ],
            [
                {"h": [1, 0], "alpha": -7},
                {"h": [-1, 0], "alpha": 5},
                {"h": [0, 1], "alpha": -1},
                {"h": [0, -1], "alpha": -1},
            ],
        ]
    },
}

CHAIN_PRE = {
    "n": 3,
    "metric": {"pre_metric": [[0, 1, "inf"], [1, 0, 1], ["inf", 1, 0]]},
    "sets": {
        "halfplanes": [
            {"h": [1, 0], "alpha": 0},
            {"h": [1, 0], "alpha": -1},
            {"h": [-1, 0], "alpha": 2},
        ]
    },
}


def write(tmp_path, doc, name="inst.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# ---------------------------------------------------------------------------
# validate


def test_validate_ok_is_deterministic(tmp_path, capsys):
    path = write(tmp_path, SEP4)
    code, out, _ = run(capsys, "validate", path)
    assert code == 0
    assert out == '{"valid": true, "n": 2, "metric": "matrix", "sets": "halfplanes"}\n'


def test_validate_pre_metric_and_polygons(tmp_path, capsys):
    code, out, _ = run(capsys, "validate", write(tmp_path, CHAIN_PRE))
    assert code == 0
    assert json.loads(out)["metric"] == "pre_metric"
    code, out, _ = run(capsys, "validate", write(tmp_path, TWO_SQUARES, "p.json"))
    assert code == 0
    assert json.loads(out)["sets"] == "polygons"


def test_validate_reports_triangle_violation(tmp_path, capsys):
    doc = {
        "n": 3,
        "metric": {"matrix": [[0, 5, 1], [5, 0, 1], [1, 1, 0]]},
        "sets": {"halfplanes": [{"h": [1, 0], "alpha": 0}] * 3},
    }
    code, out, _ = run(capsys, "validate", write(tmp_path, doc))
    assert code == 3
    got = json.loads(out)
    assert got == {"valid": False, "axiom": "triangle", "i": 0, "j": 1, "k": 2}


def test_validate_reports_symmetry_violation(tmp_path, capsys):
    doc = {
        "n": 2,
        "metric": {"matrix": [[0, 1], [2, 0]]},
        "sets": {"halfplanes": [{"h": [1, 0], "alpha": 0}] * 2},
    }
    code, out, _ = run(capsys, "validate", write(tmp_path, doc))
    assert code == 3
    assert json.loads(out)["axiom"] == "symmetry"


@pytest.mark.parametrize(
    "mangle",
    [
        lambda d: d.pop("n"),
        lambda d: d.__setitem__("n", 2.0),
        lambda d: d.__setitem__("n", True),
        lambda d: d.__setitem__("n", 0),
        lambda d: d.pop("metric"),
        lambda d: d["metric"].__setitem__("pre_metric", [[0, 1], [1, 0]]),
        lambda d: d["metric"].__setitem__("matrix", [[0, 1]]),
        lambda d: d["metric"]["matrix"][0].__setitem__(1, -1),
        lambda d: d["metric"]["matrix"][0].__setitem__(1, "nan"),
        lambda d: d.pop("sets"),
        lambda d: d["sets"].__setitem__("halfplanes", d["sets"]["halfplanes"][:1]),
        lambda d: d["sets"]["halfplanes"][0].__setitem__("h", [0, 0]),
        lambda d: d["sets"]["halfplanes"][0].__setitem__("alpha", "inf"),
        lambda d: d["sets"]["halfplanes"][0].__setitem__("extra", 1),
        lambda d: d["sets"]["halfplanes"][0].__setitem__("h", [1]),
    ],
)
def test_validate_rejects_malformed_documents(tmp_path, capsys, mangle):
    doc = json.loads(json.dumps(SEP4))
    mangle(doc)
    code, out, err = run(capsys, "validate", write(tmp_path, doc))
    assert code == 2
    assert out == ""
    assert err.startswith("error: ")


def test_validate_rejects_broken_json(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{this is not json")
    code, _, err = run(capsys, "validate", str(path))
    assert code == 2 and "not valid JSON" in err


def test_validate_missing_file(tmp_path, capsys):
    code, _, err = run(capsys, "validate", str(tmp_path / "absent.json"))
    assert code == 2 and "cannot read" in err


# ---------------------------------------------------------------------------
# solve


def test_solve_success_document(tmp_path, capsys):
    path = write(tmp_path, SEP4)
    code, out, err = run(capsys, "solve", path, "--lambda", "4")
    assert code == 0
    got = json.loads(out)
    assert got["outcome"] == "success"
    assert got["f"] == [[0.0, 0.0], [4.0, 0.0]]
    assert got["seminorm"] == 4.0
    assert got["bound"] == 12.0
    assert "diagnostics" not in got
    assert err == ""


def test_solve_no_go_document(tmp_path, capsys):
    path = write(tmp_path, SEP4)
    code, out, _ = run(capsys, "solve", path, "--lambda", "2")
    assert code == 1
    assert json.loads(out) == {"outcome": "no_go", "stage": 1, "witness": 0}


def test_solve_split_lambdas(tmp_path, capsys):
    path = write(tmp_path, SEP4)
    code, out, _ = run(capsys, "solve", path, "--lambda1", "4", "--lambda2", "0")
    assert code == 1
    assert json.loads(out) == {"outcome": "no_go", "stage": 3, "witness": 0}
    code, out, _ = run(capsys, "solve", path, "--lambda1", "4", "--lambda2", "4")
    assert code == 0
    assert json.loads(out)["bound"] == 12.0


def test_solve_trace_diagnostics(tmp_path, capsys):
    path = write(tmp_path, SEP4)
    code, out, err = run(capsys, "solve", path, "--lambda", "4", "--trace")
    assert code == 0
    got = json.loads(out)
    diag = got["diagnostics"]
    assert diag["g"] == [[0.0, 0.0], [4.0, 0.0]]
    assert diag["hulls"][0]["y"] == ["-inf", "inf"]
    assert diag["refined"][1]["x"] == [4.0, 4.0]
    assert "stages 1-5 complete" in err


def test_solve_output_is_byte_stable(tmp_path, capsys):
    path = write(tmp_path, SEP4)
    _, first, _ = run(capsys, "solve", path, "--lambda", "4", "--trace")
    _, second, _ = run(capsys, "solve", path, "--lambda", "4", "--trace")
    assert first == second


def test_solve_flag_validation(tmp_path, capsys):
    path = write(tmp_path, SEP4)
    for argv in (
        ["solve", path],
        ["solve", path, "--lambda", "0"],
        ["solve", path, "--lambda", "-1"],
        ["solve", path, "--lambda", "4", "--lambda1", "4"],
        ["solve", path, "--lambda1", "4"],
        ["solve", path, "--lambda1", "4", "--lambda2", "-1"],
        ["solve", path, "--lambda", "abc"],
    ):
        code, out, err = run(capsys, *argv)
        assert code == 2, argv
        assert out == "" and err.startswith("error: ")


def test_solve_zero_split_lambdas_run(tmp_path, capsys):
    doc = {
        "n": 1,
        "metric": {"matrix": [[0]]},
        "sets": {"halfplanes": [{"h": [1, 1], "alpha": 2}]},
    }
    code, out, _ = run(capsys, "solve", write(tmp_path, doc), "--lambda1", "0", "--lambda2", "0")
    assert code == 0
    assert json.loads(out)["f"] == [[-1.0, -1.0]]


def test_solve_polygon(tmp_path, capsys):
    path = write(tmp_path, TWO_SQUARES)
    code, out, _ = run(capsys, "solve", path, "--lambda", "4")
    assert code == 0
    got = json.loads(out)
    assert got["f"] == [[1.0, 0.0], [5.0, 0.0]]
    assert got["bound"] == 12.0
    code, out, _ = run(capsys, "solve", path, "--lambda", "1")
    assert code == 1
    assert json.loads(out)["outcome"] == "no_go"
    code, _, err = run(capsys, "solve", path, "--lambda1", "1", "--lambda2", "1")
    assert code == 2 and "single --lambda" in err


def test_solve_rejects_diagonal_violation_with_exit_3(tmp_path, capsys):
    doc = {
        "n": 2,
        "metric": {"matrix": [[0, 1], [1, 1]]},
        "sets": {"halfplanes": [{"h": [1, 0], "alpha": 0}] * 2},
    }
    code, _, err = run(capsys, "solve", write(tmp_path, doc), "--lambda", "1")
    assert code == 3 and "diagonal" in err


def test_solve_pre_metric_matches_pre_closed_matrix(tmp_path, capsys):
    pre_path = write(tmp_path, CHAIN_PRE, "pre.json")
    closed = json.loads(json.dumps(CHAIN_PRE))
    closed["metric"] = {"matrix": [[0, 1, 2], [1, 0, 1], [2, 1, 0]]}
    closed_path = write(tmp_path, closed, "closed.json")
    _, a, _ = run(capsys, "solve", pre_path, "--lambda", "2", "--trace")
    _, b, _ = run(capsys, "solve", closed_path, "--lambda", "2", "--trace")
    assert a == b
    assert json.loads(a)["outcome"] == "success"


def test_solve_accepts_rational_strings(tmp_path, capsys):
    doc = json.loads(json.dumps(SEP4))
    doc["metric"]["matrix"] = [[0, "1/2"], ["0.5", 0]]
    code, out, _ = run(capsys, "solve", write(tmp_path, doc), "--lambda", "8")
    assert code == 0
    assert json.loads(out)["f"] == [[0.0, 0.0], [4.0, 0.0]]


# ---------------------------------------------------------------------------
# sharp and estimate


def test_sharp_feasible_and_witness(tmp_path, capsys):
    path = write(tmp_path, SEP4)
    code, out, _ = run(capsys, "sharp", path, "--lambda", "4")
    assert code == 0
    got = json.loads(out)
    assert got["verdict"] == "feasible"
    assert got["lambda"] == "4"
    w = {k: Fraction(v) for k, v in got["witness"].items()}
    assert w["u1"] == 0 and w["u2"] == 4
    assert abs(w["v1"] - w["v2"]) <= 4


def test_sharp_infeasible(tmp_path, capsys):
    path = write(tmp_path, SEP4)
    code, out, _ = run(capsys, "sharp", path, "--lambda", "399/100")
    assert code == 1
    assert json.loads(out) == {"verdict": "infeasible", "lambda": "399/100"}


def test_sharp_polygon_system(tmp_path, capsys):
    path = write(tmp_path, TWO_SQUARES)
    code, out, _ = run(capsys, "sharp", path, "--lambda", "4")
    assert code == 0
    assert json.loads(out)["verdict"] == "feasible"
    code, _, _ = run(capsys, "sharp", path, "--lambda", "3")
    assert code == 1


def test_sharp_accepts_lambda_zero(tmp_path, capsys):
    doc = {
        "n": 1,
        "metric": {"matrix": [[0]]},
        "sets": {"halfplanes": [{"h": [1, 0], "alpha": 0}]},
    }
    code, out, _ = run(capsys, "sharp", write(tmp_path, doc), "--lambda", "0")
    assert code == 0


def test_sharp_point_cap(tmp_path, capsys):
    n = 9
    doc = {
        "n": n,
        "metric": {"matrix": [[0] * n for _ in range(n)]},
        "sets": {"halfplanes": [{"h": [1, 0], "alpha": 0}] * n},
    }
    code, _, err = run(capsys, "sharp", write(tmp_path, doc), "--lambda", "1")
    assert code == 2 and "capped" in err


def test_sharp_rejects_triangle_violation(tmp_path, capsys):
    doc = {
        "n": 3,
        "metric": {"matrix": [[0, 5, 1], [5, 0, 1], [1, 1, 0]]},
        "sets": {"halfplanes": [{"h": [1, 0], "alpha": 0}] * 3},
    }
    code, _, err = run(capsys, "sharp", write(tmp_path, doc), "--lambda", "1")
    assert code == 3 and "triangle" in err


def test_estimate_frozen_bracket(tmp_path, capsys):
    path = write(tmp_path, SEP4)
    code, out, _ = run(capsys, "estimate", path, "--hi", "8", "--iters", "10")
    assert code == 0
    assert out == (
        '{"lo": "511/128", "hi": "4", "width": "1/128", '
        '"lo_float": 3.9921875, "hi_float": 4}\n'
    )


def test_estimate_infeasible_hi(tmp_path, capsys):
    path = write(tmp_path, SEP4)
    code, _, err = run(capsys, "estimate", path, "--hi", "2")
    assert code == 4 and "infeasible" in err


def test_estimate_flag_validation(tmp_path, capsys):
    path = write(tmp_path, SEP4)
    code, _, _ = run(capsys, "estimate", path, "--lo", "8", "--hi", "8")
    assert code == 2
    code, _, _ = run(capsys, "estimate", path, "--hi", "8", "--iters", "-1")
    assert code == 2


def test_estimate_rejects_polygons(tmp_path, capsys):
    path = write(tmp_path, TWO_SQUARES)
    code, _, err = run(capsys, "estimate", path, "--hi", "8")
    assert code == 2 and "half-plane" in err


# ---------------------------------------------------------------------------
# result round-trip


def test_validate_result_round_trip(tmp_path, capsys):
    path = write(tmp_path, SEP4)
    _, out, _ = run(capsys, "solve", path, "--lambda", "4")
    result = tmp_path / "result.json"
    result.write_text(out)
    code, out, _ = run(capsys, "validate", path, "--result", str(result))
    assert code == 0
    got = json.loads(out)
    assert got["verified"] is True and got["seminorm"] == 4.0


def test_validate_result_catches_tampering(tmp_path, capsys):
    path = write(tmp_path, SEP4)
    _, out, _ = run(capsys, "solve", path, "--lambda", "4")
    doc = json.loads(out)
    doc["f"][0][0] = 1.0  # leaves the first half-plane
    result = tmp_path / "result.json"
    result.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "validate", path, "--result", str(result))
    assert code == 1
    got = json.loads(out)
    assert got["verified"] is False and got["reason"] == "membership"


def test_validate_result_polygon_membership(tmp_path, capsys):
    path = write(tmp_path, TWO_SQUARES)
    _, out, _ = run(capsys, "solve", path, "--lambda", "4")
    result = tmp_path / "result.json"
    result.write_text(out)
    code, out, _ = run(capsys, "validate", path, "--result", str(result))
    assert code == 0 and json.loads(out)["verified"] is True


def test_validate_result_rejects_no_go_documents(tmp_path, capsys):
    path = write(tmp_path, SEP4)
    _, out, _ = run(capsys, "solve", path, "--lambda", "2")
    result = tmp_path / "result.json"
    result.write_text(out)
    code, _, err = run(capsys, "validate", path, "--result", str(result))
    assert code == 2 and "success" in err


# ---------------------------------------------------------------------------
# installed script


def test_console_script_runs(tmp_path):
    exe = shutil.which("lipsel")
    assert exe is not None, "console script 'lipsel' is not on PATH"
    path = write(tmp_path, SEP4)
    got = subprocess.run(
        [exe, "solve", path, "--lambda", "4"], capture_output=True, text=True
    )
    assert got.returncode == 0
    assert json.loads(got.stdout)["outcome"] == "success"
    # missing required flag: argparse exits with the flag-error code
    got = subprocess.run([exe, "sharp", path], capture_output=True, text=True)
    assert got.returncode == 2
