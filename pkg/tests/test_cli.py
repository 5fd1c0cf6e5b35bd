import json
import subprocess
import sys

import mpmath
import pytest

from hsine import cli
from reference import KNOWN_ZEROS


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_at_table_zero(capsys):
    code, out, _ = run(capsys, "eval", "--t", KNOWN_ZEROS[0], "--output", "json")
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"t", "method", "value", "error_bound", "digits", "terms"}
    assert set(payload["value"]) == {"re", "im"}
    assert abs(mpmath.mpf(payload["value"]["re"])) < 1e-10
    assert payload["method"] == "series" and payload["t"] == KNOWN_ZEROS[0]


def test_eval_at_zero(capsys):
    code, out, _ = run(capsys, "eval", "--t", "0", "--output", "json")
    assert code == 0 and mpmath.mpf(json.loads(out)["value"]["re"]) == 0


def test_eval_all_methods_agree(capsys):
    code, out, _ = run(capsys, "eval", "--t", "3", "--method", "all", "--output", "json", "--tol", "1e-10")
    assert code == 0
    reports = json.loads(out)
    assert [r["method"] for r in reports] == ["series", "fourier", "laplace", "asymptotic", "oracle"]
    ref = mpmath.mpf(reports[0]["value"]["re"])
    for r in reports[1:3]:
        assert abs(mpmath.mpf(r["value"]["re"]) - ref) < 1e-9
    assert abs(mpmath.mpf(reports[4]["value"]["re"]) - ref) < 1e-6


def test_eval_all_text_has_matrix(capsys):
    code, out, _ = run(capsys, "eval", "--t", "2", "--method", "all", "--tol", "1e-10")
    assert code == 0 and "pairwise" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--t", "0.5", "--method", "laplace"],
        ["eval", "--t", "6", "--method", "oracle"],
        ["eval", "--t", "1", "--method", "asymptotic"],
        ["eval", "--t", "1", "--digits", "10"],
        ["eval", "--t", "1", "--tol", "0"],
        ["eval", "--t", "abc"],
        ["asympt", "--t", "10", "--order", "0"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_digits_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("HSINE_DIGITS", "12")
    assert run(capsys, "eval", "--t", "1")[0] == 2
    # the flag wins over the environment
    code, out, _ = run(capsys, "eval", "--t", "1", "--digits", "20", "--output", "json")
    assert code == 0 and json.loads(out)["digits"] >= 20
    monkeypatch.setenv("HSINE_DIGITS", "forty")
    assert run(capsys, "eval", "--t", "1", "--digits", "20")[0] == 0
    assert run(capsys, "eval", "--t", "1")[0] == 2


def test_coeffs_csv(capsys):
    code, out, _ = run(capsys, "coeffs", "--count", "4")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "n,numerator,denominator,decimal"
    assert lines[1].startswith("0,0,1,")
    assert lines[2].startswith("1,1,3,")
    assert lines[3].startswith("2,3,8,")


def test_zeros_file(tmp_path, capsys):
    out = tmp_path / "zeros.csv"
    code, _, _ = run(capsys, "zeros", "--count", "6", "--out", str(out))
    rows = out.read_text().splitlines()
    assert code == 0 and len(rows) == 7
    for row, ref in zip(rows[1:], KNOWN_ZEROS):
        assert abs(mpmath.mpf(row.split(",")[1]) - mpmath.mpf(ref)) < 1e-12


def test_xray_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    for path in (a, b):
        assert run(capsys, "xray", "--res", "60x40", "--jobs", "1", "--out", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith("<?xml")


def test_xray_csv_and_bad_resolution(tmp_path, capsys):
    path = tmp_path / "grid.csv"
    assert run(capsys, "xray", "--res", "16x16", "--jobs", "1", "--output", "csv", "--out", str(path))[0] == 0
    assert path.read_text().splitlines()[0] == "x,y,re,im"
    assert run(capsys, "xray", "--res", "sixteen")[0] == 2
    assert run(capsys, "xray", "--res", "8x8")[0] == 2


def test_failed_write_leaves_no_file(tmp_path, capsys):
    target = tmp_path / "nowhere" / "x.svg"
    code, _, err = run(capsys, "xray", "--res", "16x16", "--jobs", "1", "--out", str(target))
    assert code == 1 and "nowhere" in err
    assert not target.exists()


def test_riesz_csv(capsys):
    code, out, _ = run(capsys, "riesz", "--count", "3", "--xmax", "100", "--output", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "x,F_power,F_mobius,F_scaled" and len(lines) == 4


def test_asympt_text(capsys):
    code, out, _ = run(capsys, "asympt", "--t", "100")
    assert code == 0 and out.strip()


def test_crosscheck_single_check(capsys):
    code, out, _ = run(capsys, "crosscheck", "--only", "exact-identities")
    assert code == 0 and out.startswith("PASS exact-identities")


def test_crosscheck_unknown_name(capsys):
    assert run(capsys, "crosscheck", "--only", "no-such-check")[0] == 2


@pytest.mark.slow
def test_crosscheck_exit_code_matches_report(capsys):
    code, out, err = run(capsys, "crosscheck")
    lines = out.splitlines()
    failed = [line.split()[1].rstrip(":") for line in lines if line.startswith("FAIL")]
    assert len(lines) >= 18
    assert code == (1 if failed else 0)
    if failed:
        assert failed[0] in err


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "hsine", "eval", "--t", "1", "--output", "json"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["method"] == "series"
