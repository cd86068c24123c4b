import json
import subprocess
import sys

import numpy as np
import pytest

from khbm.cli import main


@pytest.fixture
def vectors_csv(tmp_path):
    path = tmp_path / "v.csv"
    path.write_text("1,0\n0,1\n")
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_constants_json(capsys):
    code, out, _ = run_cli(capsys, "constants", "--p", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["report"]["a_p"] == 1.0
    assert payload["report"]["b_p"] == 1.0
    assert payload["version"]
    assert payload["seed"] == 0
    assert "budget" in payload and "slack" in payload


def test_json_byte_identical(capsys):
    _, first, _ = run_cli(capsys, "bm", "--pair", "2.5", "4", "6", "--seed", "11")
    _, second, _ = run_cli(capsys, "bm", "--pair", "2.5", "4", "6", "--seed", "11")
    assert first == second


def test_ipf_exact_value(capsys, vectors_csv):
    code, out, _ = run_cli(
        capsys, "ipf", "--vectors", vectors_csv, "--atoms", "atoms:1,0.5",
        "--p", "3", "--norm", "lp:2:2",
    )
    assert code == 0
    rep = json.loads(out)["report"]
    assert rep["value"] == 2.0**0.5
    assert rep["terms_evaluated"] == 4


def test_ipf_mc_seeded(capsys, vectors_csv):
    args = ["ipf", "--vectors", vectors_csv, "--atoms", "atoms:1,0.25", "--p", "2",
            "--norm", "lp:1:2", "--method", "mc", "--samples", "1000", "--seed", "9"]
    _, a, _ = run_cli(capsys, *args)
    _, b, _ = run_cli(capsys, *args)
    assert a == b
    assert json.loads(a)["report"]["stderr"] > 0


def test_lemma1_csv_schema(capsys):
    code, out, _ = run_cli(capsys, "lemma1", "--x", "1,0,0", "--k", "2", "--alpha", "2", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("# version=")
    assert lines[1] == "x_hash,k,alpha,ratio,lo,hi,holds"
    fields = lines[2].split(",")
    assert fields[3] == "0.66666666666666663"  # 17 significant digits
    assert fields[-1] == "True"


def test_lemma1_sweep_deterministic(capsys):
    _, a, _ = run_cli(capsys, "lemma1", "--random", "4", "2", "7", "--format", "csv")
    _, b, _ = run_cli(capsys, "lemma1", "--random", "4", "2", "7", "--format", "csv")
    assert a == b
    assert len(a.strip().splitlines()) == 2 + 2 * 4 * 5  # meta + header + rows


def test_lemma1_usage_error(capsys):
    code, _, err = run_cli(capsys, "lemma1", "--x", "1,2")
    assert code == 2
    assert "error:" in err


def test_hanner_single_check_exit_code(capsys, vectors_csv):
    code, out, _ = run_cli(
        capsys, "hanner", "--norm", "lp:1:2", "--q", "1", "--vectors", vectors_csv, "--mode", "type"
    )
    assert code == 1  # genuine violation reported
    rep = json.loads(out)["report"]
    assert rep["verdict"] == "violated-type"
    assert rep["gap"] == 4.0


def test_hanner_falsifier_none_found(capsys):
    code, out, _ = run_cli(
        capsys, "hanner", "--norm", "lp:2:2", "--q", "2", "--n", "2", "--d", "2",
        "--mode", "cotype", "--trials", "300",
    )
    assert code == 0
    assert json.loads(out)["report"]["found"] is None


def test_hanner_requires_mode_for_search(capsys):
    code, _, err = run_cli(capsys, "hanner", "--norm", "lp:1:2", "--q", "1", "--n", "2", "--d", "2")
    assert code == 2
    assert "mode" in err


def test_bm_json_planar(capsys):
    code, out, _ = run_cli(capsys, "bm", "--pair", "1", "inf", "2")
    assert code == 0
    rep = json.loads(out)["report"]
    assert rep["known_exact"] == 1.0
    assert rep["consistent"] is True
    assert rep["upper_bound"]["value"] == 1.0


def test_bm_csv_schema_and_filter(capsys):
    code, out, _ = run_cli(capsys, "bm", "--pair", "1", "inf", "4", "--methods", "cor1", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[1] == "method,value,witness_p,rigorous,known,upper,consistent"
    assert len(lines) == 3
    row = lines[2].split(",")
    assert row[0] == "cor1"
    assert row[1] == "1.4142135623730951"


def test_bm_bad_dimension(capsys):
    code, _, err = run_cli(capsys, "bm", "--pair", "3", "5", "zzz")
    assert code == 2
    assert "dimension" in err


def test_bm_diag_transform(capsys, tmp_path):
    diag = tmp_path / "d.csv"
    diag.write_text("1\n1\n1\n")
    code, out, _ = run_cli(
        capsys, "bm", "--pair", "1", "inf", "3", "--transforms", f"identity,diag:{diag}"
    )
    assert code == 0
    assert json.loads(out)["report"]["upper_bound"]["value"] == 3.0


def test_bm_unknown_transform(capsys):
    code, _, err = run_cli(capsys, "bm", "--pair", "1", "inf", "2", "--transforms", "shear")
    assert code == 2
    assert "transform" in err


def test_verify_theorem1_exit_codes(capsys, vectors_csv):
    code, out, _ = run_cli(
        capsys, "verify-theorem1", "--vectors", vectors_csv, "--atoms", "atoms:1,0.5",
        "--p", "2", "--q", "2", "--norm", "lp:2:2", "--side", "both",
    )
    assert code == 0
    assert json.loads(out)["report"]["all_hold"] is True
    # wrong side ordering is a usage error, not a violation
    code, _, err = run_cli(
        capsys, "verify-theorem1", "--vectors", vectors_csv, "--atoms", "atoms:1,0.5",
        "--p", "1.5", "--q", "3", "--norm", "lp:3:2", "--side", "lower",
    )
    assert code == 2


def test_paper_l2_constant_probe(capsys, tmp_path):
    # small-support law where the max-form euclidean constant overshoots I_1
    one = tmp_path / "one.csv"
    one.write_text("1,0\n")
    code, out, _ = run_cli(
        capsys, "verify-theorem1", "--vectors", str(one), "--atoms", "atoms:1,0.01",
        "--p", "1", "--q", "1", "--norm", "lp:2:2", "--side", "lower",
        "--paper-l2-constant",
    )
    assert code == 1
    checks = json.loads(out)["report"]["checks"]
    by_side = {c["side"]: c for c in checks}
    assert by_side["lower"]["holds"] is True
    variant = by_side["lower-l2-max-variant"]
    assert variant["holds"] is False
    assert variant["i_p"] == pytest.approx(0.02)
    assert variant["rhs"] > variant["i_p"]

    # on a balanced law both constants are honest lower bounds
    code, out, _ = run_cli(
        capsys, "verify-theorem1", "--vectors", str(one), "--atoms", "atoms:1,0.5",
        "--p", "1", "--q", "1", "--norm", "lp:2:2", "--side", "lower",
        "--paper-l2-constant",
    )
    assert code == 0
    assert json.loads(out)["report"]["all_hold"] is True


def test_paper_l2_constant_needs_euclidean_norm(capsys, vectors_csv):
    code, _, err = run_cli(
        capsys, "verify-theorem1", "--vectors", vectors_csv, "--atoms", "atoms:1,0.5",
        "--p", "1", "--q", "1", "--norm", "lp:1:2", "--side", "lower",
        "--paper-l2-constant",
    )
    assert code == 2
    assert "euclidean" in err


def test_missing_file_is_usage_error(capsys):
    code, _, err = run_cli(
        capsys, "ipf", "--vectors", "/no/such/file.csv", "--atoms", "atoms:1,0.5",
        "--p", "2", "--norm", "lp:2:2",
    )
    assert code == 2
    assert "vector csv" in err


def test_malformed_csv_is_usage_error(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3,spam\n")
    code, _, err = run_cli(
        capsys, "ipf", "--vectors", str(bad), "--atoms", "atoms:1,0.5",
        "--p", "2", "--norm", "lp:2:2",
    )
    assert code == 2
    assert "malformed" in err


def test_budget_env_override_reflected(capsys, monkeypatch):
    monkeypatch.setenv("KHBM_BUDGET", "555")
    code, out, _ = run_cli(capsys, "constants", "--p", "3")
    assert code == 0
    assert json.loads(out)["budget"] == 555


def test_acceptance_single_criterion(capsys):
    code, out, _ = run_cli(capsys, "acceptance", "--criterion", "1", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[1] == "criterion,name,passed,detail"
    assert lines[2].startswith("1,constants-closed-forms,True")


def test_entry_point_subprocess(tmp_path):
    # the installed console script must agree with main()
    proc = subprocess.run(
        [sys.executable, "-m", "khbm.cli", "constants", "--p", "2"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["report"]["a_p"] == 1.0
