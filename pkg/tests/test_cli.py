"""End-to-end runs of the command-line frontend through main(argv).

Everything here parses stdout the way a downstream consumer would: CSV rows
through csv.DictReader, JSON through json.loads.  Budgets are kept small;
value checks stick to inputs where the canonical restart is already exact.
"""
import csv
import io
import json
import math

import numpy as np
import pytest

from mrdiv.cli import COLUMNS, main
from mrdiv.closedform import iso_measured
from mrdiv.states import isotropic

FAST = ["--restarts", "2", "--max-evals", "150", "--seed", "7"]


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def csv_rows(out: str) -> list:
    rows = list(csv.DictReader(io.StringIO(out)))
    assert all(tuple(r.keys()) == COLUMNS for r in rows)
    return rows


def test_sandwich_brackets_log3(capsys):
    code, out, _ = run_cli(
        ["divergence", "--rho", "phi", "--sigma", "phi-perp", "--d", "2",
         "--alpha", "2", "--class", "ppt", "--mode", "sandwich"] + FAST,
        capsys)
    assert code == 0
    rows = csv_rows(out)
    kinds = {r["kind"]: r for r in rows}
    assert set(kinds) == {"lower", "upper"}
    assert kinds["lower"]["class"] == "LO"
    assert kinds["upper"]["class"] == "PPT"
    ref = math.log(3.0)
    lo = float(kinds["lower"]["value_nats"])
    hi = float(kinds["upper"]["value_nats"])
    assert lo <= hi + 1e-9
    assert lo == pytest.approx(ref, abs=1e-3)
    assert hi == pytest.approx(ref, abs=1e-3)
    # display base defaults to 2: log2(3) bits, derived from nats exactly
    assert float(kinds["lower"]["value_display"]) == lo / math.log(2.0)


def test_identical_states_give_zero(capsys):
    code, out, _ = run_cli(
        ["divergence", "--rho", "iso:0.5", "--sigma", "iso:0.5"] + FAST,
        capsys)
    assert code == 0
    for r in csv_rows(out):
        assert abs(float(r["value_nats"])) < 1e-6


def test_closedform_one_bit_exactly(capsys):
    code, out, _ = run_cli(
        ["divergence", "--mode", "closedform", "--rho", "iso:1",
         "--sigma", "iso:0.25", "--d", "2"],
        capsys)
    assert code == 0
    (row,) = csv_rows(out)
    assert row["kind"] == "exact"
    assert row["status"] == "closedform"
    # log(3/1.5) = log 2 nats; the bit conversion is exact division
    assert float(row["value_nats"]) == math.log(2.0)
    assert float(row["value_display"]) == 1.0


def test_json_mirrors_csv(capsys):
    argv = ["divergence", "--mode", "closedform", "--rho", "iso:0.8",
            "--sigma", "iso:0.3", "--d", "3", "--alpha", "0.7"]
    code_c, out_c, _ = run_cli(argv + ["--format", "csv"], capsys)
    code_j, out_j, _ = run_cli(argv + ["--format", "json"], capsys)
    assert code_c == 0 and code_j == 0
    (crow,) = csv_rows(out_c)
    (jrow,) = json.loads(out_j)
    assert tuple(jrow.keys()) == COLUMNS
    for col in COLUMNS:
        jv = jrow[col]
        if isinstance(jv, float):
            assert float(crow[col]) == jv
        else:
            assert crow[col] == ("" if jv is None else str(jv))


def test_log_base_e_restores_nats(capsys):
    argv = ["divergence", "--mode", "closedform", "--rho", "iso:1",
            "--sigma", "iso:0.25", "--d", "2", "--log-base", "e"]
    code, out, _ = run_cli(argv, capsys)
    assert code == 0
    (row,) = csv_rows(out)
    assert float(row["value_display"]) == float(row["value_nats"])


def test_maxdiv_row_kinds_and_inf_cell(capsys):
    code, out, _ = run_cli(
        ["maxdiv", "--rho", "phi", "--sigma", "phi-perp", "--d", "2",
         "--certify", "phi_vs_perp"],
        capsys)
    assert code == 0
    rows = csv_rows(out)
    by_kind = {r["kind"]: r for r in rows}
    assert set(by_kind) == {"exact", "lower", "upper", "gap", "certificate"}
    # unrestricted max-divergence diverges on disjoint supports
    assert by_kind["exact"]["value_nats"] == "inf"
    ref = math.log(3.0)
    lo = float(by_kind["lower"]["value_nats"])
    hi = float(by_kind["upper"]["value_nats"])
    assert lo <= hi + 1e-9
    assert hi == pytest.approx(ref, abs=1e-4)
    assert float(by_kind["gap"]["value_nats"]) == pytest.approx(hi - lo, abs=1e-12)
    assert float(by_kind["certificate"]["value_nats"]) == pytest.approx(ref, abs=1e-12)
    assert by_kind["certificate"]["status"] == "valid"


def test_certify_prints_json_then_verdict(capsys):
    code, out, _ = run_cli(
        ["certify", "--family", "iso", "--d", "2", "--n", "2",
         "--p", "0.25", "--q", "0.1"],
        capsys)
    assert code == 0
    lines = out.rstrip("\n").split("\n")
    assert lines[-1].startswith("certificate check: PASS")
    cert = json.loads("\n".join(lines[:-1]))
    assert cert["family"] == "iso"
    assert cert["n"] == 2
    lam1 = (0.25 * 2 + 1) / (0.1 * 2 + 1)
    assert cert["lambda"] == pytest.approx(lam1 ** 2, abs=1e-12)


def test_exponent_preset_and_invalid_region(capsys):
    code, out, _ = run_cli(
        ["exponent", "--kind", "stein", "--family", "phi_vs_perp", "--d", "3"],
        capsys)
    assert code == 0
    (row,) = csv_rows(out)
    assert row["status"] == "exact"
    assert float(row["value_nats"]) == pytest.approx(math.log(4.0), abs=1e-12)
    assert float(row["value_display"]) == 2.0

    code, out, _ = run_cli(
        ["exponent", "--kind", "stein", "--family", "phi_vs_iso", "--d", "2",
         "--q", "0.26"],
        capsys)
    assert code == 0
    (row,) = csv_rows(out)
    assert row["status"] == "invalid-region"
    assert row["value_nats"] == "nan"


def test_exponent_curve_file_modes(tmp_path, capsys):
    def write(provenance):
        path = tmp_path / f"curve_{provenance}.json"
        path.write_text(json.dumps({
            "alphas": [1.0, 2.0, 4.0],
            "values": [math.log(3.0)] * 3,
            "provenance": provenance,
            "label": "flat",
        }))
        return str(path)

    code, out, _ = run_cli(
        ["exponent", "--kind", "sc", "--r", str(math.log(3.0) + 0.5),
         "--curve-file", write("exact")],
        capsys)
    assert code == 0
    (row,) = csv_rows(out)
    assert row["family"] == "flat"
    assert row["status"] == "exact"
    assert float(row["value_nats"]) == pytest.approx(0.5, abs=1e-9)
    # the alpha column carries the rate argument for sc rows
    assert float(row["alpha"]) == pytest.approx(math.log(3.0) + 0.5)

    # a lower curve still certifies achievability, with a relabeled status
    code, out, _ = run_cli(
        ["exponent", "--kind", "stein", "--curve-file", write("lower")],
        capsys)
    assert code == 0
    (row,) = csv_rows(out)
    assert row["status"] == "achievable bound (regularization not certified)"
    assert float(row["value_nats"]) == pytest.approx(math.log(3.0), abs=1e-12)

    # unattested provenance is refused outright
    code, _, err = run_cli(
        ["exponent", "--kind", "stein", "--curve-file", write("heuristic")],
        capsys)
    assert code == 3
    assert "attests" in err


def test_sweep_is_sorted_and_matches_closed_form(capsys, monkeypatch):
    monkeypatch.setenv("MRD_THREADS", "2")
    code, out, _ = run_cli(
        ["sweep", "--family", "iso", "--ds", "2,3", "--ps", "1.0",
         "--qs", "0.25,0.5", "--alphas", "1,2"],
        capsys)
    assert code == 0
    rows = csv_rows(out)
    assert len(rows) == 8
    keys = [tuple(r[c] for c in COLUMNS) for r in rows]
    assert keys == sorted(keys)
    for r in rows:
        ref = iso_measured(int(r["d"]), float(r["p"]), float(r["q"]),
                           float(r["alpha"]))
        assert float(r["value_nats"]) == pytest.approx(float(ref), abs=1e-12)


def test_raw_state_files_round_trip(tmp_path, capsys):
    arr = isotropic(2, 0.6).data
    npy = tmp_path / "state.npy"
    np.save(npy, arr)
    jsn = tmp_path / "state.json"
    jsn.write_text(json.dumps({"re": arr.real.tolist(), "im": arr.imag.tolist()}))

    for spec in (f"raw:{npy}", f"raw:{jsn}"):
        code, out, _ = run_cli(
            ["divergence", "--rho", spec, "--sigma", "iso:0.6", "--d", "2",
             "--mode", "upper", "--class", "ppt"],
            capsys)
        assert code == 0
        (row,) = csv_rows(out)
        assert row["p"] == ""  # raw inputs carry no family parameter
        assert abs(float(row["value_nats"])) < 1e-6


def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["divergence", "--rho", "phi", "--sigma", "phi", "--mode", "bogus"])
    assert exc.value.code == 2
    capsys.readouterr()
    assert main([]) == 2  # no subcommand: help on stderr, usage exit
    assert "usage" in capsys.readouterr().err


def test_domain_errors_exit_three(capsys):
    cases = [
        ["divergence", "--rho", "nope", "--sigma", "phi"],
        ["divergence", "--mode", "closedform", "--rho", "iso:1",
         "--sigma", "werner:0.5"],
        ["exponent", "--kind", "sc", "--family", "phi_vs_perp"],
        ["exponent", "--kind", "stein"],
        ["divergence", "--rho", "phi", "--sigma", "phi-perp", "--alpha", "0"],
    ]
    for argv in cases:
        code, _, err = run_cli(argv, capsys)
        assert code == 3, argv
        assert err.startswith("error: ")


def test_reproduce_single_criterion(capsys):
    code, out, _ = run_cli(["reproduce", "--only", "9"], capsys)
    assert code == 0
    assert "criterion 9: PASS" in out
