"""
CLI buyruqlari: fayllar, manifest, chiqish kodlari.
"""

import os
import sys
import csv
import json
import hashlib

import pytest

# Loyiha root papkasini path ga qo'shish
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import main
from qc.config import EXIT_OK, EXIT_CONFIG_ERROR, EXIT_NUMERICAL_ERROR, MANIFEST_NAME
from qc.commands import POTENTIAL_COLUMNS, format_cell, json_value


def write_config(tmp_path, data, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def read_csv(path):
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.reader(f))


def run_cli(tmp_path, command, data, out="out", extra=()):
    out_dir = tmp_path / out
    code = main.run([command, "--config", write_config(tmp_path, data), "--out", str(out_dir), *extra])
    return code, out_dir


# ─── Formatlash ───

def test_format_cell():
    assert format_cell(None) == ""
    assert format_cell(float("inf")) == ""
    assert format_cell(float("nan")) == ""
    assert format_cell(3) == "3"
    assert format_cell(True) == "1"
    assert format_cell(1.0 / 3.0) == "0.333333333333"
    assert format_cell(-1.5e-20) == "-1.5e-20"


def test_json_value():
    assert json_value({"a": float("inf"), "b": [1.0 / 3.0, None]}) == {"a": None, "b": [0.333333333333, None]}


# ─── potential ───

def test_potential_a1_50(tmp_path):
    data = {"params": {"beta": 20, "a1": 50},
            "potential": {"rho_min": 1.0, "rho_max": 30.0, "points_per_decade": 16}}
    code, out = run_cli(tmp_path, "potential", data)
    assert code == EXIT_OK
    rows = read_csv(out / "potential.csv")
    assert rows[0] == POTENTIAL_COLUMNS
    col = POTENTIAL_COLUMNS.index("v_branchI_minus")
    for row in rows[1:]:
        rho = float(row[0])
        if rho < 9.9:
            assert row[col] == ""
        elif rho > 10.5:
            assert float(row[col]) < 0
    assert (out / MANIFEST_NAME).exists()


def test_potential_resonance_minus_column_empty(tmp_path):
    data = {"params": {"beta": 20, "a1": "inf"},
            "potential": {"rho_min": 2.0, "rho_max": 200.0, "points_per_decade": 8}}
    code, out = run_cli(tmp_path, "potential", data, extra=("--threads", "3"))
    assert code == EXIT_OK
    rows = read_csv(out / "potential.csv")
    col = POTENTIAL_COLUMNS.index("v_branchI_minus")
    assert all(row[col] == "" for row in rows[1:])
    plus = POTENTIAL_COLUMNS.index("v_branchI_plus")
    assert all(float(row[plus]) < 0 for row in rows[1:])


def test_potential_json_format(tmp_path):
    data = {"params": {"a1": "inf"}, "potential": {"rho_min": 2.0, "rho_max": 20.0, "points_per_decade": 4}}
    code, out = run_cli(tmp_path, "potential", data, extra=("--format", "json"))
    assert code == EXIT_OK
    table = json.loads((out / "potential.json").read_text(encoding="utf-8"))
    assert table["columns"] == POTENTIAL_COLUMNS
    assert all(row[2] is None for row in table["rows"])


# ─── spectrum ───

def test_spectrum_acceptance_and_determinism(tmp_path):
    data = {"params": {"beta": 20, "a1": "inf"}, "spectrum": {"n_min": 4, "n_max": 8}}
    code, out = run_cli(tmp_path, "spectrum", data, out="first")
    assert code == EXIT_OK
    summary = json.loads((out / "spectrum_summary.json").read_text(encoding="utf-8"))
    print(f"   slope_ratio = {summary['slope_ratio']}")
    assert 0.85 <= summary["slope_ratio"] <= 1.15
    assert summary["n0_estimate"] is None
    assert isinstance(summary["numerov_node_count"], int)
    rows = read_csv(out / "spectrum.csv")
    assert rows[0] == ["n", "E_wkb", "E_numerov", "R_n"]
    assert [r[0] for r in rows[1:]] == ["4", "5", "6", "7", "8"]
    assert all(r[1] and r[2] for r in rows[1:])

    code, again = run_cli(tmp_path, "spectrum", data, out="second")
    assert code == EXIT_OK
    for name in ("spectrum.csv", "spectrum_summary.json"):
        assert (out / name).read_bytes() == (again / name).read_bytes()


def test_spectrum_numerical_failure_exit_code(tmp_path):
    """Rezonansda I(-) tarmog'i yo'q: hisoblash xatosi."""
    data = {"params": {"a1": "inf"}, "spectrum": {"potential_kind": "branch_I_minus"}}
    code, out = run_cli(tmp_path, "spectrum", data)
    assert code == EXIT_NUMERICAL_ERROR
    assert not (out / MANIFEST_NAME).exists()


# ─── scattering ───

def test_scattering_poles(tmp_path):
    data = {"params": {"beta": 10, "a1": 1000},
            "scattering": {"a1_min": 10, "a1_max": 1e6, "points_per_decade": 16}}
    code, out = run_cli(tmp_path, "scattering", data)
    assert code == EXIT_OK
    summary = json.loads((out / "scattering_summary.json").read_text(encoding="utf-8"))
    assert summary["pole_count"] == summary["expected_pole_count"] == 3
    rows = read_csv(out / "scattering.csv")
    assert rows[0] == ["a1", "N0", "A0", "is_pole"]
    a1 = [float(r[0]) for r in rows[1:]]
    assert a1 == sorted(a1)
    poles = [r for r in rows[1:] if r[3] == "1"]
    assert len(poles) == 3 and all(r[2] == "" for r in poles)
    assert (out / "sigma0.csv").exists()


# ─── detcheck ───

def test_detcheck_default_passes(tmp_path):
    data = {"params": {"beta": 20, "a1": "inf"},
            "detcheck": {"rho_values": [10, 100, 1000], "m_max_values": [1, 2]}}
    code, out = run_cli(tmp_path, "detcheck", data, extra=("--threads", "2"))
    assert code == EXIT_OK
    summary = json.loads((out / "detcheck_summary.json").read_text(encoding="utf-8"))
    assert summary["pass"] is True
    assert summary["max_rel_diff_m1"] < 1e-8
    assert summary["block_check_max"] <= 1e-12
    rows = read_csv(out / "detcheck.csv")
    assert rows[0] == ["rho", "sector", "m_max", "xi_root", "xi_branch", "rel_diff"]
    assert {r[1] for r in rows[1:]} == {"symmetric", "antisymmetric"}


def test_detcheck_failure_exit_code(monkeypatch, tmp_path):
    """FAIL holatida summary yoziladi, lekin chiqish kodi 3 va manifest yo'q."""
    monkeypatch.setattr("qc.commands.DETCHECK_THRESHOLD", 0.0)
    data = {"params": {"beta": 20, "a1": "inf"},
            "detcheck": {"rho_values": [10, 100], "m_max_values": [1]}}
    code, out = run_cli(tmp_path, "detcheck", data)
    assert code == EXIT_NUMERICAL_ERROR
    summary = json.loads((out / "detcheck_summary.json").read_text(encoding="utf-8"))
    print(f"   pass = {summary['pass']}, threshold = {summary['threshold']}")
    assert summary["pass"] is False
    assert not (out / MANIFEST_NAME).exists()


# ─── Manifest va xatolar ───

def test_manifest_checksums(tmp_path):
    data = {"params": {"a1": "inf"}, "potential": {"rho_min": 2.0, "rho_max": 20.0, "points_per_decade": 4}}
    code, out = run_cli(tmp_path, "potential", data)
    assert code == EXIT_OK
    manifest = json.loads((out / MANIFEST_NAME).read_text(encoding="utf-8"))
    assert manifest["command"] == "potential"
    assert len(manifest["config_hash"]) == 64
    for name, digest in manifest["outputs"].items():
        assert hashlib.sha256((out / name).read_bytes()).hexdigest() == digest


def test_config_error_exit_code(tmp_path):
    code, out = run_cli(tmp_path, "potential", {"params": {"beta": 0.5}})
    assert code == EXIT_CONFIG_ERROR
    assert not (out / MANIFEST_NAME).exists()
    assert main.run(["potential", "--config", str(tmp_path / "none.json")]) == EXIT_CONFIG_ERROR


def test_help_lists_subcommands(capsys):
    with pytest.raises(SystemExit) as info:
        main.run(["--help"])
    assert info.value.code == 0
    text = capsys.readouterr().out
    for command in ("potential", "spectrum", "scattering", "detcheck"):
        assert command in text


def test_unknown_log_level_falls_back(monkeypatch, tmp_path):
    monkeypatch.setenv("QC_LOG_LEVEL", "loud")
    data = {"params": {"a1": "inf"}, "potential": {"rho_min": 2.0, "rho_max": 4.0, "points_per_decade": 2}}
    code, _ = run_cli(tmp_path, "potential", data)
    assert code == EXIT_OK


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
