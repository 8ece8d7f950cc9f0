"""Command-line interface tests: exit codes, output contract, determinism."""

import json
import subprocess
import sys

import numpy as np
import pytest

from heraldkit.cli import (EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, main,
                           table1_circuit, REFERENCE_CAT_ROWS)

HERALD_CONFIG = {
    "circuit": {
        "modes": 2,
        "squeeze": [{"r": 1.3073}, {"r": -0.1474}],
        "interferometer": {"mesh": [{"i": 0, "j": 1, "theta": -0.9686}]},
    },
    "pattern": {"detected": [1], "counts": [2]},
}


def write_config(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_herald_json_output(tmp_path, capsys):
    cfg = write_config(tmp_path, HERALD_CONFIG)
    out = tmp_path / "out.json"
    assert main(["herald", "--config", cfg, "--out", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["probability"] == pytest.approx(0.1120, abs=0.003)
    assert doc["zeta"]["re"] == pytest.approx(0.1796, abs=0.003)
    assert "config_sha256" in doc
    # even-parity conditional state
    assert abs(doc["coeffs"][1]["re"]) < 1e-9


def test_herald_csv_output(tmp_path, capsys):
    cfg = write_config(tmp_path, HERALD_CONFIG)
    assert main(["herald", "--config", cfg, "--format", "csv"]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "field,value,imag"
    row = dict((ln.split(",")[0], ln.split(",")[1]) for ln in lines[1:])
    assert float(row["probability"]) == pytest.approx(0.1120, abs=0.003)


def test_herald_deterministic_bytes(tmp_path):
    cfg = write_config(tmp_path, HERALD_CONFIG)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["herald", "--config", cfg, "--out", str(a)])
    main(["herald", "--config", cfg, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_herald_wigner_csv(tmp_path):
    doc = dict(HERALD_CONFIG)
    grid = tmp_path / "w.csv"
    doc["wigner"] = {"x": [-1.0, 1.0, 3], "p": [-1.0, 1.0, 3],
                     "path": str(grid)}
    cfg = write_config(tmp_path, doc)
    assert main(["herald", "--config", cfg, "--out", str(tmp_path / "o.json")]) == EXIT_OK
    lines = grid.read_text().strip().splitlines()
    assert lines[0] == "x,p,W"
    assert len(lines) == 10


def test_invalid_json_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    assert main(["herald", "--config", str(path)]) == EXIT_CONFIG


def test_unknown_key_exit_code(tmp_path, capsys):
    doc = dict(HERALD_CONFIG)
    doc["extra_field"] = 1
    cfg = write_config(tmp_path, doc)
    assert main(["herald", "--config", cfg]) == EXIT_CONFIG
    assert "extra_field" in capsys.readouterr().err


def test_missing_key_exit_code(tmp_path, capsys):
    cfg = write_config(tmp_path, {"pattern": {"detected": [1], "counts": [2]}})
    assert main(["herald", "--config", cfg]) == EXIT_CONFIG


def test_overstrong_squeeze_numeric_exit(tmp_path, capsys):
    doc = {
        "circuit": {"modes": 2, "squeeze": [{"r": 1.0}, {"r": 1.0}]},
        "pattern": {"detected": [1], "counts": [1]},
    }
    # r beyond r_max is a config error, not a numeric one
    doc["circuit"]["squeeze"][0]["r"] = 5.0
    cfg = write_config(tmp_path, doc)
    assert main(["herald", "--config", cfg]) == EXIT_CONFIG


def test_unknown_reproduction_name(capsys):
    assert main(["reproduce", "bogus"]) == EXIT_CONFIG


def test_diag_derivative(capsys):
    assert main(["diag-derivative", "--format", "csv"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "pass" in out


def test_probe_conjecture_config(tmp_path, capsys):
    cfg = write_config(tmp_path, {"modes": 2, "n_total": 2, "trials": 3,
                                  "seed": 9, "starts": 30})
    assert main(["probe-conjecture", "--config", cfg]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["dof"] == 2
    assert doc["solved"] == 3


def test_design_subcommand(tmp_path):
    cfg = write_config(tmp_path, {
        "target": {"kind": "w", "params": {"M": 2}},
        "modes": 3,
        "pattern": {"detected": [2], "counts": [1]},
        "fidelity_floor": 0.999,
        "restarts": 1,
        "rounds": 1,
        "seed": 3,
    })
    out = tmp_path / "design.json"
    assert main(["design", "--config", cfg, "--out", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["feasible"] is True
    assert doc["fidelity"] >= 0.999
    assert doc["probability"] > 0.2
    assert doc["seed"] == 3


def test_table1_circuit_rows():
    row = REFERENCE_CAT_ROWS[3]
    params = table1_circuit(row)
    assert params.num_modes == 2
    assert params.squeeze_mag[0] == pytest.approx(1.3073)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "heraldkit.cli", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip()


def test_call_herald_matches_subcommand(tmp_path, capsys):
    cfg = write_config(tmp_path, HERALD_CONFIG)
    assert main(["call", "herald", "--config", cfg]) == EXIT_OK
    via_call = json.loads(capsys.readouterr().out)
    assert main(["herald", "--config", cfg]) == EXIT_OK
    via_sub = json.loads(capsys.readouterr().out)
    assert via_call["probability"] == via_sub["probability"]
    assert via_call["coeffs"] == via_sub["coeffs"]
    assert via_call["version"]


def test_call_fidelity_and_render(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "a": {"target": {"kind": "cat", "params": {"alpha": 1.0, "cutoff": 12}}},
        "b": {"target": {"kind": "cat", "params": {"alpha": 1.0, "cutoff": 12}}},
    })
    assert main(["call", "fidelity", "--config", cfg]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["fidelity"] == pytest.approx(1.0, abs=1e-12)
    cfg = write_config(tmp_path, {"target": {"kind": "noon", "params": {"N": 2}}},
                       name="render.json")
    assert main(["call", "render_target", "--config", cfg]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["kind"] == "fock"


def test_call_unknown_function(tmp_path, capsys):
    cfg = write_config(tmp_path, {})
    assert main(["call", "bogus", "--config", cfg]) == EXIT_CONFIG


def test_call_unknown_key(tmp_path, capsys):
    doc = dict(HERALD_CONFIG)
    doc["extra"] = 1
    cfg = write_config(tmp_path, doc)
    assert main(["call", "herald", "--config", cfg]) == EXIT_CONFIG
    assert "extra" in capsys.readouterr().err
