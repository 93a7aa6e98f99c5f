"""Command-line interface."""

import json
import subprocess
import sys

import pytest

from twisted_torsion.cli import main
from twisted_torsion.io import bundled

LENS = str(bundled("lens_p3_q7.json"))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_lens_command(capsys):
    code, out, _ = run(capsys, "lens", "--p", "3", "--q", "7")
    assert code == 0
    assert "torsion = 7/3" in out.splitlines()


def test_torsion_on_bundled_file(capsys):
    code, out, _ = run(capsys, "torsion", LENS, "--exact")
    assert code == 0
    assert out.splitlines()[0] == "torsion = 7/3"
    assert "log|torsion|" not in out


def test_betti_with_flux_scale(capsys):
    code, out, _ = run(capsys, "betti", LENS, "--flux-scale=-5/2")
    assert code == 0
    assert out.split() == ["b0", "=", "0", "b1", "=", "0", "chi", "=", "0"]
    code, _, err = run(capsys, "betti", LENS, "--flux-scale", "0")
    assert code == 2 and "nonzero" in err


def test_spectral(capsys):
    code, out, _ = run(capsys, "spectral", LENS)
    assert code == 0 and "E_inf totals (even, odd) = (0, 0)" in out


def test_tduality(capsys):
    code, out, _ = run(capsys, "tduality", "--p", "1", "--q", "5", "--chi", "2")
    assert code == 0
    assert "normalized pair = (5, 1/5)" in out
    assert any(line.startswith("PASS reciprocity") for line in out.splitlines())


def test_tduality_with_model(capsys, tmp_path):
    f = tmp_path / "s2.json"
    f.write_text(json.dumps({"kind": "pair-model", "names": ["1", "v"], "degrees": [0, 2],
                             "products": [[0, 0, 0, 1], [0, 1, 1, 1], [1, 0, 1, 1]],
                             "F": [0, 1], "Fhat": [0, 5], "Omega": [0, 0]}))
    code, out, _ = run(capsys, "tduality", "--p", "1", "--q", "5", "--model", str(f))
    assert code == 0 and "PASS tmap" in out


def test_bad_file_exit_code(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text('{"kind": "lens", "p": 3,,}')
    code, _, err = run(capsys, "torsion", str(f))
    assert code == 2 and "line 1" in err


def test_verify_json_and_exit_code(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, _, _ = run(capsys, "verify", "reciprocity", "--json", "--out", str(out_file))
    assert code == 0
    rep = json.loads(out_file.read_text())
    assert rep["suite"] == "reciprocity" and all(c["status"] == "PASS" for c in rep["checks"])
    assert "runtime" not in rep["checks"][0]


def test_verify_failing_tolerance_gives_nonzero(capsys):
    # an impossible tolerance makes the floating Born-Infeld comparison fail
    code, out, _ = run(capsys, "verify", "born-infeld", "--trials", "2", "--tol", "1e-30")
    assert code == 1 and "FAIL" in out


def test_tolerance_environment_variable(capsys, monkeypatch):
    monkeypatch.setenv("TWISTED_TORSION_TOL", "1e-30")
    code, _, _ = run(capsys, "verify", "born-infeld", "--trials", "2")
    assert code == 1


def test_verify_deterministic(capsys):
    first = run(capsys, "verify", "betti", "--seed", "1", "--trials", "4", "--json")[1]
    second = run(capsys, "verify", "betti", "--seed", "1", "--trials", "4", "--json")[1]
    assert first == second


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "twisted_torsion", "lens", "--p", "3", "--q", "7"],
                       capture_output=True, text=True, check=True)
    assert "torsion = 7/3" in r.stdout


def test_exact_flag_refuses_floating_input(capsys, tmp_path):
    f = tmp_path / "circle.json"
    f.write_text(json.dumps({"kind": "group-ring", "cells": [1, 1],
                             "boundaries": [[[[{"coeff": 1, "word": [["t", 1]]}, {"coeff": -1, "word": []}]]]],
                             "representation": {"rank": 1, "generators": {"t": [[2.5]]}}}))
    code, out, _ = run(capsys, "torsion", str(f))
    assert code == 0 and "phase: ambiguous" in out
    code, _, err = run(capsys, "torsion", str(f), "--exact")
    assert code == 2 and "exact" in err
