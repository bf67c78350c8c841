import json
import subprocess
import sys

import numpy as np
import pytest


def run_cli(*args):
    proc = subprocess.run([sys.executable, "-m", "quadprop.cli", *args],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


@pytest.mark.parametrize("example,dim", [("heat", 1), ("kfp", 0),
                                         ("harmonic_oscillator", 2)])
def test_analyze_singular_space_dims(example, dim):
    rc, out, _ = run_cli("analyze", "--example", example)
    assert rc == 0
    doc = json.loads(out)
    assert doc["singular_space_dim"] == dim
    assert doc["cross_check"] == "ok"


def test_analyze_deterministic_bytes():
    outs = {run_cli("analyze", "--example", "kfp")[1] for _ in range(2)}
    assert len(outs) == 1


def test_kernel_heat_amplitudes():
    rc, out, _ = run_cli("kernel", "--example", "heat", "--t", "1")
    assert rc == 0
    doc = json.loads(out)
    assert abs(doc["amp_re"] - 1 / (2 * np.pi * np.sqrt(2))) <= 1e-9
    assert doc["diagnostics"]["semigroup_residual"] <= 1e-8
    rc, out, _ = run_cli("kernel", "--example", "heat", "--t", "0")
    doc = json.loads(out)
    assert abs(doc["amp_re"] - 1 / (2 * np.pi)) <= 1e-10


def test_kernel_harmonic_oscillator_diagnostics():
    rc, out, _ = run_cli("kernel", "--example", "harmonic_oscillator", "--t", "0.7")
    assert rc == 0
    doc = json.loads(out)
    assert doc["diagnostics"]["psd_min"] >= -1e-9
    assert doc["diagnostics"]["t0_residual"] <= 1e-10


@pytest.mark.parametrize("example,data,t", [("heat", "delta", "0.5"),
                                            ("free_schrodinger", "delta", "0.5"),
                                            ("kfp", "delta", "0.25")])
def test_verify_passes(example, data, t):
    rc, out, _ = run_cli("verify", "--example", example, "--data", data, "--t", t)
    assert rc == 0
    assert json.loads(out)["passed"] is True


def test_verify_free_schrodinger_direction():
    rc, out, _ = run_cli("verify", "--example", "free_schrodinger",
                         "--data", "delta", "--t", "0.5")
    doc = json.loads(out)
    d = doc["measured"][0]
    z = d["re"][0][0] + 1j * d["im"][0][0]
    ref = (2 * 0.5 - 1j) / abs(2 * 0.5 - 1j)
    assert min(abs(z - ref), abs(z + ref)) <= 1e-3


def test_invalid_inputs_exit_2():
    rc, _, err = run_cli("analyze")
    assert rc == 2 and "invalid input" in err
    rc, _, _ = run_cli("flow", "--example", "heat", "--t-list", "0.1,bad")
    assert rc == 2
    rc, _, _ = run_cli("weights", "--example", "heat", "--t-list", "-1")
    assert rc == 2
    rc, _, _ = run_cli("analyze", "--symbol", "/nonexistent.json")
    assert rc == 2


def test_wavefront_csv_report(tmp_path):
    out_path = tmp_path / "wf.csv"
    rc, out, _ = run_cli("wavefront", "--example", "heat", "--data", "constant",
                         "--t", "1", "--out", str(out_path))
    assert rc == 0
    lines = out_path.read_text().strip().split("\n")
    assert lines[0] == "omega0_re,omega0_im,exponent,flag"
    assert len(lines) == 65
    flags = {line.rsplit(",", 1)[1] for line in lines[1:]}
    assert flags == {"singular", "regular"}
    doc = json.loads(out)
    assert sum(doc["flags"]) == 2


def test_wavefront_deterministic_bytes():
    a = run_cli("wavefront", "--example", "heat", "--data", "delta", "--t", "0")[1]
    b = run_cli("wavefront", "--example", "heat", "--data", "delta", "--t", "0")[1]
    assert a == b


def test_propagate_heat_delta():
    rc, out, _ = run_cli("propagate", "--example", "heat", "--data", "delta",
                         "--t", "0.5")
    assert rc == 0
    doc = json.loads(out)
    # FBI image of delta has g = -1; heat flow relaxes it toward 0
    assert abs(doc["input"]["g"]["re"][0][0] + 1) <= 1e-12
    assert doc["output"]["g"]["re"][0][0] > -1


def test_symbol_json_input(tmp_path):
    path = tmp_path / "heat.json"
    path.write_text(json.dumps({"n": 1, "Q_re": [[0, 0], [0, 1]],
                                "Q_im": [[0, 0], [0, 0]]}))
    rc, out, _ = run_cli("analyze", "--symbol", str(path))
    assert rc == 0
    assert json.loads(out)["singular_space_dim"] == 1


def test_kfp_a_flag():
    rc, out, _ = run_cli("analyze", "--example", "kfp", "--kfp-a", "2.0")
    assert rc == 0
    doc = json.loads(out)
    assert doc["Q"]["im"][0][3] == -1.0
    assert doc["singular_space_dim"] == 0
