import csv
import math
import shutil
import subprocess

import numpy as np
import pytest

from ptchain import cli, negf
from ptchain.model import make_circuit


def run(tmp_path, *argv, name="out.csv"):
    out = tmp_path / name
    code = cli.main([*argv, "--out", str(out)])
    return code, (out.read_text() if out.exists() else None)


def rows(text):
    return list(csv.DictReader(text.splitlines()))


def test_spectrum_row_count(tmp_path):
    code, text = run(tmp_path, "spectrum", "--n", "2", "--gamma", "0,0.1,0.3,0.5", "--phi", "0")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "gamma,phi,omega,T,re_tau,im_tau,phase"
    assert len(lines) - 1 == 16004


def test_spectrum_antiresonance_row(tmp_path):
    code, text = run(tmp_path, "spectrum", "--n", "2", "--gamma", "0.3", "--phi", "0",
                     "--omega-range=-1.5:0.5:2001")
    assert code == 0
    (row,) = [r for r in rows(text) if float(r["omega"]) == -0.5]
    assert float(row["T"]) < 1e-12


def test_spectrum_values_round_trip(tmp_path):
    _, text = run(tmp_path, "spectrum", "--n", "3", "--gamma", "0.1", "--phi", "pi/2", "--omega-range=-1:1:7")
    r = rows(text)[3]
    # 17 significant digits make the text form lossless
    assert float(r["phi"]) == math.pi / 2
    spec = make_circuit(3, gamma=0.1, phi=math.pi / 2)
    assert float(r["T"]) == negf.transmission(spec, np.array([float(r["omega"])]))[0]


def test_deterministic_output(tmp_path):
    argv = ("spectrum", "--n", "4", "--gamma", "0,0.5", "--phi", "0,2pi", "--omega-range=-1:1:301")
    _, a = run(tmp_path, *argv, name="a.csv")
    _, b = run(tmp_path, *argv, "--threads", "3", name="b.csv")
    assert a == b


@pytest.mark.parametrize("argv", [
    ("spectrum", "--phi", ""),
    ("spectrum", "--phi", "zero"),
    ("spectrum", "--omega-range=-1:1:1"),
    ("spectrum", "--n", "4", "--delta", "0.5"),
    ("analyze", "--n", "1"),
])
def test_config_errors_exit_2(tmp_path, argv):
    assert run(tmp_path, *argv)[0] == 2


def test_band_error_exit_3(tmp_path):
    assert run(tmp_path, "spectrum", "--omega-range=-2.5:1:10")[0] == 3
    assert run(tmp_path, "spectrum", "--t0", "0.5")[0] == 3


def test_unknown_figure_exit_2(tmp_path):
    assert run(tmp_path, "reproduce", "fig9z")[0] == 2


def test_reproduce_fig3c(tmp_path):
    code, text = run(tmp_path, "reproduce", "fig3c")
    assert code == 0
    data = rows(text)
    assert len(data) == 4 * 4001
    assert sorted({float(r["gamma"]) for r in data}) == [0.0, 0.1, 0.3, 0.5]
    assert {float(r["phi"]) for r in data} == {0.0}
    # E2 = 0.5 with phi = 0 leaves exact zeros at 0 and E2 once gamma > 0
    (zero,) = [r for r in data if float(r["gamma"]) == 0.3 and float(r["omega"]) == 0.0]
    assert float(zero["T"]) < 1e-12


def test_reproduce_fig4b_flux(tmp_path):
    _, text = run(tmp_path, "reproduce", "fig4b")
    assert {float(r["phi"]) for r in rows(text)} == {2 * math.pi}


def report_lines(tmp_path, *argv):
    code, text = run(tmp_path, "analyze", *argv, name="report.txt")
    assert code == 0
    return text.splitlines()


def test_analyze_n4(tmp_path):
    lines = report_lines(tmp_path, "--n", "4", "--gamma", "0", "--phi", "0")
    assert lines[0] == "kind,omega,value,nearest_level,distance"
    assert any(l.startswith("antiresonance,0.5,") for l in lines)


def test_analyze_n5_flux(tmp_path):
    lines = report_lines(tmp_path, "--n", "5", "--gamma", "0", "--phi", "2pi")
    assert any(l.startswith("antiresonance,0.0,") for l in lines)


def test_analyze_uncoupled_is_empty(tmp_path):
    lines = report_lines(tmp_path, "--n", "3", "--v0", "0", "--gamma", "0,0.3", "--phi", "0")
    assert [l for l in lines[1:] if not l.startswith("#")] == []


def test_analyze_rows_sorted(tmp_path):
    lines = report_lines(tmp_path, "--n", "2", "--gamma", "0.3", "--phi", "0")
    omegas = [float(l.split(",")[1]) for l in lines[2:]]
    assert omegas == sorted(omegas) and len(omegas) >= 3


def test_config_file_with_flag_override(tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text("[chain]\nn = 3\n[sweep]\ngamma = 0.1, 0.2\nomega_points = 21\n")
    _, text = run(tmp_path, "spectrum", "--config", str(ini), "--gamma", "0.4")
    data = rows(text)
    assert len(data) == 21 and {float(r["gamma"]) for r in data} == {0.4}


def test_verify_subset():
    assert cli.main(["verify", "--only", "eigenvalues", "--only", "decoupling_parity"]) == 0


@pytest.mark.skipif(shutil.which("ptchain") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["ptchain", "verify", "--only", "eigenvalues"], capture_output=True, text=True)
    assert proc.returncode == 0 and "PASS" in proc.stdout


def test_presets_cover_every_figure():
    from ptchain import presets
    ids = {f"fig{k}{p}" for k in (2, 3, 4, 5) for p in "abcd"}
    assert ids <= set(presets.PRESETS)
    p = presets.get("fig5a")
    assert (p.kind, p.n, p.phi) == ("phase", 2, 0.0)
    p = presets.get("fig3c")
    assert (p.n, p.delta, p.phi, p.gammas) == (3, 0.5, 0.0, (0.0, 0.1, 0.3, 0.5))
    with pytest.raises(KeyError):
        presets.get("fig6a")
