import csv
import json

import pytest

from rbgatesets.cli import load_config, main
from rbgatesets.theory import nist_decay_parameter


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture
def out(tmp_path, monkeypatch):
    monkeypatch.setenv("RBGATESETS_OUTPUT_DIR", str(tmp_path))
    return tmp_path


def write_config(path, **cfg):
    path.write_text(json.dumps(cfg))
    return str(path)


def test_markov_m1(out):
    assert main(["markov", "--max-m", "1", "-o", "m.csv"]) == 0
    rows = read_csv(out / "m.csv")
    assert len(rows) == 24
    assert sum(float(r["probability"]) == 0.125 for r in rows) == 8
    assert (out / "m.tv.csv").exists()
    manifest = json.loads((out / "m.csv.manifest.json").read_text())
    assert manifest["command"] == "markov" and manifest["config"] == {"max_m": 1}


def test_markov_m40_tv(out):
    assert main(["markov", "--max-m", "40", "-o", "m.csv"]) == 0
    tv = read_csv(out / "m.tv.csv")
    assert float(tv[39]["tv_uniform_c12"]) < 1e-10


def test_markov_zero_is_usage_error(out, capsys):
    assert main(["markov", "--max-m", "0"]) == 2


def test_unknown_command_is_usage_error():
    assert main(["frobnicate"]) == 2


@pytest.mark.parametrize("row, gs, target", [(7, "N", "2.0"), (9, "N", "1.5"), (1, "C", "3.08333")])
def test_decompose_prints_pass(out, capsys, row, gs, target):
    assert main(["decompose", "--row", str(row), "--gateset", gs, "-o", "d.csv"]) == 0
    text = capsys.readouterr().out
    assert f"target {target}" in text and "PASS" in text
    summary = read_csv(out / "d.summary.csv")
    assert summary[0]["status"] == "PASS"


def test_decompose_wrong_convention_is_analysis_failure(out):
    assert main(["decompose", "--row", "1", "--gateset", "N", "--convention", "global_min", "-o", "d.csv"]) == 3


def test_simulate_srb(out, tmp_path):
    cfg = write_config(tmp_path / "c.json", protocol="SRB", noise="depolarizing", noise_params={"p": 0.99}, sequences=4)
    assert main(["simulate", cfg, "-o", "s.csv", "--threads", "2"]) == 0
    fit = read_csv(out / "s.fit.csv")[0]
    assert float(fit["p"]) == pytest.approx(0.99, abs=1e-6)
    assert float(fit["r"]) == pytest.approx(0.005, abs=1e-6)
    data = read_csv(out / "s.csv")
    assert [r["m"] for r in data] == [str(2**k) for k in range(10)]
    assert data[0]["shots"] == "exact"


def test_simulate_nist_yaml(out, tmp_path):
    path = tmp_path / "c.yaml"
    path.write_text("protocol: NIST\nnoise: depolarizing\nnoise_params: {p: 0.99}\nsequences: 3\n")
    assert main(["simulate", str(path), "-o", "s.csv"]) == 0
    fit = read_csv(out / "s.fit.csv")[0]
    lead, _ = nist_decay_parameter(0.99, 0.99, 0.99)
    assert float(fit["p"]) == pytest.approx(lead, abs=1e-6)


def test_simulate_set_overrides(out, tmp_path):
    cfg = write_config(tmp_path / "c.json", protocol="SRB", noise="depolarizing")
    assert main(["simulate", cfg, "--set", "lengths=[1,2,4]", "--set", "sequences=2", "-o", "s.csv"]) == 0
    assert len(read_csv(out / "s.csv")) == 3


def test_simulate_missing_key(out, tmp_path, capsys):
    cfg = write_config(tmp_path / "c.json", protocol="SRB")
    assert main(["simulate", cfg]) == 2
    assert "noise" in capsys.readouterr().err


def test_simulate_unknown_key(tmp_path):
    cfg = write_config(tmp_path / "c.json", protocol="SRB", noise="ideal", colour="blue")
    assert main(["simulate", cfg]) == 2


def test_simulate_bad_file(tmp_path):
    assert main(["simulate", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["simulate", str(bad)]) == 2


def test_simulate_unidentifiable_fit(out, tmp_path, capsys):
    cfg = write_config(tmp_path / "c.json", protocol="SRB", noise="ideal", randomized_recovery=False, sequences=2)
    assert main(["simulate", cfg]) == 3
    assert "fit failed" in capsys.readouterr().err


def test_load_config_flags_win(tmp_path):
    cfg = write_config(tmp_path / "c.json", protocol="SRB", noise="ideal", seed=1)
    assert load_config(cfg, [("seed", 9)]).seed == 9


def test_sweep_empty_rows(out):
    assert main(["sweep", "--rows", "-o", "w.csv"]) == 0
    assert (out / "w.csv").read_text() == (
        "model,row,r_C,r_N,n_C,n_N,r_C_over_n_C,r_N_over_n_N,ratio\n"
    )


def test_sweep_byte_identical(out):
    args = ["sweep", "--models", "over_rotation", "--rows", "7", "--mode", "sampled", "--sequences", "4",
            "--lengths", "1", "4", "16", "32", "64", "--seed", "3"]
    assert main(args + ["-o", "a.csv", "--threads", "1"]) == 0
    assert main(args + ["-o", "b.csv", "--threads", "4"]) == 0
    assert (out / "a.csv").read_bytes() == (out / "b.csv").read_bytes()


def test_json_format(out):
    assert main(["spectral", "--gateset", "N", "--format", "json", "-o", "s.json"]) == 0
    records = json.loads((out / "s.json").read_text())
    values = [r["real"] for r in records if r["context"] == "averaged_superop" and abs(r["real"]) > 1e-8]
    assert sorted(values) == pytest.approx([-0.5, 0.5, 1, 1], abs=1e-10)


def test_spectral_pauli_channel(out):
    args = ["spectral", "--gateset", "N", "--noise", "pauli", "--param", "x=0.99", "--param", "y=0.98",
            "--param", "z=0.985", "-o", "s.csv"]
    assert main(args) == 0
    rows = read_csv(out / "s.csv")
    sup = [float(r["real"]) for r in rows if r["context"] == "averaged_superop"]
    lam = [float(r["real"]) for r in rows if r["context"] == "recursion_matrix"]
    assert sup[1] == pytest.approx(lam[0], abs=1e-10)


def test_spectral_pulse_model(out):
    assert main(["spectral", "--gateset", "N", "--noise", "over_rotation", "--row", "7", "-o", "s.csv"]) == 0
    spread = [r for r in read_csv(out / "s.csv") if r["context"] == "L_singular_spread"]
    assert len(spread) == 1


def test_sweep_fit_failure_is_analysis_failure(out):
    # NIST fits ignore m < 8, leaving a single usable length
    assert main(["sweep", "--models", "dephasing", "--rows", "7", "--lengths", "1", "2", "8"]) == 3


def test_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["markov", "--max-m", "1", "-o", str(blocker / "sub" / "m.csv")]) == 2
