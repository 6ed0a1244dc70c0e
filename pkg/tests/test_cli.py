import json
import math

import pytest

from psnci.cli import main

VACUUM = '{"modes": 1, "terms": [{"amp_re": 1.0, "mode1": {"type": "fock", "n": 0}}]}'
FOCK1 = '{"modes": 1, "terms": [{"amp_re": 1.0, "mode1": {"type": "fock", "n": 1}}]}'
ROOT_HALF = 1.0 / math.sqrt(2.0)
BELL = json.dumps({
    "modes": 2,
    "terms": [
        {"amp_re": ROOT_HALF, "mode1": {"type": "fock", "n": 0},
         "mode2": {"type": "fock", "n": 1}},
        {"amp_re": ROOT_HALF, "mode1": {"type": "fock", "n": 1},
         "mode2": {"type": "fock", "n": 0}},
    ],
})


def _read_csv(path):
    lines = path.read_text().strip().splitlines()
    header = lines[0].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
    return header, rows


def test_dist_fock1_minimum(tmp_path):
    state_file = tmp_path / "fock1.json"
    state_file.write_text(FOCK1)
    out = tmp_path / "f1.csv"
    code = main(["dist", "--state", str(state_file), "--rep", "wigner",
                 "--out", str(out)])
    assert code == 0
    header, rows = _read_csv(out)
    assert header[:3] == ["q", "p", "f_total"]
    vals = [float(r["f_total"]) for r in rows]
    assert min(vals) == pytest.approx(-1.0 / math.pi, abs=1e-9)
    # config sidecar is written alongside
    meta = json.loads((tmp_path / "f1.csv.meta.json").read_text())
    assert meta["command"] == "dist"
    assert meta["rep"] == "wigner"


def test_dist_vacuum_norm_check(tmp_path, capsys):
    out = tmp_path / "vac.csv"
    code = main(["dist", "--state", VACUUM, "--out", str(out)])
    assert code == 0
    norm_line = capsys.readouterr().out.strip()
    assert norm_line.startswith("norm_check = ")
    assert float(norm_line.split("=")[1]) == pytest.approx(1.0, abs=1e-6)


def test_dist_two_mode_factor_dump(tmp_path):
    out = tmp_path / "bell.csv"
    code = main(["dist", "--state", BELL, "--rep", "wigner", "--points", "41",
                 "--extent", "6", "--out", str(out)])
    assert code == 0
    header, rows = _read_csv(out)
    assert header == ["mode", "term_i", "term_j", "q", "p", "re", "im"]
    assert {r["mode"] for r in rows} == {"1", "2"}


def test_indicator_json(capsys):
    code = main(["indicator", "--state", VACUUM, "--rep", "wigner,husimi"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    res = payload["results"]
    assert res["wigner"]["delta"]["value"] == pytest.approx(0.0, abs=1e-6)
    assert res["wigner"]["eta"]["value"] == pytest.approx(0.0, abs=1e-9)
    assert res["husimi"]["delta"]["value"] == pytest.approx(0.0, abs=1e-9)
    assert res["wigner"]["delta"]["valid"] is True
    assert payload["config"]["command"] == "indicator"


def test_malformed_state_exits_2(capsys):
    assert main(["indicator", "--state", "{bad json"]) == 2
    assert main(["indicator", "--state", "/nonexistent/state.json"]) == 2
    capsys.readouterr()


def test_unknown_rep_is_numerical_domain_error():
    # representation names are validated inside the library: domain error
    assert main(["indicator", "--state", VACUUM, "--rep", "glauber"]) == 3


def test_usage_errors():
    assert main(["sweep-a", "--family", "entangled01", "--steps", "0"]) == 2
    assert main(["sweep-a", "--family", "nonsense", "--steps", "5"]) == 2
    assert main(["no-such-command"]) == 2
    assert main(["sweep-r", "--family", "psi02r", "--a", "0.5", "--steps", "3"]) == 2


def test_sweep_a_csv_and_determinism(tmp_path):
    out1 = tmp_path / "s1.csv"
    out2 = tmp_path / "s2.csv"
    argv = ["sweep-a", "--family", "entangled01", "--steps", "5",
            "--reps", "wigner", "--points", "41", "--threads", "2"]
    assert main(argv + ["--out", str(out1)]) == 0
    assert main(argv + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    header, rows = _read_csv(out1)
    assert header == ["param", "rep", "delta", "eta", "entropy",
                      "norm_check", "err_est"]
    assert len(rows) == 5
    assert [float(r["param"]) for r in rows] == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert all(r["rep"] == "wigner" for r in rows)
    assert float(rows[2]["entropy"]) == pytest.approx(1.0, abs=1e-12)
    assert rows[2]["delta"] != ""


def test_sweep_r_csv(tmp_path):
    out = tmp_path / "r.csv"
    code = main(["sweep-r", "--family", "psi00r", "--a", "0.5", "--rmax", "1.0",
                 "--steps", "3", "--out", str(out)])
    assert code == 0
    header, rows = _read_csv(out)
    assert header[-1] == "a"
    assert len(rows) == 3
    assert [float(r["param"]) for r in rows] == [0.0, 0.5, 1.0]
    assert all(r["delta"] == "" for r in rows)
    assert all(float(r["a"]) == 0.5 for r in rows)
    assert float(rows[0]["eta"]) == pytest.approx(0.0, abs=1e-6)


def test_entropy_command(capsys):
    code = main(["entropy", "--state", BELL])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["entropy"] == pytest.approx(1.0, abs=1e-12)

    squeezed_two_mode = json.dumps({
        "modes": 2,
        "terms": [{"amp_re": 1.0,
                   "mode1": {"type": "squeezed", "n": 0, "r": 1.0},
                   "mode2": {"type": "fock", "n": 0}}],
    })
    assert main(["entropy", "--state", squeezed_two_mode]) == 3


def test_numeric_failure_exits_3(tmp_path):
    # a grid too small for the state's support is a numerical error
    state_file = tmp_path / "fock2.json"
    state_file.write_text(
        '{"modes": 1, "terms": [{"amp_re": 1.0, "mode1": {"type": "fock", "n": 2}}]}')
    code = main(["dist", "--state", str(state_file), "--extent", "2",
                 "--points", "32", "--out", str(tmp_path / "x.csv")])
    assert code == 3


def test_threads_env_fallback(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("PSNCI_THREADS", "2")
    assert main(["indicator", "--state", VACUUM, "--rep", "wigner"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["config"]["threads"] == 2
    monkeypatch.setenv("PSNCI_THREADS", "banana")
    assert main(["indicator", "--state", VACUUM, "--rep", "wigner"]) == 2


def test_validate_coarse_grid_fails(capsys):
    code = main(["validate", "--points", "16", "--rep", "wigner", "--threads", "2"])
    out = capsys.readouterr().out
    assert code == 1
    assert "[FAIL]" in out


def test_validate_husimi_positivity_passes(capsys):
    code = main(["validate", "--rep", "husimi", "--threads", "2"])
    out = capsys.readouterr().out
    assert code == 0
    assert "husimi_positivity" in out
    assert "[FAIL]" not in out
