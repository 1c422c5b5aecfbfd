import json
import subprocess
import sys

import pytest

from jetstrata.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_minr_prints_one(capsys):
    code, out, _ = call(capsys, "minr", "--d", "2", "--n", "2")
    assert code == 0 and out.strip() == "1"


def test_tspace_dim_zero(capsys):
    code, out, _ = call(capsys, "tspace", "dim", "--s", "2", "--c", "1", "--w", "4")
    assert code == 0 and out.strip() == "0"


def test_usage_errors(capsys):
    assert call(capsys, "nonsense")[0] == 64
    assert call(capsys)[0] == 64
    assert call(capsys, "tau")[0] == 64
    assert call(capsys, "minr", "--d", "x", "--n", "2")[0] == 64


def test_domain_error_exit(capsys):
    code, _, err = call(capsys, "minr", "--d", "5", "--n", "2")
    assert code == 1 and "error" in err
    assert call(capsys, "classify", "--emb", "/nonexistent.json")[0] == 1


def test_json_carries_seed_and_backend(capsys):
    code, out, _ = call(capsys, "--json", "--seed", "7", "minr", "--d", "4", "--n", "3")
    body = json.loads(out)
    assert code == 0 and body["seed"] == 7 and body["backend"] == "rational" and body["min_r"] == 2


def test_seed_determinism_and_flag_position(capsys):
    a = call(capsys, "--seed", "3", "tau", "build", "--random", "--s", "3", "--d", "2", "--n", "2")[1]
    b = call(capsys, "tau", "build", "--random", "--s", "3", "--d", "2", "--n", "2", "--seed", "3")[1]
    c = call(capsys, "tau", "build", "--random", "--s", "3", "--d", "2", "--n", "2", "--seed", "4")[1]
    assert a == b and a != c


def test_tau_round_trip_through_files(capsys, tmp_path):
    out = call(capsys, "tau", "build", "--random", "--s", "3", "--d", "2", "--n", "2")[1]
    body = json.loads(out)
    (tmp_path / "t.json").write_text(json.dumps(body["tau"]))
    (tmp_path / "low.json").write_text(json.dumps(body["A"][:2]))
    code, out, _ = call(capsys, "tau", "check", "--T", str(tmp_path / "t.json"))
    assert code == 0 and "fails" not in out
    code, out, _ = call(capsys, "tau", "solve", "--lower", str(tmp_path / "low.json"), "--target", str(tmp_path / "t.json"))
    assert code == 0
    (tmp_path / "A3.json").write_text(json.dumps(body["A"][:2] + [json.loads(out)["A_s"]]))
    out2 = call(capsys, "tau", "build", "--A", str(tmp_path / "A3.json"))[1]
    assert json.loads(out2)["tau"] == body["tau"]
    code, out, _ = call(capsys, "project", "--T", str(tmp_path / "t.json"))
    assert code == 0 and json.loads(out)["projected"] == body["tau"]


def test_config_file_and_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep settings\nbackend = float\nsamples = 3\nseed = 11\n")
    emb = tmp_path / "t6.json"
    emb.write_text(json.dumps({"kind": "torus6", "params": {"epsilon": 0.5, "delta": 0.25}}))
    code, out, _ = call(capsys, "--json", "--config", str(cfg), "classify", "--emb", str(emb))
    body = json.loads(out)
    assert code == 0 and body["backend"] == "float" and body["seed"] == 11 and len(body["points"]) == 3
    code, out, _ = call(capsys, "--json", "--config", str(cfg), "--seed", "2", "classify", "--emb", str(emb))
    assert json.loads(out)["seed"] == 2
    cfg.write_text("colour = blue\n")
    assert call(capsys, "--config", str(cfg), "minr", "--d", "2", "--n", "2")[0] == 1


def test_embedding_commands(capsys, tmp_path):
    lag = tmp_path / "l.json"
    lag.write_text(json.dumps({"kind": "lagrangian-torus", "params": {"b": [["1/2", "1/2"]], "a": [[1, 1]]}}))
    code, out, _ = call(capsys, "lagcheck", "--emb", str(lag), "--samples", "5")
    assert code == 0 and "lagrangian True" in out
    t6 = tmp_path / "t6.json"
    t6.write_text(json.dumps({"kind": "torus6", "params": {"epsilon": 1.5, "delta": 0.5}}))
    forms = tmp_path / "f.json"
    forms.write_text(json.dumps([[0, 1, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1]]))
    code, out, _ = call(capsys, "stability", "--emb", str(t6), "--forms", str(forms), "--samples", "5")
    assert code == 0 and "volume condition True" in out
    code, out, _ = call(capsys, "--json", "chardist", "--emb", str(t6), "--point", "0.1,0.2,0.3,0.4")
    assert code == 0 and len(json.loads(out)["points"][0]["vectors"]) == 2


def test_stratum_commands(capsys, tmp_path):
    from jetstrata import serialize
    from jetstrata.selftest import lagrangian_jet

    jet = tmp_path / "jet.json"
    jet.write_text(serialize.dumps(serialize.jet_to_json(lagrangian_jet(2, 3))))
    code, out, _ = call(capsys, "stratum", "member", "--jet", str(jet), "--c", "2")
    assert code == 0 and out.strip() == "member"
    code, out, _ = call(capsys, "stratum", "codim", "--c", "2", "--r", "2", "--w", "4")
    assert out.strip() == "9"
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"kind": "graph", "params": {"d": 2, "n": 2, "g": [{"2,0": 1}, {"1,1": 1}]}}))
    code, out, _ = call(capsys, "stratum", "transversality", "--emb", str(g), "--point", "1/2,0")
    assert code == 0 and "transverse" in out and "not" not in out


def test_tdim_table_text(capsys):
    code, out, _ = call(capsys, "tdim-table", "--cmax", "2", "--wmax", "1", "--smax", "2")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0].split() == ["s", "c", "w", "dim"] and lines[-1].split() == ["2", "2", "1", "2"]


def test_selftest_subset(capsys):
    code, out, _ = call(capsys, "selftest", "--only", "8")
    assert code == 0 and "[PASS] criterion  8" in out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "jetstrata", "minr", "--d", "2", "--n", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "1"
