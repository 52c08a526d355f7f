import json

import pytest

from adec.cli import main


@pytest.fixture
def config(tmp_path):
    path = tmp_path / "e1.json"
    path.write_text(json.dumps({
        "frame": {"eigenvalues": [1], "phi0": [1]},
        "plan": {"r": [1], "eta": [6], "rho": [2, 4, 8]},
        "alphabet": {"delta": 0.25, "L": 8},
        "signal": {"x": [[0.3, 0.2]]},
    }))
    return path


def test_sweep_fit(config, tmp_path, capsys):
    out = tmp_path / "o.csv"
    assert main(["sweep", str(config), "-o", str(out), "--summary", "-", "--svg", str(tmp_path / "p.svg")]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["checks"]["error_bound"] and summary["rows"] == 3
    assert len(out.read_text().splitlines()) == 4
    assert main(["fit", str(out)]) == 0
    slopes = json.loads(capsys.readouterr().out)
    assert slopes["adapted:k=1:eta=6:r=1"] < 0


def test_sweep_to_stdout(config, capsys):
    assert main(["sweep", str(config)]) == 0
    assert capsys.readouterr().out.startswith("k,m,rho,eta,r,")


def test_encode_decode_reconstruct(config, tmp_path, capsys):
    blob = tmp_path / "b.adec"
    assert main(["encode", str(config), "-o", str(blob)]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["payload_bits"] == 2 * 6 * info["width"]
    assert main(["decode", str(blob)]) == 0
    decoded = json.loads(capsys.readouterr().out)
    assert len(decoded["numerators"]) == 6
    assert main(["reconstruct", str(config)]) == 0
    direct = json.loads(capsys.readouterr().out)
    assert main(["reconstruct", str(config), "--from", str(blob)]) == 0
    via = json.loads(capsys.readouterr().out)
    assert via["err"] == pytest.approx(direct["err"], rel=1e-9)
    assert direct["err"] <= direct["err_bound"]


def test_verify_exit_codes(capsys):
    assert main(["verify", "--level", "quick", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["twist_scale"]["passed"]
    assert main(["verify", "--level", "quick", "--flip-dbar"]) == 1
    assert "[FAIL] twist_scale" in capsys.readouterr().out


def test_config_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert main(["sweep", str(bad)]) == 2
    assert main(["encode", str(tmp_path / "missing.json"), "-o", str(tmp_path / "x")]) == 2
    assert main(["fit", str(tmp_path / "missing.csv")]) == 2
    assert "config error" in capsys.readouterr().err


def test_malformed_stream_exit(tmp_path, capsys):
    junk = tmp_path / "junk.adec"
    junk.write_bytes(b"NOPE" + bytes(30))
    assert main(["decode", str(junk)]) == 1
    assert "Malformed" in capsys.readouterr().err
