import json

from sierpile.cli import run


def test_counts(capsys):
    assert run(["counts", "--level", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert (out["tau"], out["sigma"], out["rho"]) == ("524880", "486000", "1350000")


def test_limits(capsys):
    assert run(["limits", "--method", "local"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["zeta"] == "7259/5616" and out["mean_height"] == "24107/11232"
    assert run(["limits"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["zeta"] == "635/432" and "decimal" in out


def test_errors(capsys):
    assert run(["counts", "--level", "2", "--bogus"]) == 1
    assert run(["counts", "--level", "99"]) == 1
    assert run(["heights", "--level", "2", "--vertex", "UU:t"]) == 1
    assert "error" in capsys.readouterr().err


def test_deterministic(capsys):
    args = ["sample", "sandpile", "--level", "2", "--seed", "9", "--steps", "300"]
    run(args)
    a = capsys.readouterr().out
    run(args)
    assert capsys.readouterr().out == a


def test_verify_fast(capsys):
    assert run(["verify", "--suite", "fast"]) == 0
    assert "FAIL" not in capsys.readouterr().out


def test_heatmap_csv(tmp_path):
    p = tmp_path / "h.csv"
    assert run(["export", "heatmap", "--level", "2", "--format", "csv", "--out", str(p)]) == 0
    lines = p.read_text().splitlines()
    assert lines[0] == "x,y,vertex,k,probability"
