import json
import subprocess
import sys

import pytest

from rileyslice.cli import run


def test_word(capsys):
    assert run(["word", "1/2"]) == 0
    assert capsys.readouterr().out.strip() == "Y X^-1 Y^-1 X"


def test_poly_json(capsys):
    assert run(["poly", "1/2"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["slope"] == "1/2"
    assert d["orders"] == ["inf", "inf"]
    assert d["coefficients"] == [[2, 0], [0, 0], [1, 0]]


def test_poly_recursive_matches(capsys):
    assert run(["poly", "2/5", "--method", "recursive"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert run(["poly", "2/5", "--method", "direct"]) == 0
    direct = json.loads(capsys.readouterr().out)
    assert rec["coefficients"] == direct["coefficients"]


def test_poly_elliptic_orders(capsys):
    assert run(["poly", "1/2", "--orders", "2,3"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["orders"] == [2, 3]
    assert len(d["coefficients"]) == 3


def test_cusps_csv(tmp_path, capsys):
    out = tmp_path / "cusps.csv"
    assert run(["cusps", "--max-denominator", "1", "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "p,q,re,im,residual"
    rows = [line.split(",") for line in lines[1:]]
    res = sorted(float(r[2]) for r in rows)
    assert res == pytest.approx([-4.0, 4.0], abs=1e-9)


def test_ray_csv(tmp_path, capsys):
    out = tmp_path / "ray.csv"
    assert run(["ray", "1/2", "--samples", "5", "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "slope,t,re,im"
    assert len(lines) == 6
    last = lines[-1].split(",")
    assert last[0] == "1/2" and float(last[1]) == -2.0
    assert abs(float(last[3]) - 2.0) < 1e-9  # cusp at 2i


def test_classify_json(capsys):
    assert run(["classify", "0.5", "0"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["verdict"] == "outside-necessary-bound"
    assert d["witness"]["bound"] == "shimizu-leutbecher"


def test_classify_on_ray(capsys):
    assert run(["classify", "5", "0", "--max-denominator", "4"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["verdict"] == "on-ray" and d["witness"]["slope"] == "1/1"


def test_render_slice_ppm(tmp_path, capsys):
    out = tmp_path / "slice.ppm"
    assert run(["render", "slice", "--max-denominator", "2", "--size", "64x64",
                "--out", str(out)]) == 0
    data = out.read_bytes()
    assert data.startswith(b"P6\n64 64\n255\n")
    assert len(data) == len(b"P6\n64 64\n255\n") + 64 * 64 * 3


def test_render_limitset_ppm(tmp_path, capsys):
    out = tmp_path / "ls.ppm"
    assert run(["render", "limitset", "--rho", "5,0", "--depth", "8",
                "--size", "32x32", "--out", str(out)]) == 0
    assert out.read_bytes().startswith(b"P6\n32 32\n255\n")


def test_unknown_flag_exits_1(capsys):
    assert run(["poly", "1/2", "--nonsense"]) == 1


def test_bad_slope_exits_1(capsys):
    assert run(["poly", "7/3"]) == 1
    assert run(["word", "x/y"]) == 1


def test_bad_orders_exits_1(capsys):
    assert run(["poly", "1/2", "--orders", "1,1"]) == 1


def test_numeric_failure_exits_2(monkeypatch, capsys):
    from rileyslice import errors
    import rileyslice.cli as cli

    def boom(*a, **k):
        raise errors.BranchTrackingError("lost the branch")

    monkeypatch.setattr(cli, "trace_ray", boom)
    assert run(["ray", "1/2", "--out", "/tmp/unused.csv"]) == 2


def test_riley_threads_env(monkeypatch, tmp_path, capsys):
    monkeypatch.setenv("RILEY_THREADS", "not-a-number")
    out = tmp_path / "c.csv"
    assert run(["cusps", "--max-denominator", "1", "--out", str(out)]) == 1
    monkeypatch.setenv("RILEY_THREADS", "1")
    assert run(["cusps", "--max-denominator", "1", "--out", str(out)]) == 0


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rileyslice", "word", "0/1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "Y X"
