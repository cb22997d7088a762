import csv
import io
import math
import re

import numpy as np
import pytest

from nbldpc.cli import main

REG23 = ["--lambda", "y", "--rho", "y^2"]


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def table(text):
    """Header comments and CSV rows of a command's output."""
    lines = text.splitlines()
    comments = [l for l in lines if l.startswith("#")]
    body = [l for l in lines if l and not l.startswith("#")]
    rows = list(csv.DictReader(io.StringIO("\n".join(body))))
    return comments, rows


def test_threshold_m1(capsys):
    rc, out, _ = run(capsys, "threshold", *REG23, "--m", "1")
    assert rc == 0
    comments, rows = table(out)
    assert float(rows[0]["threshold"]) == pytest.approx(0.5, abs=5e-4)
    assert any("seed = 0" in c for c in comments)
    assert any("lambda = y^1; rho = y^2" in c for c in comments)


def test_threshold_errors(capsys):
    rc, _, err = run(capsys, "threshold", "--lambda", "0.5 y + 0.4 y^2", "--rho", "y^2", "--m", "2")
    assert rc == 2 and "config error" in err
    rc, _, _ = run(capsys, "threshold", "--lambda", "y^", "--rho", "y^2", "--m", "2")
    assert rc == 2
    rc, _, _ = run(capsys, "threshold", *REG23)
    assert rc == 2
    rc, _, err = run(capsys, "threshold", *REG23, "--m", "5", "--labels", "GF:0x25")
    assert rc == 3 and "unsupported" in err


def test_config_file_with_line_diagnostic(tmp_path, capsys):
    good = tmp_path / "ok.cfg"
    good.write_text("lambda = y\nrho = y^2\nm = 1\n")
    rc, out, _ = run(capsys, "stability", "--config", str(good))
    assert rc == 0 and "0.5" in out
    bad = tmp_path / "bad.cfg"
    bad.write_text("lambda = y\nrho = y^2\nm = x\n")
    rc, _, err = run(capsys, "stability", "--config", str(bad))
    assert rc == 2 and "line 3" in err
    rc, _, _ = run(capsys, "stability", "--config", str(tmp_path / "missing.cfg"))
    assert rc == 2


def test_evolve_zero_and_below_threshold(capsys):
    rc, out, _ = run(capsys, "evolve", *REG23, "--m", "2", "--eps", "0")
    assert rc == 0
    _, rows = table(out)
    assert len(rows) == 1
    assert list(rows[0]) == ["iter", "p0", "p1", "p2", "expected_dim"]
    assert float(rows[0]["p0"]) == 1
    rc, out, _ = run(capsys, "evolve", *REG23, "--m", "2", "--eps", "0.5")
    _, rows = table(out)
    assert float(rows[-1]["expected_dim"]) < 1e-8
    for r in rows:
        assert sum(float(r[f"p{k}"]) for k in range(3)) == pytest.approx(1, abs=1e-5)


def test_evolve_bad_eps(capsys):
    with pytest.raises(SystemExit):
        main(["evolve", *REG23, "--m", "2", "--eps", "1.5"])


def test_stability_outputs(capsys):
    rc, out, _ = run(capsys, "stability", *REG23, "--m", "1,2")
    assert rc == 0
    assert "m=1: stability bound eps_stab = 0.5" in out
    assert f"{math.sqrt(2.5) - 1:.6g}" in out
    rc, out, _ = run(capsys, "stability", "--lambda", "y^2", "--rho", "y^3", "--m", "2")
    assert "condition vacuous, bound = 1" in out
    rc, out, _ = run(capsys, "stability", *REG23, "--m", "1", "--battacharyya", "0.6")
    assert "unstable" in out


@pytest.mark.slow
def test_exit_m4(tmp_path, capsys):
    out_csv = tmp_path / "exit.csv"
    plot = tmp_path / "exit.png"
    rc, out, _ = run(capsys, "exit", *REG23, "--m", "4", "--out", str(out_csv), "--plot", str(plot))
    assert rc == 0 and plot.stat().st_size > 0
    comments, rows = table(out_csv.read_text())
    line = next(c for c in comments if "map_upper_bound" in c)
    bound = float(re.search(r"m=4: (\S+)", line).group(1))
    assert bound == pytest.approx(0.6426, abs=1e-3)
    assert float(re.search(r"design_rate=(\S+)", line).group(1)) == pytest.approx(1 / 3, abs=1e-6)
    g = np.array([float(r["epsilon"]) for r in rows])
    h = np.array([float(r["h_bp"]) for r in rows])
    assert np.all(np.diff(h) >= 0)
    xs = np.concatenate([[bound], g[g > bound]])
    hs = np.interp(xs, g, h)
    area = float(np.sum(np.diff(xs) * (hs[1:] + hs[:-1]) / 2))
    assert area == pytest.approx(1 / 3, abs=1e-4)


SIM = [*REG23, "--m", "2", "--n", "300", "--eps", "0.45", "--trials", "3", "--max-iter", "20", "--seed", "11"]


def test_simulate_is_reproducible(tmp_path, capsys):
    paths = []
    for tag in "ab":
        out, hist = tmp_path / f"{tag}.csv", tmp_path / f"{tag}_hist.csv"
        rc, stdout, _ = run(capsys, "simulate", *SIM, "--out", str(out), "--hist-out", str(hist))
        assert rc == 0
        paths.append((out.read_bytes(), hist.read_bytes()))
    assert paths[0] == paths[1]
    comments, rows = table(paths[0][0].decode())
    assert any(c.startswith("# seed = 11") for c in comments)
    assert any("DE symbol_erasure" in c for c in comments)
    assert any("MC symbol_erasure" in c for c in comments)
    assert list(rows[0]) == ["trial", "iterations", "symbol_erasure_rate", "bit_erasure_rate"]
    _, hrows = table(paths[0][1].decode())
    assert list(hrows[0]) == ["iter", "dim", "count"]
    assert len(hrows) == 20 * 3
    assert "DE bit_erasure" in stdout


def test_simulate_label_scope(capsys, tmp_path):
    rc, _, _ = run(capsys, "simulate", *SIM, "--labels", "GF:0x7")
    assert rc == 0
    rc, _, err = run(capsys, "simulate", *REG23, "--m", "5", "--labels", "GF:0x25", "--eps", "0.5", "--analysis", "de")
    assert rc == 3
    rc, _, _ = run(capsys, "simulate", *REG23, "--m", "6", "--eps", "0.5", "--analysis", "none")
    assert rc == 3
    rc, _, _ = run(capsys, "simulate", *SIM[:-2], "--trials", "0")
    assert rc == 2


def test_simulate_plot(tmp_path, capsys):
    plot = tmp_path / "sim.png"
    rc, _, _ = run(capsys, "simulate", *SIM, "--plot", str(plot))
    assert rc == 0 and plot.read_bytes()[:4] == b"\x89PNG"


def test_csv_round_trip(capsys):
    rc, out, _ = run(capsys, "evolve", *REG23, "--m", "3", "--eps", "0.7", "--max-iters", "25")
    _, rows = table(out)
    assert len(rows) == 26
    for r in rows:
        for k, v in r.items():
            if k != "iter":
                assert f"{float(v):.6g}" == v
