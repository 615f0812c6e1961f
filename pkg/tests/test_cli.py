import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from riemann_minimax import SPD, NumericError
from riemann_minimax import cli
from riemann_minimax.cli import TRACE_COLUMNS, main


def run(*args):
    return main([str(a) for a in args])


def read_trace(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


@pytest.fixture
def euclid_csv(tmp_path):
    path = tmp_path / "pts.csv"
    assert run("generate", "--manifold", "euclidean", "--n", 100, "--dim", 2, "--seed", 3,
               "--out", path) == 0
    return path


class TestGenerate:
    @pytest.mark.parametrize("manifold,dim", [("euclidean", 3), ("klein", 2), ("spd", 5)])
    def test_byte_identical(self, tmp_path, manifold, dim):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            assert run("generate", "--manifold", manifold, "--n", 20, "--dim", dim, "--seed", 9,
                       "--out", out) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_klein_rows(self, tmp_path):
        out = tmp_path / "k.csv"
        run("generate", "--manifold", "klein", "--n", 50, "--dim", 2, "--seed", 0, "--out", out)
        pts = cli.read_point_csv(str(out))
        assert pts.shape == (50, 2) and np.all(np.linalg.norm(pts, axis=1) < 1)
        assert np.max(np.linalg.norm(pts, axis=1)) <= np.tanh(0.8) + 1e-15

    def test_spd_valid(self, tmp_path):
        out = tmp_path / "m.json"
        run("generate", "--manifold", "spd", "--n", 50, "--dim", 5, "--seed", 0, "--out", out)
        mats = cli.read_spd_json(str(out), 5)
        assert mats.shape == (50, 5, 5)
        for m in mats:
            SPD(5).validate(m)
            assert np.max(np.abs(np.log(np.linalg.eigvalsh(m)))) <= 1 + 1e-12

    def test_bad_flags(self, tmp_path):
        assert run("generate", "--manifold", "sphere", "--n", 5, "--dim", 2, "--out", tmp_path / "x") == 1
        assert run("generate", "--manifold", "klein", "--n", 0, "--dim", 2, "--out", tmp_path / "x") == 1


class TestSolve:
    def test_euclidean_trace_and_summary(self, tmp_path, euclid_csv):
        trace, summary = tmp_path / "t.csv", tmp_path / "s.json"
        assert run("solve", "--manifold", "euclidean", "--input", euclid_csv, "--iters", 100,
                   "--oracle", "welzl", "--trace", trace, "--summary", summary) == 0
        header, rows = read_trace(trace)
        assert tuple(header) == TRACE_COLUMNS
        assert len(rows) == 101
        assert [int(r[0]) for r in rows] == list(range(101))
        assert rows[0][2] == "0" and all(r[4] for r in rows)
        s = json.loads(summary.read_text())
        assert s["n_points"] == 100 and s["dimension"] == 2 and s["iterations"] == 100
        assert s["final_radius"] <= 1.1 * s["oracle_radius"]
        assert s["coreset_size"] >= 2 and s["config"]["schedule"] == "harmonic"
        assert float(rows[-1][1]) == s["final_radius"]

    def test_seventeen_digits(self, tmp_path, euclid_csv):
        trace = tmp_path / "t.csv"
        run("solve", "--manifold", "euclidean", "--input", euclid_csv, "--iters", 5, "--trace", trace)
        _, rows = read_trace(trace)
        assert rows[1][1] == "%.17g" % float(rows[1][1])
        assert rows[1][4] == ""

    def test_replay_is_identical(self, tmp_path):
        pts = tmp_path / "k.csv"
        run("generate", "--manifold", "klein", "--n", 30, "--dim", 2, "--seed", 5, "--out", pts)
        t1, s1, t2 = tmp_path / "t1.csv", tmp_path / "s1.json", tmp_path / "t2.csv"
        assert run("solve", "--manifold", "klein", "--input", pts, "--iters", 200, "--oracle",
                   "reference:2000", "--relative", "--trace", t1, "--summary", s1) == 0
        assert run("solve", "--replay", s1, "--trace", t2) == 0
        assert t1.read_bytes() == t2.read_bytes()

    def test_relative_column(self, tmp_path, euclid_csv):
        t_abs, t_rel, s = tmp_path / "a.csv", tmp_path / "r.csv", tmp_path / "s.json"
        run("solve", "--manifold", "euclidean", "--input", euclid_csv, "--iters", 10, "--oracle", "welzl",
            "--trace", t_abs, "--summary", s)
        run("solve", "--manifold", "euclidean", "--input", euclid_csv, "--iters", 10, "--oracle", "welzl",
            "--trace", t_rel, "--relative")
        r = json.loads(s.read_text())["oracle_radius"]
        a = [float(x[4]) for x in read_trace(t_abs)[1]]
        b = [float(x[4]) for x in read_trace(t_rel)[1]]
        np.testing.assert_allclose(np.array(a) / r, b, rtol=1e-15)

    def test_spd_run(self, tmp_path):
        mats = tmp_path / "m.json"
        run("generate", "--manifold", "spd", "--n", 50, "--dim", 5, "--seed", 1, "--out", mats)
        trace = tmp_path / "t.csv"
        assert run("solve", "--manifold", "spd", "--dim", 5, "--input", mats, "--iters", 200,
                   "--trace", trace) == 0
        assert len(read_trace(trace)[1]) == 201

    def test_arclength_schedules(self, tmp_path):
        pts = tmp_path / "k.csv"
        run("generate", "--manifold", "klein", "--n", 30, "--dim", 2, "--seed", 5, "--out", pts)
        s = tmp_path / "s.json"
        assert run("solve", "--manifold", "klein", "--input", pts, "--iters", 50, "--schedule", "clamped",
                   "--delta", 0.01, "--alpha", 1.0, "--beta", 1.0, "--R", 0.8, "--summary", s) == 0
        assert json.loads(s.read_text())["algorithm"] == "rie"
        # a step cap above the admissible size is refused unless forced
        assert run("solve", "--manifold", "klein", "--input", pts, "--iters", 50, "--schedule",
                   "scaled:1", "--delta", 0.5, "--alpha", 1.0, "--beta", 1.0, "--R", 0.8,
                   "--summary", s) == 1
        assert run("solve", "--manifold", "klein", "--input", pts, "--iters", 50, "--schedule",
                   "scaled:1", "--delta", 0.5, "--alpha", 1.0, "--beta", 1.0, "--R", 0.8,
                   "--force-delta", "--summary", s) == 0

    def test_thin_trace(self, tmp_path, euclid_csv):
        trace = tmp_path / "t.csv"
        run("solve", "--manifold", "euclidean", "--input", euclid_csv, "--iters", 1000, "--thin-trace",
            "--trace", trace)
        ks = [int(r[0]) for r in read_trace(trace)[1]]
        assert ks == [0] + [2 ** j for j in range(10)] + [1000]

    def test_stdout_summary(self, euclid_csv, capsys):
        assert run("solve", "--manifold", "euclidean", "--input", euclid_csv, "--iters", 3) == 0
        assert json.loads(capsys.readouterr().out)["iterations"] == 3


class TestErrors:
    def test_missing_file(self, tmp_path, capsys):
        assert run("solve", "--manifold", "euclidean", "--input", tmp_path / "nope.csv") == 1
        assert "error" in capsys.readouterr().err

    def test_malformed_row(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("# header\n0.1,0.2\n0.3\n")
        assert run("solve", "--manifold", "euclidean", "--input", bad) == 1
        assert "row 3" in capsys.readouterr().err

    def test_klein_outside_disk(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("0.1,0.2\n0.9,0.9\n")
        assert run("solve", "--manifold", "klein", "--input", bad) == 1

    def test_invalid_spd_reports_matrix(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps([np.eye(2).tolist(), [[1.0, 2.0], [2.0, 1.0]]]))
        assert run("solve", "--manifold", "spd", "--input", bad) == 1
        assert "matrix 1" in capsys.readouterr().err

    def test_spd_dim_mismatch(self, tmp_path):
        f = tmp_path / "m.json"
        f.write_text(json.dumps([np.eye(3).tolist()]))
        assert run("solve", "--manifold", "spd", "--dim", 2, "--input", f) == 1

    def test_bad_options(self, tmp_path, euclid_csv):
        assert run("solve", "--manifold", "euclidean", "--input", euclid_csv, "--schedule", "cubic") == 1
        assert run("solve", "--manifold", "euclidean", "--input", euclid_csv, "--schedule", "clamped") == 1
        assert run("solve", "--manifold", "euclidean", "--input", euclid_csv, "--oracle", "magic") == 1
        assert run("solve", "--manifold", "euclidean", "--input", euclid_csv, "--tie", "coin") == 1
        assert run("solve", "--manifold", "euclidean", "--input", euclid_csv, "--start", 1000) == 1
        assert run("solve", "--manifold", "euclidean") == 1
        assert run("frobnicate") == 1

    def test_welzl_only_flat(self, tmp_path):
        pts = tmp_path / "k.csv"
        run("generate", "--manifold", "klein", "--n", 10, "--dim", 2, "--seed", 0, "--out", pts)
        assert run("solve", "--manifold", "klein", "--input", pts, "--oracle", "welzl") == 1

    def test_numeric_failure_exit_code(self, euclid_csv, monkeypatch, capsys):
        def boom(*a, **k):
            raise NumericError("eigensolver failed")
        monkeypatch.setattr(cli, "run_geo_alg", boom)
        assert run("solve", "--manifold", "euclidean", "--input", euclid_csv) == 2
        assert "numeric" in capsys.readouterr().err

    def test_log_level(self, euclid_csv, monkeypatch, capsys):
        monkeypatch.setenv("RM_LOG", "loud")
        assert run("solve", "--manifold", "euclidean", "--input", euclid_csv) == 1
        monkeypatch.setenv("RM_LOG", "info")
        assert run("solve", "--manifold", "euclidean", "--input", euclid_csv, "--iters", 2) == 0
        assert "final radius" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    out = tmp_path / "e.csv"
    proc = subprocess.run([sys.executable, "-m", "riemann_minimax", "generate", "--manifold", "euclidean",
                           "--n", "4", "--dim", "2", "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0 and len(out.read_text().splitlines()) == 5
