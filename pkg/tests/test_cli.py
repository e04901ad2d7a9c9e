import json

import pytest

from reachbound import io
from reachbound.cli import main


def run(*args):
    return main([str(a) for a in args])


def test_gen_and_profile(tmp_path, capsys):
    cloud, truth, csv, svg = (tmp_path / f for f in ("c.xyz", "t.json", "p.csv", "p.svg"))
    assert run("gen", "two_rays", "--n", 200, "--seed", 1, "--output", cloud, "--truth", truth) == 0
    assert json.loads(truth.read_text())["reach"] == 0.0
    assert run("profile", cloud, "--output", csv, "--fit", 0.05, 0.3, "--svg", svg) == 0
    fit = json.loads(capsys.readouterr().out)
    assert abs(fit["slope"] - 1.5) < 0.1
    assert io.load_profile(csv)(0.1) > 0 and svg.exists()


def test_profile_with_mesh(tmp_path):
    from reachbound.synth import ShapeSpec, generate, graph_mesh
    pts, _ = generate(ShapeSpec("paraboloid", 200, 0, {"c": 1.0}))
    cloud, off, a, b = (tmp_path / f for f in ("c.xyz", "m.off", "a.csv", "b.csv"))
    io.save_cloud(cloud, pts)
    io.save_off(off, graph_mesh(pts))
    assert run("profile", cloud, "--mesh", off, "--output", a) == 0
    assert run("profile", cloud, "--mesh", off, "--no-prune", "--output", b) == 0
    assert a.read_text() == b.read_text()


def test_reach_bound(tmp_path):
    cloud, out = tmp_path / "c.xyz", tmp_path / "r.json"
    cloud.write_text("-1 0\n1 0\n")
    assert run("reach-bound", cloud, "--epsilon", 0.5, "--output", out, "--svg", tmp_path / "r.svg") == 0
    d = json.loads(out.read_text())
    assert d["bound"] == 1.25 and (d["witness_i"], d["witness_j"]) == (0, 1)
    with pytest.warns(UserWarning):
        assert run("reach-bound", cloud, "--epsilon", 2, "--output", out) == 0
    assert json.loads(out.read_text())["bound"] == "inf"


def test_rconv_commands(tmp_path, capsys):
    grid, out, flags = tmp_path / "g.txt", tmp_path / "r.json", tmp_path / "f.xyz"
    assert run("gen", "set_U", "--n", 2, "--seed", 0, "--output", grid, "--svg", tmp_path / "g.svg") == 0
    assert run("rconv-bound", grid, "--r-max", 3, "--output", out, "--svg", tmp_path / "r.svg") == 0
    d = json.loads(out.read_text())
    assert d["bound"] >= 1 and d["window_limited"] is False
    assert run("rconv-flag", grid, "--r", d["bound"] + 0.01, "--output", flags) == 0
    assert "flagged" in capsys.readouterr().out
    assert len(io.load_cloud(flags)) >= 1
    assert run("rconv-flag", grid, "--r", 0.3, "--output", flags) == 0
    assert flags.read_text() == ""


def test_convergence(tmp_path, capsys):
    out, svg = tmp_path / "t.csv", tmp_path / "t.svg"
    assert run("convergence", "--set", "set_W", "--n-list", 2, 3, 4, "--reps", 2, "--workers", 1,
               "--no-runtime", "--output", out, "--svg", svg) == 0
    report = json.loads(capsys.readouterr().out)
    assert set(report) == {"rconv_bound", "reach_bound"}
    assert out.read_text().splitlines()[0] == "set_kind,n,replication,seed,rconv_bound,reach_bound,epsilon_rconv,epsilon_reach"


def test_precondition_failures_exit_2(tmp_path, capsys):
    cloud = tmp_path / "c.xyz"
    cloud.write_text("0 0\n1 0\n")
    assert run("reach-bound", cloud, "--epsilon", -1, "--output", tmp_path / "r.json") == 2
    assert "error" in capsys.readouterr().err
    assert run("reach-bound", tmp_path / "missing.xyz", "--epsilon", 1, "--output", tmp_path / "r.json") == 2
    grid = tmp_path / "g.txt"
    grid.write_text("0 0 1\n1 0 0\n")
    assert run("rconv-bound", grid, "--r-max", 3, "--output", tmp_path / "r.json") == 2
    assert run("gen", "two_rays", "--n", 5, "--param", "theta", "--output", cloud) == 2
    with pytest.raises(SystemExit):
        run("gen", "nonsense", "--output", cloud)
