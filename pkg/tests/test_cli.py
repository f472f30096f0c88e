from __future__ import annotations

import pytest

from gspp.apps import generate_bacap
from gspp.cli import run
from gspp.formats import loads_solution, read_instance, write_instance
from gspp.report import reports_from_csv


@pytest.fixture
def files(tmp_path, e1, e2):
    write_instance(e1, tmp_path / "e1.gspp")
    write_instance(e2, tmp_path / "e2.gspp")
    return tmp_path


def rows(capsys):
    return reports_from_csv(capsys.readouterr().out)


def test_bounds_row(files, capsys):
    assert run(["bounds", str(files / "e1.gspp")]) == 0
    (r,) = rows(capsys)
    assert (r.trivial, r.lb1, r.lb2) == (9, 12, 12)
    assert r.t_total is None and r.bounds_ordered()


def test_bounds_plot(files, capsys):
    png = files / "b.png"
    assert run(["bounds", str(files / "e1.gspp"), str(files / "e2.gspp"), "--plot", str(png)]) == 0
    assert png.read_bytes()[:4] == b"\x89PNG"
    assert len(rows(capsys)) == 2


def test_validate(files, capsys, tmp_path):
    assert run(["validate", str(files / "e1.gspp")]) == 0
    bad = tmp_path / "bad.gspp"
    bad.write_text((files / "e1.gspp").read_text().replace("a 3 1 9", "a 3 5 9"))
    assert run(["validate", str(bad)]) == 2


def test_matheuristic_writes_solution(files, capsys):
    sol = files / "s.sol"
    code = run(["matheuristic", str(files / "e2.gspp"), "--sigma", "1", "--mu", "0", "-o", str(sol), "--optimum", "21"])
    assert code == 0
    (r,) = rows(capsys)
    assert (r.z_bar, r.gap_pct, r.gap_ref, r.kept_pct) == (21, 0.0, "opt", 100.0)
    rec = loads_solution(sol.read_text())
    assert rec.status == "optimal" and rec.cost == 21 and rec.chosen == {0: 0, 1: 3, 2: 5}


def test_solve_and_infeasible_exit(files, capsys, e2):
    assert run(["solve", str(files / "e2.gspp")]) == 0
    assert rows(capsys)[0].z == 21
    write_instance(e2.subset([0, 2, 4]), files / "clash.gspp")
    assert run(["solve", str(files / "clash.gspp")]) == 1
    assert run(["bounds", str(files / "clash.gspp")]) == 1


def test_reduce_writes_instance(files, capsys):
    out = files / "r.gspp"
    assert run(["reduce", str(files / "e2.gspp"), "--ub", "21", "-o", str(out)]) == 0
    red = read_instance(out)
    assert [a.source for a in red.assignments] == [0, 3, 5]
    assert run(["reduce", str(files / "e2.gspp"), "--ub", "20"]) == 1


def test_export_lp(files, capsys):
    out = files / "m.lp"
    assert run(["export-lp", str(files / "e2.gspp"), "-o", str(out)]) == 0
    assert out.read_text().count(" res_") == 4


def test_usage_errors(files, capsys):
    assert run(["frobnicate"]) == 2
    assert run(["bounds", str(files / "missing.gspp")]) == 2
    assert run(["matheuristic", str(files / "e2.gspp"), "--sigma", "2"]) == 2
    assert run(["bounds"]) == 2


def test_env_defaults_and_flag_precedence(files, capsys, monkeypatch):
    monkeypatch.setenv("GSPP_SIGMA", "1.0")
    monkeypatch.setenv("GSPP_MU", "0")
    monkeypatch.setenv("GSPP_SEED", "42")
    assert run(["matheuristic", str(files / "e2.gspp")]) == 0
    (r,) = rows(capsys)
    assert (r.sigma, r.mu, r.seed) == (1.0, 0, 42)
    assert run(["matheuristic", str(files / "e2.gspp"), "--sigma", "0", "--mu", "1"]) == 0
    (r,) = rows(capsys)
    assert (r.sigma, r.mu) == (0.0, 1)
    monkeypatch.setenv("GSPP_TIMINGS", "1")
    assert run(["bounds", str(files / "e1.gspp")]) == 0
    assert rows(capsys)[0].t_total is not None


def test_generators_are_reproducible(tmp_path, capsys):
    for name in ("a", "b"):
        assert run(["gen-bacap", "--vessels", "10", "--seed", "3", "-o", str(tmp_path / f"{name}.gspp"),
                    "--params-out", str(tmp_path / f"{name}.txt")]) == 0
        assert run(["gen-sched", "--jobs", "4", "--seed", "3", "-o", str(tmp_path / f"{name}s.gspp")]) == 0
    assert (tmp_path / "a.gspp").read_bytes() == (tmp_path / "b.gspp").read_bytes()
    assert (tmp_path / "as.gspp").read_bytes() == (tmp_path / "bs.gspp").read_bytes()
    # the parameter file regenerates the same instance
    assert run(["gen-bacap", str(tmp_path / "a.txt"), "--name", "bacap-v10-s3", "-o", str(tmp_path / "c.gspp")]) == 0
    assert (tmp_path / "c.gspp").read_bytes() == (tmp_path / "a.gspp").read_bytes()


def test_crew_command(tmp_path, capsys):
    p = tmp_path / "crew.txt"
    p.write_text("tasks = 2\ndrivers = 2\ndriver0.duties = 0;0,1\ndriver0.costs = 3,7\ndriver1.duties = 1\ndriver1.costs = 5\n")
    assert run(["crew-lb2", str(p)]) == 0
    assert capsys.readouterr().out.strip() == "7"
    p.write_text("tasks = 2\ndrivers = 1\ndriver0.duties = 0\ndriver0.costs = 3\n")
    assert run(["crew-lb2", str(p)]) == 1


def test_sweep_grid_and_determinism(tmp_path, capsys):
    d = tmp_path / "inst"
    d.mkdir()
    write_instance(generate_bacap(10, 1), d / "x.gspp")
    write_instance(generate_bacap(10, 2), d / "y.gspp")
    args = ["sweep", str(d), "--sigma", "0.0,0.1", "--mu", "5,10"]
    assert run(args + ["--csv", str(tmp_path / "a.csv"), "--plot", str(tmp_path / "s.png")]) == 0
    assert run(args + ["--csv", str(tmp_path / "b.csv")]) == 0
    text = (tmp_path / "a.csv").read_text()
    assert text == (tmp_path / "b.csv").read_text()
    got = reports_from_csv(text)
    assert len(got) == 8
    assert [(r.instance, r.sigma, r.mu) for r in got] == sorted((r.instance, r.sigma, r.mu) for r in got)
    assert all(r.z is not None for r in got)
    assert all(r.gap_ref == "opt" for r in got if r.z_bar is not None)
    assert all(r.status == "reduced-infeasible" for r in got if r.z_bar is None)
    assert (tmp_path / "s.png").stat().st_size > 0
