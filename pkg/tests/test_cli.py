import subprocess
import sys

import pytest

from kleindraw.cli import main
from kleindraw.formats import parse_db, parse_kdr, parse_krs, read_text, write_krs
from kleindraw.graph import make_named
from kleindraw.omega import default_db_path
from kleindraw.rotation import RotationSystem, euler_characteristic


def run(capsys, *argv):
    rc = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return rc, out, err


@pytest.fixture
def grid_krs(tmp_path, capsys):
    path = tmp_path / "grid.krs"
    assert run(capsys, "grid", 2, 8, "--out", path)[0] == 0
    return path


def test_grid_draw_check_render(tmp_path, capsys, grid_krs):
    kdr = tmp_path / "grid.kdr"
    rc, out, _ = run(capsys, "draw", grid_krs, "--out", kdr)
    assert rc == 0 and out.startswith("base ")
    assert "sweeps" in out and "attempts 1" in out
    rc, out, _ = run(capsys, "check", kdr, "--against", grid_krs)
    assert rc == 0
    assert out.splitlines() == ["crossings 0", "rotation-system match"]
    svg = tmp_path / "grid.svg"
    assert run(capsys, "render", kdr, "--svg", svg, "--copies", 2)[0] == 0
    assert read_text(svg).startswith("<svg")
    assert parse_kdr(read_text(kdr)).n == 16


def test_format_and_euler(tmp_path, capsys, grid_krs):
    rc, out, _ = run(capsys, "euler", grid_krs)
    assert (rc, out) == (0, "chi 0\n")
    out_path = tmp_path / "f.krs"
    assert run(capsys, "format", grid_krs, "--out", out_path)[0] == 0
    _, rs = parse_krs(read_text(out_path))
    assert euler_characteristic(rs) == 0


def test_enumerate_k33(tmp_path, capsys):
    out_path = tmp_path / "k33.kdb"
    rc, out, _ = run(capsys, "enumerate", "--graph", "k33", "--out", out_path)
    assert rc == 0
    assert out == "K33 embeddings 2 torus 2 scanned 32768\n"
    recs = parse_db(read_text(out_path))
    assert len(recs) == 2 and all(r.drawing is not None for r in recs)


@pytest.mark.slow
def test_enumerate_default_reproduces_database(tmp_path, capsys):
    out_path = tmp_path / "omega.kdb"
    rc, out, _ = run(capsys, "enumerate", "--out", out_path)
    assert rc == 0
    assert out.splitlines()[0] == "K5 embeddings 11 torus 6 scanned 7962624"
    assert read_text(out_path) == read_text(default_db_path())


def test_enumerate_krs_graph(tmp_path, capsys):
    g = make_named("K33")
    path = tmp_path / "mine.krs"
    path.write_text(write_krs(RotationSystem(g, [list(a) for a in g.adj])))
    rc, out, _ = run(capsys, "enumerate", "--graph", path, "--out", tmp_path / "x.kdb", "--masks", "cotree")
    assert rc == 0 and out.startswith("mine embeddings 2 ")
    assert all(r.drawing is None for r in parse_db(read_text(tmp_path / "x.kdb")))


def test_draw_rejects_torus_system(tmp_path, capsys):
    g = make_named("K5")
    path = tmp_path / "flat.krs"
    path.write_text(write_krs(RotationSystem(g, [list(a) for a in g.adj])))
    rc, _, err = run(capsys, "draw", path, "--out", tmp_path / "x.kdr")
    assert rc == 1
    assert err.startswith("error not-klein-system:")


def test_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.krs"
    path.write_text("vertices 2\nrs 0: 1\nrs 1: 0-\n")
    rc, _, err = run(capsys, "euler", path)
    assert rc == 2
    assert err.startswith("error sign-mismatch: line 2, column 7")


def test_missing_file_and_bad_usage(tmp_path, capsys):
    assert run(capsys, "euler", tmp_path / "nope.krs")[0] == 2
    assert run(capsys, "render", tmp_path / "nope.kdr", "--svg", tmp_path / "x.svg", "--copies", 0)[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["grid"])
    assert info.value.code == 2


def test_check_reports_crossings(tmp_path, capsys):
    path = tmp_path / "x.kdr"
    path.write_text("vertex 0 0.1 0.1\nvertex 1 0.9 0.9\nvertex 2 0.1 0.9\nvertex 3 0.9 0.1\nedge 0 1 0 0\nedge 2 3 0 0\n")
    rc, out, err = run(capsys, "check", path)
    assert rc == 1 and out == "crossings 1\n" and err.startswith("error crossings")


def test_check_mismatch(tmp_path, capsys, omega):
    from kleindraw.formats import write_kdr

    kdr, krs = tmp_path / "a.kdr", tmp_path / "b.krs"
    kdr.write_text(write_kdr(omega[0].drawing))
    krs.write_text(write_krs(omega[1].system))
    rc, out, _ = run(capsys, "check", kdr, "--against", krs)
    assert rc == 1 and "rotation-system mismatch" in out


def test_module_entry_point(grid_krs):
    res = subprocess.run([sys.executable, "-m", "kleindraw.cli", "euler", str(grid_krs)], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "chi 0\n"


def test_euler_on_base_system(tmp_path, capsys, omega):
    path = tmp_path / "k5.krs"
    path.write_text(write_krs(omega[0].system, "K5"))
    assert run(capsys, "euler", path)[1] == "chi 0\n"
