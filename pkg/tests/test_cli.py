import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from fracplane.cli import EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def frac(d):
    return F(d["num"], d["den"])


def test_build_json(capsys):
    code, out, _ = run(capsys, "build", "moser", "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert len(data["vertices"]) == 7 and len(data["edges"]) == 11
    assert data["embedding"]["ok"]


def test_build_dimacs_and_svg(capsys):
    code, out, _ = run(capsys, "build", "core:2", "--format", "dimacs")
    assert code == EXIT_OK
    assert out.splitlines()[1].startswith("p edge 19 ")
    code, out, _ = run(capsys, "build", "gpd:2", "--format", "svg")
    assert code == EXIT_OK and out.startswith("<svg")


@pytest.mark.parametrize("graph,orbits,value", [
    ("moser", "trivial", F(7, 2)),
    ("golomb", "trivial", F(10, 3)),
    ("fisher-ullman", "geometric", F(311, 86)),
    ("fisher-ullman", "shared-spindle", F(32, 9)),
])
def test_bound(capsys, graph, orbits, value):
    code, out, _ = run(capsys, "bound", graph, "--orbits", orbits)
    assert code == EXIT_OK
    assert frac(json.loads(out)["bound"]) == value


def test_verify_simple(capsys):
    code, out, _ = run(capsys, "verify", "gd:4", "--simple", "--samples", "10", "--seed", "3", "--jobs", "1")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["ok"] and data["runs"] == 10


def test_verify_gpd_is_deterministic(capsys):
    args = ("verify", "gpd:4", "--samples", "4", "--seed", "5", "--jobs", "1")
    code, a, _ = run(capsys, *args)
    assert code == EXIT_OK
    _, b, _ = run(capsys, *args)
    assert a == b
    assert json.loads(a)["failures"] == 0


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "gpd:4", "--samples", "2", "--seed", "1",
                       "--jobs", "1", "--format", "csv")
    assert code == EXIT_OK
    header, row = out.strip().splitlines()
    assert header.startswith("d,runs,failures,finite_bound")
    assert row.startswith("4,2,0,")


def test_verify_core_samples(capsys):
    code, out, _ = run(capsys, "verify", "core:5", "--samples", "5", "--seed", "1")
    assert code == EXIT_OK and json.loads(out)["ok"]


@pytest.mark.parametrize("argv", [
    ("verify", "gpd:4", "--samples", "3"),
    ("verify", "gpd:4"),
    ("verify", "gpd:4", "--exhaustive", "--samples", "3", "--seed", "1"),
    ("verify", "gpd:4", "--exhaustive"),
    ("verify", "core:4", "--exhaustive"),
    ("build", "nonsense"),
    ("build", "gd:x"),
    ("bound", "gpd:6"),
    ("tile", "gd:3"),
    ("verify", "moser", "--samples", "1", "--seed", "1"),
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert err


def test_argparse_errors_exit_with_usage_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bound", "moser", "--orbits", "bogus"])
    assert exc.value.code == EXIT_USAGE


def test_output_dir_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("FRACPLANE_OUT_DIR", str(tmp_path))
    code, out, _ = run(capsys, "build", "moser")
    assert code == EXIT_OK and out == ""
    assert json.loads((tmp_path / "moser.json").read_text())["name"]
    code, _, _ = run(capsys, "bound", "golomb", "-o", "sub/g.json")
    assert frac(json.loads((tmp_path / "sub" / "g.json").read_text())["bound"]) == F(10, 3)


def test_tile(capsys):
    code, out, _ = run(capsys, "tile", "gpd:6", "--seed", "2")
    assert code == EXIT_OK
    data = json.loads(out)
    assert len(data["final_excess"]) == len(data["tiles"])
    assert data["violations"] == []
    code, out, _ = run(capsys, "tile", "core:4", "--seed", "2", "--format", "svg")
    assert code == EXIT_OK and "<polygon" in out


def test_blocks_check(capsys):
    code, out, _ = run(capsys, "blocks", "--check")
    assert code == EXIT_OK
    data = json.loads(out)
    assert len(data["five_block"]) == 3 and len(data["six_block"]) == 4
    assert all(c["counterexamples"] == [] for c in data["claims"].values())


def test_export_lp(capsys):
    code, out, _ = run(capsys, "export-lp", "moser")
    assert code == EXIT_OK
    assert "w0" in out


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "fracplane.cli", "bound", "moser"],
                         capture_output=True, text=True, check=True)
    assert frac(json.loads(res.stdout)["bound"]) == F(7, 2)
