import argparse
import csv
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from core.exceptions import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, DegenerateInput, StationaryGradient
from core.middleware import CommandMiddleware
from core.router import CommandRouter
from main import build_parser, cli

PI = np.pi
ROOT = Path(__file__).resolve().parents[1]

MINIMAL_ARGS = {
    "eval": ["--scene", "s", "--points", "p", "--out", "o"],
    "surface": ["--scene", "s", "--omega-c", "0", "--out", "o"],
    "sections": ["--scene", "s", "--omega", "0", "--out", "o"],
    "curvature": ["--scene", "s", "--surface", "m", "--out", "o"],
    "trace": ["--scene", "s", "--surface", "m", "--seed-spacing", "1", "--step", "1", "--out", "o"],
    "scan": ["--scene", "s"],
    "validate": [],
}


def _rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture
def surface_obj(tmp_path, circle_scene_file):
    out = tmp_path / "cap.obj"
    code = cli([
        "surface", "--scene", str(circle_scene_file), "--omega-c", str(-PI),
        "--grid-region=-0.5,-0.5,0.5,0.5,0.5", "--grid-nx", "7", "--grid-ny", "7",
        "--out", str(out), "--threads", "1",
    ])
    assert code == EXIT_OK
    return out


def test_parser_lists_every_command():
    parser = build_parser()
    for name, flags in MINIMAL_ARGS.items():
        assert parser.parse_args([name, *flags]).command == name


def test_missing_required_flag_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        cli(["eval", "--points", "p.csv", "--out", "o.csv"])
    assert exc.value.code == 2


def test_eval_writes_blank_rows_on_the_wire(tmp_path, circle_scene_file):
    points = tmp_path / "points.csv"
    points.write_text("x,y,z\n0,0,0.5\n1,0,0\n", encoding="utf-8")
    out = tmp_path / "values.csv"
    assert cli(["eval", "--scene", str(circle_scene_file), "--points", str(points), "--out", str(out)]) == EXIT_OK

    rows = _rows(out)
    assert list(rows[0]) == ["x", "y", "z", "potential", "omega_classic", "gx", "gy", "gz"]
    inside, wire = rows
    assert float(inside["omega_classic"]) == pytest.approx(float(inside["potential"]) + 2 * PI)
    assert float(inside["gz"]) < 0
    assert wire["potential"] == "" and wire["gx"] == ""


def test_eval_classic_convention_on_two_loops_fails(tmp_path, write_scene):
    scene = write_scene({"loops": [
        {"type": "circle", "radius": 1.0, "label": "a"},
        {"type": "circle", "center": [3, 0, 0], "radius": 1.0, "label": "b"},
    ]})
    points = tmp_path / "points.csv"
    points.write_text("0,0,1\n", encoding="utf-8")
    code = cli(["eval", "--scene", str(scene), "--points", str(points), "--out", str(tmp_path / "o.csv"),
                "--convention", "classic"])
    assert code == EXIT_USAGE


def test_current_override_changes_values_and_rejects_junk(tmp_path, circle_scene_file):
    points = tmp_path / "points.csv"
    points.write_text("0,0,0.5\n", encoding="utf-8")
    base, doubled = tmp_path / "a.csv", tmp_path / "b.csv"
    cli(["eval", "--scene", str(circle_scene_file), "--points", str(points), "--out", str(base)])
    cli(["eval", "--scene", str(circle_scene_file), "--points", str(points), "--out", str(doubled), "--current", "c=2"])
    assert float(_rows(doubled)[0]["potential"]) == pytest.approx(2 * float(_rows(base)[0]["potential"]))
    assert _rows(doubled)[0]["omega_classic"] == ""

    for bad in ("c", "c=two", "nope=1"):
        code = cli(["eval", "--scene", str(circle_scene_file), "--points", str(points), "--out", str(base),
                    "--current", bad])
        assert code == EXIT_USAGE


def test_unreadable_scene_is_a_usage_error(tmp_path):
    code = cli(["scan", "--scene", str(tmp_path / "absent.json")])
    assert code == EXIT_USAGE


def test_surface_writes_mesh_and_report(tmp_path, circle_scene_file):
    out, report = tmp_path / "cap.obj", tmp_path / "report.csv"
    code = cli([
        "surface", "--scene", str(circle_scene_file), "--omega-c", str(-PI),
        "--grid-region=-0.4,-0.4,0.4,0.4,0.5", "--grid-nx", "5", "--grid-ny", "5",
        "--relax", "1", "--out", str(out), "--report", str(report),
    ])
    assert code == EXIT_OK
    text = out.read_text(encoding="utf-8")
    assert text.startswith("# omega_c ")
    assert sum(line.startswith("v ") for line in text.splitlines()) == 25
    assert sum(line.startswith("f ") for line in text.splitlines()) == 32
    rows = _rows(report)
    assert len(rows) == 25 and {row["status"] for row in rows} == {"converged"}


def test_surface_with_nothing_converging_exits_one(tmp_path, circle_scene_file):
    code = cli([
        "surface", "--scene", str(circle_scene_file), "--omega-c", "10",
        "--grid-nx", "2", "--grid-ny", "2", "--max-iterations", "3", "--out", str(tmp_path / "none.obj"),
    ])
    assert code == EXIT_FAILURE


def test_surface_rejects_a_stretch_limit_at_or_below_one(tmp_path, circle_scene_file):
    out = tmp_path / "cap.obj"
    code = cli([
        "surface", "--scene", str(circle_scene_file), "--omega-c", str(-PI),
        "--grid-nx", "3", "--grid-ny", "3", "--stretch-limit", "1", "--out", str(out),
    ])
    assert code == EXIT_USAGE
    assert not out.exists()


def test_surface_stretch_limit_reaches_the_mesh(tmp_path, circle_scene_file):
    loose, tight = tmp_path / "loose.obj", tmp_path / "tight.obj"
    base = [
        "surface", "--scene", str(circle_scene_file), "--omega-c", str(-PI),
        "--grid-region=-0.9,-0.9,0.9,0.9,0.5", "--grid-nx", "9", "--grid-ny", "9", "--threads", "1",
    ]
    assert cli([*base, "--stretch-limit", "100", "--out", str(loose)]) == EXIT_OK
    assert cli([*base, "--stretch-limit", "1.01", "--out", str(tight)]) == EXIT_OK

    def faces(path):
        return sum(line.startswith("f ") for line in path.read_text(encoding="utf-8").splitlines())

    assert faces(tight) < faces(loose)


def test_sections_writes_named_groups(tmp_path, circle_scene_file):
    out = tmp_path / "sections.obj"
    code = cli(["sections", "--scene", str(circle_scene_file), "--omega", str(-PI), "--omega", "-2",
                "--resolution", "24", "--out", str(out)])
    assert code == EXIT_OK
    groups = [line for line in out.read_text(encoding="utf-8").splitlines() if line.startswith("o ")]
    assert groups == [f"o omega_{-PI:.10g}", "o omega_-2"]


@pytest.mark.parametrize("method", ["tensor", "stencil"])
def test_curvature_from_a_surface(tmp_path, circle_scene_file, surface_obj, method):
    out = tmp_path / f"{method}.csv"
    code = cli(["curvature", "--scene", str(circle_scene_file), "--surface", str(surface_obj),
                "--method", method, "--out", str(out)])
    assert code == EXIT_OK
    rows = _rows(out)
    assert list(rows[0])[:5] == ["x", "y", "z", "k1", "k2"]
    assert list(rows[0])[-1] == "umbilic_flag"
    assert all(float(row["k1"]) >= float(row["k2"]) for row in rows if row["k1"])


def test_trace_from_a_surface(tmp_path, circle_scene_file, surface_obj):
    out = tmp_path / "lines.obj"
    code = cli(["trace", "--scene", str(circle_scene_file), "--surface", str(surface_obj),
                "--family", "2", "--seed-spacing", "0.3", "--step", "0.05", "--max-steps", "30", "--out", str(out)])
    assert code == EXIT_OK
    assert out.read_text(encoding="utf-8").startswith("o family_2")


def test_scan_prints_a_summary(tmp_path, circle_scene_file, capsys):
    out = tmp_path / "scan.csv"
    code = cli(["scan", "--scene", str(circle_scene_file), "--grid-nx", "4", "--grid-ny", "4", "--out", str(out)])
    assert code == EXIT_OK
    printed = capsys.readouterr().out
    assert "samples      16" in printed
    assert "min" in printed and "max" in printed
    assert len(_rows(out)) == 16


def test_validate_runs_a_selected_check(capsys):
    assert cli(["validate", "--only", "in-plane", "--threads", "2"]) == EXIT_OK
    printed = capsys.readouterr().out
    assert "in-plane values" in printed and "PASS" in printed
    assert "determinism" not in printed


def test_middleware_maps_errors_to_exit_codes():
    middleware = CommandMiddleware()
    args = build_parser().parse_args(["validate"])

    def degenerate(_):
        raise DegenerateInput("bad loop")

    def flat(_):
        raise StationaryGradient("flat")

    assert middleware.dispatch(args, degenerate) == EXIT_USAGE
    assert middleware.dispatch(args, flat) == EXIT_FAILURE
    assert middleware.dispatch(args, lambda _: None) == EXIT_OK


def test_router_without_handler_cannot_mount():
    router = CommandRouter("orphan", help="no handler")
    with pytest.raises(RuntimeError):
        router.mount(argparse.ArgumentParser().add_subparsers())


def test_commands_load_the_oracles_only_when_validating():
    code = "import sys, main; print(any(name.startswith('oracles') for name in sys.modules))"
    out = subprocess.run([sys.executable, "-c", code], cwd=ROOT, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
