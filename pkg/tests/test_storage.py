import numpy as np
import pytest

from core.exceptions import ParseError
from schemas.schemas import SurfaceMesh
from storage.csv_store import format_cell, read_points, render_rows, write_rows
from storage.obj_store import read_mesh, render_mesh, render_polylines, write_mesh


def test_format_cell():
    assert format_cell(None) == ""
    assert format_cell(float("nan")) == ""
    assert format_cell(True) == "1"
    assert format_cell(np.int64(7)) == "7"
    assert format_cell("converged") == "converged"
    assert float(format_cell(0.1 + 0.2)) == 0.1 + 0.2
    assert format_cell(np.pi) == "3.1415926535897931"


def test_render_rows_leaves_blank_cells():
    text = render_rows(["x", "potential"], [[1.0, None], [2.0, -1.5]])
    assert text == "x,potential\n1,\n2,-1.5\n"


def test_read_points_skips_header(tmp_path):
    path = tmp_path / "points.csv"
    path.write_text("x,y,z\n0,0,0.5\n\n1,2,3\n", encoding="utf-8")
    np.testing.assert_array_equal(read_points(path), [[0.0, 0.0, 0.5], [1.0, 2.0, 3.0]])


def test_read_points_without_header(tmp_path):
    path = tmp_path / "points.csv"
    write_rows(path, ["1", "2", "3"], [[4, 5, 6]])
    assert read_points(path).shape == (2, 3)


@pytest.mark.parametrize("body", ["x,y,z\n1,2,oops\n", "x,y,z\n1,2\n"])
def test_read_points_rejects_bad_rows(tmp_path, body):
    path = tmp_path / "points.csv"
    path.write_text(body, encoding="utf-8")
    with pytest.raises(ParseError):
        read_points(path)


def test_read_points_missing_file(tmp_path):
    with pytest.raises(ParseError):
        read_points(tmp_path / "absent.csv")


def test_mesh_text_is_one_based_and_keeps_omega(tmp_path):
    mesh = SurfaceMesh(
        vertices=np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.25]]),
        faces=np.array([[0, 1, 2]]),
        seed_indices=np.arange(3),
        omega_c=-np.pi,
    )
    text = render_mesh(mesh)
    assert text.splitlines()[0] == "# omega_c -3.1415926535897931"
    assert "f 1 2 3" in text

    path = tmp_path / "mesh.obj"
    write_mesh(path, mesh)
    loaded = read_mesh(path)
    assert loaded.omega_c == -np.pi
    np.testing.assert_array_equal(loaded.vertices, mesh.vertices)
    np.testing.assert_array_equal(loaded.faces, mesh.faces)


def test_read_mesh_accepts_slashed_faces_and_rejects_quads(tmp_path):
    path = tmp_path / "mesh.obj"
    path.write_text("v 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 1\nf 1//1 2//1 3//1\n", encoding="utf-8")
    assert read_mesh(path).faces.tolist() == [[0, 1, 2]]
    assert read_mesh(path).omega_c is None

    path.write_text("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 1 1 0\nf 1 2 4 3\n", encoding="utf-8")
    with pytest.raises(ParseError):
        read_mesh(path)

    path.write_text("v 0 0 0\nf 1 2 3\n", encoding="utf-8")
    with pytest.raises(ParseError):
        read_mesh(path)


def test_polyline_groups_number_vertices_globally():
    line = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    text = render_polylines([("omega_-1", [line, line + 1.0]), ("omega_-2", [])])
    lines = text.splitlines()
    assert lines[0] == "o omega_-1"
    assert "l 1 2" in lines and "l 3 4" in lines
    assert lines[-1] == "o omega_-2"
