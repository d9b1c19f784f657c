import numpy as np
import pytest

from core.exceptions import DegenerateInput, SchemaError
from core.parallel import chunk_length, chunk_slices, ordered_map, resolve_threads
from core.summation import compensated_sum
from core.vector import as_points, as_vector, best_fit_plane, orthonormal_basis, rotation_matrix, unit
from dependencies.scene import parse_current_overrides, parse_triple


def test_resolve_threads_prefers_the_request():
    assert resolve_threads(3) == 3
    assert resolve_threads(None) >= 1


def test_chunking_depends_on_the_scene_only():
    assert chunk_length(256, 4) == 256
    assert chunk_length(10 ** 9) == 1
    assert chunk_slices(5, 2) == [slice(0, 2), slice(2, 4), slice(4, 5)]
    assert chunk_slices(0, 2) == []


def test_ordered_map_keeps_input_order():
    items = list(range(50))
    assert ordered_map(lambda x: x * x, items, threads=4) == [x * x for x in items]


def test_compensated_sum_recovers_cancelled_terms():
    assert compensated_sum(np.array([1e16, 1.0, -1e16])) == 1.0
    rows = np.array([[1e16, 1.0, -1e16], [0.5, 0.25, 0.25]])
    np.testing.assert_array_equal(compensated_sum(rows, axis=1), [1.0, 1.0])


def test_orthonormal_basis_is_right_handed():
    for normal in ((0, 0, 1), (1, 2, 3), (-1, 0, 0)):
        e1, e2 = orthonormal_basis(normal)
        n = unit(normal)
        np.testing.assert_allclose(np.cross(e1, e2), n, atol=1e-15)
        assert abs(e1 @ n) < 1e-15


def test_rotation_matrix_quarter_turn():
    np.testing.assert_allclose(rotation_matrix((0, 0, 1), 90.0) @ [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], atol=1e-15)


def test_best_fit_plane_of_a_tilted_square():
    pts = np.array([[0.0, 0, 0], [1, 0, 1], [1, 1, 1], [0, 1, 0]])
    centroid, normal = best_fit_plane(pts)
    np.testing.assert_allclose(centroid, [0.5, 0.5, 0.5])
    assert abs(abs(normal @ np.array([-1.0, 0.0, 1.0]) / np.sqrt(2.0)) - 1.0) < 1e-12


def test_vector_validation():
    with pytest.raises(DegenerateInput):
        as_vector((1, 2))
    with pytest.raises(DegenerateInput):
        as_vector((1, np.nan, 0))
    with pytest.raises(DegenerateInput):
        unit((0, 0, 0))
    assert as_points((1, 2, 3)).shape == (1, 3)
    with pytest.raises(DegenerateInput):
        as_points(np.zeros((2, 2)))


def test_parse_current_overrides():
    assert parse_current_overrides(["A=1.5", "B=-2"]) == {"A": 1.5, "B": -2.0}
    assert parse_current_overrides(None) == {}
    for bad in (["A"], ["=1"], ["A=x"]):
        with pytest.raises(SchemaError):
            parse_current_overrides(bad)


def test_parse_triple():
    assert parse_triple("1, 0,-2", "--plane-normal") == (1.0, 0.0, -2.0)
    with pytest.raises(SchemaError):
        parse_triple("1,0", "--plane-normal")
    with pytest.raises(SchemaError):
        parse_triple("a,b,c", "--plane-normal")
