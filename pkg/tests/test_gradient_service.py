import numpy as np
import pytest

from core.exceptions import ApexOnBoundaryLine
from core.vector import rotation_matrix
from oracles.finite_difference import fd_gradient
from oracles.gradient_oracle import biot_savart_endpoint_form, direct_difference_gradient, per_vertex_gradient
from services.boundary_service import transform_set
from services.gradient_service import gradient, segment_gradient
from services.solid_angle_service import potential
from services.validation_service import wire_distance


def test_segment_gradient_matches_endpoint_form(rng):
    for _ in range(500):
        p_i, p_next, r = rng.normal(size=(3, 3))
        d = p_next - p_i
        if np.linalg.norm(np.cross(r - p_i, d)) < 0.05 * np.dot(d, d):
            continue
        expected = biot_savart_endpoint_form(p_i, p_next, r)
        got = segment_gradient(p_i, p_next, r)
        assert np.linalg.norm(got - expected) <= 1e-10 * np.linalg.norm(expected)


def test_segment_gradient_rejects_apex_on_segment():
    with pytest.raises(ApexOnBoundaryLine):
        segment_gradient((0, 0, 0), (1, 0, 0), (0.5, 0.0, 0.0))


def test_segment_gradient_allows_apex_beyond_the_segment_end():
    value = segment_gradient((0, 0, 0), (1, 0, 0), (3.0, 0.0, 0.0))
    np.testing.assert_array_equal(value, np.zeros(3))


def test_gradient_matches_central_differences(circle_set):
    for r in ([0.2, 0.1, 0.5], [1.3, -0.4, 0.2], [0.0, 0.0, -0.8]):
        expected = fd_gradient(lambda x: potential(circle_set, x), r, 1e-5)
        got = gradient(circle_set, r)
        assert np.linalg.norm(got - expected) <= 1e-6 * np.linalg.norm(expected)


def test_gradient_on_axis_points_down_the_axis(circle_set):
    g = gradient(circle_set, (0.0, 0.0, 0.5))
    assert abs(g[0]) <= 1e-12 * abs(g[2])
    assert abs(g[1]) <= 1e-12 * abs(g[2])
    assert g[2] < 0


def test_gradient_matches_per_vertex_regrouping(circle_set, rng):
    loop = circle_set.loops[0]
    for r in rng.normal(size=(10, 3)) * 0.4 + np.array([0.0, 0.0, 1.0]):
        expected = per_vertex_gradient(loop.vertices, r, loop.current)
        assert np.linalg.norm(gradient(circle_set, r) - expected) <= 1e-10 * np.linalg.norm(expected)


def test_batch_gradient_shape(square_set):
    points = np.array([[0.0, 0.0, 1.0], [0.5, 0.5, -1.0]])
    assert gradient(square_set, points).shape == (2, 3)
    assert gradient(square_set, points[0]).shape == (3,)


def test_gradient_rotates_with_the_scene(circle_set, rng):
    rotation = rotation_matrix((0.3, -1.0, 0.7), 52.0)
    shift = np.array([0.4, 1.1, -0.6])
    moved = transform_set(circle_set, rotation, shift)
    points = rng.normal(size=(20, 3)) * 0.5 + np.array([0.0, 0.0, 0.8])
    points = points[wire_distance(circle_set, points) > 0.05]
    expected = gradient(circle_set, points) @ rotation.T
    got = gradient(moved, points @ rotation.T + shift)
    scale = np.linalg.norm(expected, axis=1)
    assert np.all(np.linalg.norm(got - expected, axis=1) <= 1e-12 * scale)


@pytest.mark.parametrize("offset", [1e-3, 1e-5, 1e-6])
def test_segment_gradient_stays_accurate_next_to_the_segment_line(offset):
    p_i, p_next = np.array([0.2, -0.1, 0.3]), np.array([1.4, 0.5, 0.9])
    d = p_next - p_i
    side = np.cross(d, (0.0, 0.0, 1.0))
    side *= np.linalg.norm(d) / np.linalg.norm(side)
    for r in (p_next + 0.7 * d + offset * side, p_i - 1.5 * d + offset * side):
        reference = direct_difference_gradient(p_i, p_next, r)
        got = segment_gradient(p_i, p_next, r)
        assert np.all(np.isfinite(got))
        assert np.linalg.norm(got - reference) <= 1e-6 * np.linalg.norm(reference)


def _circulation(boundary, center, e1, e2, radius, samples=1024):
    t = 2.0 * np.pi * np.arange(samples) / samples
    points = center + radius * (np.outer(np.cos(t), e1) + np.outer(np.sin(t), e2))
    tangents = radius * (np.outer(-np.sin(t), e1) + np.outer(np.cos(t), e2))
    return float(np.sum(gradient(boundary, points) * tangents) * 2.0 * np.pi / samples)


def test_potential_jumps_four_pi_around_the_wire(circle_set):
    wire = circle_set.vertices[0]
    ex, ez = np.array([1.0, 0.0, 0.0]), np.array([0.0, 0.0, 1.0])
    around = _circulation(circle_set, wire, ex, ez, 0.01)
    assert abs(around) == pytest.approx(4.0 * np.pi, rel=1e-6)
    assert _circulation(circle_set, wire + 0.5 * ex, ex, ez, 0.1) == pytest.approx(0.0, abs=1e-7)
