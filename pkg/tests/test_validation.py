import numpy as np
import pytest

from core.exceptions import EXIT_OK
from services import solid_angle_service
from services.boundary_service import build_boundary_set, make_rectangle
from services.validation_service import (
    CHECKS,
    SEPARATION_TOTALS,
    ValidationContext,
    _separation_sweep,
    check_boundary_slope,
    check_in_plane_values,
    check_linearity,
    check_on_axis_circle,
    check_principal_alignment,
    check_triangle_identity,
    fit_circle,
    run_checks,
    run_validate,
    three_circle_scene,
    wire_distance,
)


@pytest.fixture
def ctx():
    return ValidationContext(threads=2)


def test_fit_circle_recovers_an_exact_circle():
    theta = np.linspace(0.0, 2.0, 30)
    pts = np.column_stack([0.5 + 1.7 * np.cos(theta), -0.25 + 1.7 * np.sin(theta)])
    center, radius, residual = fit_circle(pts)
    np.testing.assert_allclose(center, [0.5, -0.25], atol=1e-12)
    assert radius == pytest.approx(1.7, abs=1e-12)
    assert residual < 1e-12


def test_wire_distance():
    square = build_boundary_set([make_rectangle((0, 0, 0), (1, 0, 0), (0, 1, 0), 2.0, 2.0)])
    dist = wire_distance(square, np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 2.0], [3.0, 3.0, 0.0]]))
    np.testing.assert_allclose(dist, [1.0, np.sqrt(5.0), np.sqrt(8.0)])


def test_three_circle_scene_labels():
    scene = three_circle_scene((32, 16, 16))
    assert [loop.label for loop in scene.loops] == ["A", "B", "C"]
    assert scene.vertex_count == 64


def test_check_names_are_unique():
    names = [name for name, _ in CHECKS]
    assert len(names) == len(set(names)) == 13


@pytest.mark.parametrize(
    "check", [check_on_axis_circle, check_triangle_identity, check_in_plane_values, check_linearity, check_boundary_slope]
)
def test_fast_checks_pass(ctx, check):
    passed, detail = check(ctx)
    assert passed, detail


def test_a_flipped_kink_sign_is_caught(ctx, monkeypatch):
    original = solid_angle_service._kink_terms
    monkeypatch.setattr(solid_angle_service, "_kink_terms", lambda a, b, v: -original(a, b, v))
    passed, _ = check_triangle_identity(ctx)
    assert not passed


def test_run_checks_filters_by_name():
    results = run_checks(threads=1, only=["in-plane", "linearity"])
    assert [res.name for res in results] == ["in-plane values", "multi-loop linearity"]
    assert all(res.passed for res in results)
    assert all(res.seconds >= 0.0 for res in results)


@pytest.mark.slow
def test_full_acceptance_suite(capsys):
    assert run_validate() == EXIT_OK
    printed = capsys.readouterr().out
    assert "FAIL" not in printed


@pytest.mark.slow
def test_boundary_frames_follow_the_wire(ctx):
    passed, detail = check_principal_alignment(ctx)
    assert passed, detail


@pytest.mark.slow
def test_separation_splits_monotonically_with_the_total():
    counts, _ = _separation_sweep(threads=2)
    assert len(counts) == len(SEPARATION_TOTALS)
    assert counts[0] == 1
    assert counts[-1] >= 2
    assert counts == sorted(counts)
