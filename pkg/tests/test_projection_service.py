import numpy as np
import pytest

from core.exceptions import StationaryGradient
from schemas.enum import ProjectionStatus, TargetKind
from schemas.solver_schema import SolverConfig, TargetFieldSpec
from services.boundary_service import build_boundary_set, make_circle
from services.projection_service import (
    ConstantTarget,
    LinearTarget,
    RadialTarget,
    build_target,
    newton_step,
    project_cloud,
    project_cloud_variable_target,
    project_point,
    project_point_variable_target,
    scan_potential,
    tangential_relax,
)
from services.solid_angle_service import potential

PI = np.pi


@pytest.fixture
def fine_circle():
    return build_boundary_set([make_circle((0, 0, 0), (0, 0, 1), 1.0, 1024)])


@pytest.mark.parametrize("classic, height", [(PI, 1 / np.sqrt(3)), (2 * PI / 3, 2 / np.sqrt(5))])
def test_axial_seed_lands_on_the_expected_height(fine_circle, classic, height):
    # on the axis of a unit circle, classic = 2pi (1 - z / sqrt(1 + z^2))
    result = project_point(fine_circle, (0.0, 0.0, 0.3), SolverConfig(omega_c=classic - 2 * PI))
    assert result.converged
    assert result.residual <= 1e-10
    assert result.point[2] == pytest.approx(height, abs=2e-5)
    assert abs(result.point[0]) < 1e-12 and abs(result.point[1]) < 1e-12


def test_newton_step_moves_up_when_below_the_level(circle_set):
    step = newton_step(circle_set, (0.0, 0.0, 0.3), -PI)
    assert step[2] > 0


def test_newton_step_raises_on_flat_gradient(circle_set):
    with pytest.raises(StationaryGradient):
        newton_step(circle_set, (0.0, 0.0, 0.3), -PI, grad_floor=1e6)


def test_project_cloud_statuses(circle_set):
    seeds = np.array([
        [0.0, 0.0, 0.3],
        circle_set.vertices[3],
        [0.0, 0.0, 1e3],
    ])
    results = project_cloud(circle_set, seeds, SolverConfig(omega_c=-PI), threads=1)
    assert [res.status for res in results] == [
        ProjectionStatus.CONVERGED,
        ProjectionStatus.HIT_BOUNDARY,
        ProjectionStatus.ESCAPED,
    ]
    assert abs(potential(circle_set, results[0].point) + PI) <= 1e-10


def test_iteration_budget_and_gradient_floor(circle_set):
    capped = project_point(circle_set, (0.0, 0.0, 0.3), SolverConfig(omega_c=-PI, max_step=0.01, max_iterations=1))
    assert capped.status == ProjectionStatus.MAX_ITERATIONS
    assert capped.iterations == 1
    flat = project_point(circle_set, (0.0, 0.0, 0.3), SolverConfig(omega_c=-PI, grad_floor=1e6))
    assert flat.status == ProjectionStatus.STATIONARY_GRADIENT


def test_results_do_not_depend_on_order_or_threads(circle_set, rng):
    seeds = rng.uniform(-0.6, 0.6, size=(600, 3)) + np.array([0.0, 0.0, 0.6])
    cfg = SolverConfig(omega_c=-PI)
    forward = project_cloud(circle_set, seeds, cfg, threads=1)
    backward = project_cloud(circle_set, seeds[::-1], cfg, threads=3)[::-1]
    for a, b in zip(forward, backward):
        np.testing.assert_array_equal(a.point, b.point)
        assert a.status == b.status and a.iterations == b.iterations


def test_constant_target_matches_plain_projection(circle_set):
    cfg = SolverConfig(omega_c=-1.2)
    plain = project_point(circle_set, (0.2, 0.1, 0.4), cfg)
    targeted = project_point_variable_target(circle_set, (0.2, 0.1, 0.4), ConstantTarget(-1.2), cfg)
    np.testing.assert_array_equal(plain.point, targeted.point)
    flat_linear = project_point_variable_target(circle_set, (0.2, 0.1, 0.4), LinearTarget(-1.2, 0.0), cfg)
    np.testing.assert_array_equal(plain.point, flat_linear.point)


def test_linear_target_is_met_pointwise(circle_set, rng):
    target = LinearTarget(omega0=-PI, k=0.1)
    seeds = rng.uniform(-0.5, 0.5, size=(50, 3)) + np.array([0.0, 0.0, 0.5])
    results = project_cloud_variable_target(circle_set, seeds, target, SolverConfig(), threads=1)
    done = np.array([res.point for res in results if res.converged])
    assert len(done) > 25
    residual = potential(circle_set, done) - target.value(done)
    assert np.all(np.abs(residual) <= 1e-10)


def test_build_target_kinds():
    assert isinstance(build_target(TargetFieldSpec()), ConstantTarget)
    assert isinstance(build_target(TargetFieldSpec(kind=TargetKind.LINEAR, k=1.0)), LinearTarget)
    radial = build_target(TargetFieldSpec(kind=TargetKind.RADIAL, omega0=1.0, k=2.0))
    assert isinstance(radial, RadialTarget)
    pts = np.array([[0.0, 0.0, 5.0], [3.0, 4.0, 1.0]])
    np.testing.assert_allclose(radial.value(pts), [1.0, 11.0])
    np.testing.assert_allclose(radial.gradient(pts), [[0.0, 0.0, 0.0], [1.2, 1.6, 0.0]])


def test_tangential_relax_keeps_points_on_the_level(circle_set):
    seeds = np.stack(np.meshgrid(np.linspace(-0.4, 0.4, 5), np.linspace(-0.4, 0.4, 5)), axis=-1).reshape(-1, 2)
    seeds = np.column_stack([seeds, np.full(len(seeds), 0.5)])
    cfg = SolverConfig(omega_c=-PI)
    results = project_cloud(circle_set, seeds, cfg, threads=1)
    assert all(res.converged for res in results)
    points = np.array([res.point for res in results])

    unchanged = tangential_relax(circle_set, points, cfg, 0.0)
    np.testing.assert_array_equal(unchanged, points)

    relaxed = tangential_relax(circle_set, points, cfg, 0.5, grid_shape=(5, 5), threads=1)
    assert relaxed.shape == points.shape
    assert np.all(np.abs(potential(circle_set, relaxed) + PI) <= 1e-10)


def test_scan_potential_summary(circle_set):
    seeds = np.array([[0.0, 0.0, z] for z in np.linspace(-2.0, 2.0, 9)] + [list(circle_set.vertices[0])])
    scan = scan_potential(circle_set, seeds, quantiles=(0.5,), threads=1)
    assert scan.sampled == 10
    assert scan.on_boundary == 1
    assert scan.minimum < -PI < scan.maximum
    assert scan.minimum <= scan.quantiles[0][1] <= scan.maximum
    assert scan.quantiles[0][0] == 0.5
