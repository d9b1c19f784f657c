"""Built-in acceptance suite behind `omegasurf validate`.

Every check builds its own scene, so the suite needs no files. Checks return
(passed, detail) and may leave artifacts (rendered OBJ text) that the
determinism check replays at a different thread count.
"""
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from core.exceptions import EXIT_FAILURE, EXIT_OK, OmegaSurfError
from core.parallel import resolve_threads
from core.vector import norm3
from schemas.schemas import BoundaryLoop, BoundarySet
from schemas.solver_schema import SeedGridSpec, SolverConfig
from services.boundary_service import build_boundary_set, make_circle, make_rectangle, with_currents
from services.curvature_service import curvature_frames, mesh_stencil_curvatures
from services.projection_service import project_cloud, project_point
from services.solid_angle_service import (
    evaluate_field,
    kink_angle,
    loop_contributions,
    potential,
    solid_angle_classic,
    triangle_solid_angle,
    wrap_four_pi,
)
from services.surface_service import build_mesh, mesh_components, section_curves, seed_points
from storage.obj_store import render_mesh, render_polylines

PI = np.pi


@dataclass
class ValidationContext:
    threads: int
    artifacts: Dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


CheckFn = Callable[[ValidationContext], Tuple[bool, str]]


# --- helpers ---

def fit_circle(points: np.ndarray) -> Tuple[np.ndarray, float, float]:
    """Algebraic least-squares circle through 2D points: (center, radius, max |distance - radius|)."""
    pts = np.asarray(points, dtype=float)
    A = np.column_stack([2.0 * pts[:, 0], 2.0 * pts[:, 1], np.ones(len(pts))])
    rhs = (pts ** 2).sum(axis=1)
    (cx, cy, c), *_ = np.linalg.lstsq(A, rhs, rcond=None)
    center = np.array([cx, cy])
    radius = float(np.sqrt(c + cx * cx + cy * cy))
    residual = float(np.max(np.abs(np.linalg.norm(pts - center, axis=1) - radius)))
    return center, radius, residual


def wire_distance(boundary: BoundarySet, points: np.ndarray) -> np.ndarray:
    rel = points[:, None, :] - boundary.vertices[None, :, :]
    b = boundary.outgoing[None, :, :]
    t = np.clip((rel * b).sum(axis=-1) / (b * b).sum(axis=-1), 0.0, 1.0)
    return np.linalg.norm(rel - t[..., None] * b, axis=-1).min(axis=1)


def _circle_scene(segments: int, current: float = 1.0) -> BoundarySet:
    return build_boundary_set([make_circle((0, 0, 0), (0, 0, 1), 1.0, segments, current, "circle")])


def three_circle_scene(segments: Sequence[int] = (1024, 256, 256)) -> BoundarySet:
    return build_boundary_set([
        make_circle((-1.4, 0, 0), (0, 0, 1), 1.0, segments[0], label="A"),
        make_circle((0.5, 0, 0), (0, 0, 1), 0.6, segments[1], label="B"),
        make_circle((1.75, 0, 0), (0, 0, 1), 0.35, segments[2], label="C"),
    ])


def rectangle_lowered_circle_scene() -> BoundarySet:
    return build_boundary_set([
        make_rectangle((-1.5, 0, 0), (1, 0, 0), (0, 1, 0), 2.4, 2.0, 32, label="rectangle"),
        make_circle((2.6, 0, -0.8), (0, 0, 1), 0.9, 128, label="circle"),
    ])


def _random_scenes() -> List[BoundarySet]:
    rng = np.random.default_rng(11)
    theta = 2.0 * PI * np.arange(12) / 12
    bumpy = np.column_stack([
        (1.0 + 0.2 * rng.random(12)) * np.cos(theta),
        (0.8 + 0.2 * rng.random(12)) * np.sin(theta),
        0.3 * rng.random(12),
    ])
    return [
        _circle_scene(64),
        build_boundary_set([make_rectangle((0, 0, 0), (1, 0, 0), (0, 1, 0), 2.0, 1.4, 4)]),
        build_boundary_set([BoundaryLoop(bumpy, 0.7, "bumpy")]),
        build_boundary_set([
            make_circle((0, 0, 0), (0, 0, 1), 1.0, 48, label="ring"),
            make_rectangle((0.3, 0.1, 0.6), (1, 0, 0), (0, 1, 1), 1.2, 0.8, 2, current=-1.3, label="frame"),
        ]),
    ]


def _sample_points(boundary: BoundarySet, count: int, rng: np.random.Generator, clearance: float = 0.15) -> np.ndarray:
    """Random points in the scene's box, at least `clearance` x diagonal from every wire."""
    chosen: List[np.ndarray] = []
    lo = boundary.center - 0.6 * boundary.diagonal
    hi = boundary.center + 0.6 * boundary.diagonal
    while len(chosen) < count:
        batch = lo + (hi - lo) * rng.random((4 * count, 3))
        keep = batch[wire_distance(boundary, batch) >= clearance * boundary.diagonal]
        chosen.extend(keep[: count - len(chosen)])
    return np.array(chosen)


def _relative(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300))


# --- checks ---

def check_on_axis_circle(ctx: ValidationContext) -> Tuple[bool, str]:
    from oracles.solid_angle_oracle import fan_triangulation_solid_angle, on_axis_circle

    loop = make_circle((0, 0, 0), (0, 0, 1), 1.0, 4096)
    worst_formula = worst_oracle = 0.0
    for z in (-2.0, -0.5, 0.0, 0.5, 2.0):
        value = solid_angle_classic(loop, (0.0, 0.0, z))
        worst_formula = max(worst_formula, abs(value - on_axis_circle(z)))
        worst_oracle = max(worst_oracle, abs(value - fan_triangulation_solid_angle(loop, (0.0, 0.0, z))))
    ok = worst_formula < 1e-6 and worst_oracle < 1e-10
    return ok, f"analytic err {worst_formula:.2e}, fan err {worst_oracle:.2e}"


def check_triangle_identity(ctx: ValidationContext) -> Tuple[bool, str]:
    rng = np.random.default_rng(3)
    n = 10_000
    p = rng.uniform(-1.0, 1.0, (n, 3, 3))
    r = rng.uniform(-1.0, 1.0, (n, 3))

    # keep well-shaped triangles whose apex is clear of the edge lines
    edges = np.roll(p, -1, axis=1) - p
    rel = r[:, None, :] - p
    line_dist = norm3(np.cross(edges, rel)) / norm3(edges)
    area = 0.5 * norm3(np.cross(edges[:, 0], -edges[:, 2]))
    ok_rows = (line_dist.min(axis=1) > 1e-2) & (area > 1e-2)
    p, r = p[ok_rows], r[ok_rows]

    closed = triangle_solid_angle(p[:, 0], p[:, 1], p[:, 2], r)
    incoming = p - np.roll(p, 1, axis=1)
    outgoing = np.roll(p, -1, axis=1) - p
    alpha = kink_angle(incoming, outgoing, r[:, None, :] - p)
    summed = 2.0 * PI - alpha.sum(axis=1)
    worst = float(np.max(np.abs(wrap_four_pi(closed - summed))))

    octant = triangle_solid_angle((1, 0, 0), (0, 0, 1), (0, 1, 0), (0, 0, 0))
    octant_err = abs(octant - 0.5 * PI)
    return worst < 1e-10 and octant_err < 1e-14, f"{len(r)} triangles, max err {worst:.2e}, octant err {octant_err:.1e}"


def check_in_plane_values(ctx: ValidationContext) -> Tuple[bool, str]:
    ell = np.array([[0, 0, 0], [2, 0, 0], [2, 1, 0], [1, 1, 0], [1, 2, 0], [0, 2, 0]], dtype=float)
    cases = [
        (make_circle((0, 0, 0), (0, 0, 1), 1.0, 256), [(0.3, 0.17, 0.0), (-0.6, 0.2, 0.0)], [(1.5, 0.2, 0.0), (0.0, -3.0, 0.0)]),
        (make_rectangle((0, 0, 0), (1, 0, 0), (0, 1, 0), 2.0, 1.0, 3), [(0.4, 0.1, 0.0)], [(1.4, 0.1, 0.0), (0.2, 0.9, 0.0)]),
        (BoundaryLoop(ell, label="ell"), [(0.5, 0.5, 0.0), (1.5, 0.4, 0.0), (0.4, 1.5, 0.0)], [(1.5, 1.5, 0.0), (-0.5, 1.3, 0.0)]),
    ]
    worst = 0.0
    for loop, inside, outside in cases:
        worst = max(worst, float(np.max(np.abs(solid_angle_classic(loop, np.array(inside)) - 2.0 * PI))))
        worst = max(worst, float(np.max(np.abs(solid_angle_classic(loop, np.array(outside))))))
    return worst < 1e-9, f"max err {worst:.2e}"


def check_gradient_consistency(ctx: ValidationContext) -> Tuple[bool, str]:
    from oracles.finite_difference import fd_gradient
    from oracles.gradient_oracle import biot_savart_endpoint_form, direct_difference_gradient, per_vertex_gradient

    rng = np.random.default_rng(7)
    scenes = _random_scenes()
    worst_fd = worst_end = worst_vertex = worst_exact = 0.0
    for k in range(100):
        boundary = scenes[k % len(scenes)]
        r = _sample_points(boundary, 1, rng)[0]
        g = evaluate_field(boundary, r, want_potential=False).gradient[0]
        h = 1e-5 * boundary.diagonal
        g_fd = fd_gradient(lambda x: float(potential(boundary, x)), r, h)
        worst_fd = max(worst_fd, _relative(g, g_fd))

        endpoint = np.zeros(3)
        vertex = np.zeros(3)
        for loop in boundary.loops:
            nxt = np.roll(loop.vertices, -1, axis=0)
            endpoint += loop.current * sum(biot_savart_endpoint_form(a, b, r) for a, b in zip(loop.vertices, nxt))
            vertex += per_vertex_gradient(loop.vertices, r, loop.current)
        worst_end = max(worst_end, _relative(g, endpoint))
        worst_vertex = max(worst_vertex, _relative(g, vertex))

        if k < 8:
            exact = np.zeros(3)
            for loop in boundary.loops:
                nxt = np.roll(loop.vertices, -1, axis=0)
                exact += loop.current * sum(direct_difference_gradient(a, b, r) for a, b in zip(loop.vertices, nxt))
            worst_exact = max(worst_exact, _relative(g, exact))

    ok = worst_fd < 1e-6 and worst_end < 1e-10 and worst_vertex < 1e-10 and worst_exact < 1e-10
    return ok, (f"fd {worst_fd:.2e}, endpoint {worst_end:.2e}, per-vertex {worst_vertex:.2e}, "
                f"decimal {worst_exact:.2e}")


def check_harmonicity(ctx: ValidationContext) -> Tuple[bool, str]:
    from oracles.finite_difference import fd_hessian

    rng = np.random.default_rng(5)
    worst_trace = worst_asym = worst_fd = 0.0
    for boundary in _random_scenes():
        pts = _sample_points(boundary, 25, rng)
        batch = evaluate_field(boundary, pts, want_potential=False, want_hessian=True)
        norms = np.sqrt((batch.hessian ** 2).sum(axis=(1, 2)))
        traces = np.abs(np.trace(batch.hessian, axis1=1, axis2=2))
        worst_trace = max(worst_trace, float(np.max(traces / norms)))
        worst_asym = max(worst_asym, float(np.max(batch.hessian_asymmetry)))

        h = 1e-4 * boundary.diagonal
        for r, A, norm in zip(pts[:5], batch.hessian[:5], norms[:5]):
            A_fd = fd_hessian(lambda x: float(potential(boundary, x)), r, h)
            worst_fd = max(worst_fd, float(np.max(np.abs(A - A_fd))) / norm)

    ok = worst_trace <= 1e-10 and worst_asym <= 1e-8 and worst_fd < 1e-5
    return ok, f"trace {worst_trace:.2e}, asymmetry {worst_asym:.2e}, fd {worst_fd:.2e}"


def _circle_cloud(threads: int):
    boundary = _circle_scene(1024)
    cfg = SolverConfig(omega_c=-PI, max_step=0.1).resolve(boundary)
    grid = SeedGridSpec.from_region(-0.65, -0.65, 0.65, 0.65, 0.0, 50, 50, offset=0.5)
    results = project_cloud(boundary, seed_points(grid), cfg, threads=threads)
    return boundary, cfg, grid, results


def _polygon_axis_root(loop: BoundaryLoop, classic: float, lo: float = 0.1, hi: float = 2.0) -> float:
    """Height on the axis where the fan oracle reads `classic`; the value falls with height."""
    from oracles.solid_angle_oracle import fan_triangulation_solid_angle

    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if fan_triangulation_solid_angle(loop, (0.0, 0.0, mid)) > classic:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def check_newton_convergence(ctx: ValidationContext) -> Tuple[bool, str]:
    boundary, cfg, grid, results = _circle_cloud(ctx.threads)
    converged = [res for res in results if res.converged]
    fraction = len(converged) / len(results)
    median_iterations = float(np.median([res.iterations for res in converged])) if converged else np.inf
    pts = np.array([res.point for res in converged]).reshape(-1, 3)
    membership = float(np.max(np.abs(evaluate_field(boundary, pts, want_gradient=False).potential + PI))) if len(pts) else np.inf
    ctx.artifacts["newton"] = render_mesh(build_mesh(grid, results, omega_c=cfg.omega_c))

    axial = project_point(boundary, (0.0, 0.0, 0.5), cfg)
    z = float(axial.point[2])
    polygon_root = _polygon_axis_root(boundary.loops[0], PI)
    ok = (fraction >= 0.95 and median_iterations <= 12 and membership <= cfg.tol_omega and axial.converged
          and abs(z - polygon_root) <= 1e-8 and abs(z - 1.0 / np.sqrt(3.0)) <= 1e-5)
    return ok, (f"converged {fraction:.1%}, median iterations {median_iterations:g}, "
                f"axial z {z:.10f} (polygon root {polygon_root:.10f})")


def check_boundary_slope(ctx: ValidationContext) -> Tuple[bool, str]:
    boundary = _circle_scene(1024)
    classic = 4.0 * PI / 3.0
    expected = PI - 0.5 * classic
    diameter = 2.0
    delta = 0.5e-5 * diameter

    p = boundary.vertices
    mids = 0.5 * (p + np.roll(p, -1, axis=0))[::16]
    outward = mids / norm3(mids)[:, None]
    up = np.array([0.0, 0.0, 1.0])
    seeds = mids + delta * (np.cos(expected) * -outward + np.sin(expected) * up)

    cfg = SolverConfig(omega_c=classic - 2.0 * PI, max_step=0.25 * delta, max_iterations=200).resolve(boundary)
    results = project_cloud(boundary, seeds, cfg, threads=ctx.threads)
    pts = np.array([res.point for res in results if res.converged]).reshape(-1, 3)
    pts = pts[wire_distance(boundary, pts) <= 1e-3 * diameter]
    if len(pts) < 0.9 * len(seeds):
        return False, f"only {len(pts)}/{len(seeds)} points converged next to the wire"

    g = evaluate_field(boundary, pts, want_potential=False).gradient
    n = g / norm3(g)[:, None]
    dip = np.arccos(np.clip(-n[:, 2], -1.0, 1.0))
    error = dip - expected
    mean_error, spread = float(np.mean(np.abs(error))), float(np.std(dip))
    return mean_error < 2e-3 and spread < 1e-3, f"{len(pts)} points, mean err {mean_error:.2e} rad, std {spread:.2e} rad"


CYLINDER_CASES = ((-1.5 * PI, 1.0, np.sqrt(2.0)), (-PI, 0.0, 1.0), (-0.5 * PI, -1.0, np.sqrt(2.0)))


def _cylinder_sections(threads: int):
    boundary = build_boundary_set([make_rectangle((0, 0, 0), (1, 0, 0), (0, 1, 0), 200.0, 2.0, 1)])
    cfg = SolverConfig(max_step=0.25).resolve(boundary)
    omegas = [omega for omega, _, _ in CYLINDER_CASES]
    curves = section_curves(boundary, (0, 0, 0), (1, 0, 0), omegas, cfg, extent=3.0, resolution=48, threads=threads)
    return omegas, curves


def check_cylinder_sections(ctx: ValidationContext) -> Tuple[bool, str]:
    omegas, curves = _cylinder_sections(ctx.threads)
    ctx.artifacts["sections"] = render_polylines([(f"omega_{w:.6g}", lines) for w, lines in zip(omegas, curves)])
    ok, notes = True, []
    for (omega, center_z, radius), lines in zip(CYLINDER_CASES, curves):
        if not lines or sum(len(line) for line in lines) < 10:
            return False, f"omega {omega:.4g}: too few section points"
        pts = np.vstack(lines)[:, 1:]
        center, fitted, residual = fit_circle(pts)
        good = (residual < 0.01 * fitted and abs(fitted - radius) < 0.01 * radius
                and np.linalg.norm(center - (0.0, center_z)) < 0.01 * radius)
        ok = ok and good
        notes.append(f"R {fitted:.4f}/{radius:.4f} res {residual / fitted:.1e}")
    return ok, "; ".join(notes)


def check_corner_cone(ctx: ValidationContext) -> Tuple[bool, str]:
    from oracles.cone_oracle import cone_residual

    beta, length = np.deg2rad(30.0), 1e3
    corner = np.array([
        [length * np.cos(beta), length * np.sin(beta), 0.0],
        [0.0, 0.0, 0.0],
        [length * np.cos(beta), -length * np.sin(beta), 0.0],
    ])
    boundary = build_boundary_set([BoundaryLoop(corner, label="wedge")])
    classic = 2.0 * PI / 3.0
    cfg = SolverConfig(omega_c=classic - 2.0 * PI, max_step=0.1, max_iterations=200).resolve(boundary)
    grid = SeedGridSpec.from_region(0.6, -0.25, 2.0, 0.25, 1.0, 8, 5)
    results = project_cloud(boundary, seed_points(grid), cfg, threads=ctx.threads)
    pts = np.array([res.point for res in results if res.converged]).reshape(-1, 3)
    pts = pts[norm3(pts) <= length / 100.0]
    if len(pts) < 0.8 * len(results):
        return False, f"only {len(pts)}/{len(results)} near-corner points converged"
    worst = max(cone_residual(beta, classic, p) for p in pts)
    return worst < 1e-2, f"{len(pts)} points, max cone residual {worst:.2e}"


def check_principal_alignment(ctx: ValidationContext) -> Tuple[bool, str]:
    boundary = three_circle_scene()
    omega_c = -5.0 * PI
    diameter = 2.0
    delta = 5e-4 * diameter

    loop = boundary.loops[0]
    p = loop.vertices
    center = p.mean(axis=0)
    picks = np.arange(0, len(p), 32)
    mids = 0.5 * (p[picks] + p[(picks + 1) % len(p)])
    tangents = loop.segments[picks] / norm3(loop.segments[picks])[:, None]
    seeds = mids + delta * np.array([0.0, 0.0, 1.0])

    cfg = SolverConfig(omega_c=omega_c, max_step=0.25 * delta, max_iterations=200).resolve(boundary)
    results = project_cloud(boundary, seeds, cfg, threads=ctx.threads)
    keep = np.array([res.converged for res in results])
    pts = np.array([res.point for res in results])[keep]
    frames = curvature_frames(boundary, pts, threads=ctx.threads)
    worst_angle = 0.0
    for frame, t in zip(frames, tangents[keep]):
        if frame is None:
            continue
        t = t - np.dot(t, frame.normal) * frame.normal
        t = t / np.linalg.norm(t)
        angle = min(np.arccos(min(1.0, abs(float(np.dot(d, t))))) for d in (frame.dir1, frame.dir2))
        worst_angle = max(worst_angle, angle)
    usable = sum(frame is not None for frame in frames)
    if usable < 0.9 * len(seeds):
        return False, f"only {usable}/{len(seeds)} boundary frames"

    # tensor against stencil on a fine patch at the top of the largest cap
    top = project_point(boundary, center + (0.0, 0.0, 0.5), cfg.model_copy(update={"max_step": 0.05}))
    if not top.converged:
        return False, "cap apex did not converge"
    half = 7 * 0.0025 * diameter
    grid = SeedGridSpec.from_region(center[0] - half, center[1] - half, center[0] + half, center[1] + half,
                                    float(top.point[2]), 15, 15)
    patch_cfg = cfg.model_copy(update={"max_step": 0.05})
    mesh = build_mesh(grid, project_cloud(boundary, seed_points(grid), patch_cfg, threads=ctx.threads), omega_c=omega_c)
    points, stencil, used = mesh_stencil_curvatures(boundary, mesh, patch_cfg, threads=ctx.threads)
    tensor = curvature_frames(boundary, points[used])
    worst_rel = 0.0
    for s, t in zip([f for f, u in zip(stencil, used) if u], tensor):
        if t is None:
            continue
        scale = max(abs(t.kappa1), abs(t.kappa2))
        worst_rel = max(worst_rel, abs(s.kappa1 - t.kappa1) / scale, abs(s.kappa2 - t.kappa2) / scale)
    ok = worst_angle < 1e-2 and worst_rel < 0.02 and used.sum() > 0
    return ok, f"boundary angle {worst_angle:.2e} rad, stencil vs tensor {worst_rel:.2%} over {int(used.sum())} faces"


def check_linearity(ctx: ValidationContext) -> Tuple[bool, str]:
    boundary = three_circle_scene((128, 96, 64))
    pts = _sample_points(boundary, 50, np.random.default_rng(9), clearance=0.02)
    base = loop_contributions(boundary, pts)

    flipped = loop_contributions(with_currents(boundary, {"B": -1.0}), pts)
    scaled = loop_contributions(with_currents(boundary, {"C": 2.5}), pts)
    exact = (np.array_equal(flipped[:, 1], -base[:, 1]) and np.array_equal(flipped[:, [0, 2]], base[:, [0, 2]])
             and np.array_equal(scaled[:, 2], 2.5 * base[:, 2]))

    total = potential(boundary, pts)
    parts = sum(potential(BoundarySet((loop,)), pts) for loop in boundary.loops)
    worst = float(np.max(np.abs(total - parts)))
    return exact and worst <= 1e-12, f"exact flip/scale {exact}, superposition err {worst:.2e}"


SEPARATION_TOTALS = (0.05 * PI, 0.1 * PI, 0.4 * PI, 0.7 * PI, 1.0 * PI)


def _separation_sweep(threads: int) -> Tuple[List[int], str]:
    boundary = rectangle_lowered_circle_scene()
    grid = SeedGridSpec.from_region(-3.2, -1.6, 3.9, 1.6, 1.5, 42, 20)
    seeds = seed_points(grid)
    counts, rendered = [], []
    for total in SEPARATION_TOTALS:
        cfg = SolverConfig(omega_c=total - 4.0 * PI, max_step=0.1, max_iterations=150).resolve(boundary)
        mesh = build_mesh(grid, project_cloud(boundary, seeds, cfg, threads=threads), omega_c=cfg.omega_c)
        counts.append(mesh_components(mesh, min_faces=10)[0])
        rendered.append(render_mesh(mesh))
    return counts, "".join(rendered)


def check_separation(ctx: ValidationContext) -> Tuple[bool, str]:
    counts, rendered = _separation_sweep(ctx.threads)
    ctx.artifacts["separation"] = rendered
    ok = counts[0] == 1 and counts[-1] >= 2 and all(a <= b for a, b in zip(counts, counts[1:]))
    labels = ", ".join(f"{total / PI:.2g}pi:{count}" for total, count in zip(SEPARATION_TOTALS, counts))
    return ok, f"components {labels}"


def check_determinism(ctx: ValidationContext) -> Tuple[bool, str]:
    many = ctx.threads
    replay = {
        "newton": lambda n: render_mesh(build_mesh(*_circle_cloud(n)[2:], omega_c=-PI)),
        "sections": lambda n: render_polylines([(f"omega_{w:.6g}", lines) for w, lines in zip(*_cylinder_sections(n))]),
        "separation": lambda n: _separation_sweep(n)[1],
    }
    differing = []
    for name, run in replay.items():
        reference = ctx.artifacts.get(name)
        if reference is None:
            reference = run(many)
        if run(1) != reference:
            differing.append(name)
    if differing:
        return False, f"outputs differ between 1 and {many} threads: {', '.join(differing)}"
    return True, f"identical outputs at 1 and {many} threads"


CHECKS: List[Tuple[str, CheckFn]] = [
    ("on-axis circle", check_on_axis_circle),
    ("triangle identity", check_triangle_identity),
    ("in-plane values", check_in_plane_values),
    ("gradient consistency", check_gradient_consistency),
    ("harmonicity", check_harmonicity),
    ("newton convergence", check_newton_convergence),
    ("boundary slope", check_boundary_slope),
    ("cylinder sections", check_cylinder_sections),
    ("corner cone", check_corner_cone),
    ("principal alignment", check_principal_alignment),
    ("multi-loop linearity", check_linearity),
    ("surface separation", check_separation),
    ("determinism", check_determinism),
]


def run_checks(threads: Optional[int] = None, only: Optional[Sequence[str]] = None) -> List[CheckResult]:
    ctx = ValidationContext(threads=max(2, resolve_threads(threads)))
    selected = [(name, fn) for name, fn in CHECKS if not only or any(term in name for term in only)]
    results = []
    for name, fn in selected:
        logger.info(f"Check → {name}")
        start = time.perf_counter()
        try:
            passed, detail = fn(ctx)
        except OmegaSurfError as exc:
            passed, detail = False, f"{type(exc).__name__}: {exc.detail}"
        results.append(CheckResult(name, bool(passed), detail, time.perf_counter() - start))
    return results


def run_validate(threads: Optional[int] = None, only: Optional[Sequence[str]] = None) -> int:
    results = run_checks(threads, only)
    for res in results:
        print(f"{res.name:<22} {'PASS' if res.passed else 'FAIL':<5} {res.seconds:7.2f}s  {res.detail}")
    failed = [res.name for res in results if not res.passed]
    total = sum(res.seconds for res in results)
    if failed:
        logger.error(f"{len(failed)}/{len(results)} check(s) failed: {', '.join(failed)}")
        return EXIT_FAILURE
    logger.info(f"All {len(results)} checks passed in {total:.1f}s")
    return EXIT_OK
