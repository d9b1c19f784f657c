"""Newton projection of seed points onto a level set of the potential.

Each point iterates independently; batches only vectorize the arithmetic.
A point's result does not depend on which batch or thread handled it.
"""
from dataclasses import dataclass
from typing import List, Optional, Protocol, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.spatial import cKDTree

from core.exceptions import StationaryGradient
from core.parallel import chunk_slices, flatten, ordered_map, resolve_threads
from core.vector import as_points, as_vector, dot3, norm3, unit
from schemas.enum import ProjectionStatus, TargetKind
from schemas.schemas import BoundarySet, PotentialScan, ProjectionResult
from schemas.solver_schema import SolverConfig, TargetFieldSpec
from services.solid_angle_service import evaluate_field, raise_on_boundary

# seeds handed to one worker at a time
PROJECTION_BATCH = 256


# --- target fields ---

class TargetField(Protocol):
    def value(self, points: np.ndarray) -> np.ndarray: ...

    def gradient(self, points: np.ndarray) -> np.ndarray: ...


@dataclass(frozen=True)
class ConstantTarget:
    omega: float

    def value(self, points: np.ndarray) -> np.ndarray:
        return np.full(len(points), self.omega)

    def gradient(self, points: np.ndarray) -> np.ndarray:
        return np.zeros((len(points), 3))


@dataclass(frozen=True)
class LinearTarget:
    """omega0 + k * (axis . (r - origin))."""

    omega0: float
    k: float
    axis: Tuple[float, float, float] = (0.0, 0.0, 1.0)
    origin: Tuple[float, float, float] = (0.0, 0.0, 0.0)

    def value(self, points: np.ndarray) -> np.ndarray:
        return self.omega0 + self.k * dot3(points - np.asarray(self.origin), unit(self.axis))

    def gradient(self, points: np.ndarray) -> np.ndarray:
        return np.tile(self.k * unit(self.axis), (len(points), 1))


@dataclass(frozen=True)
class RadialTarget:
    """omega0 + k * (distance from the line through `origin` along `axis`)."""

    omega0: float
    k: float
    axis: Tuple[float, float, float] = (0.0, 0.0, 1.0)
    origin: Tuple[float, float, float] = (0.0, 0.0, 0.0)

    def _radial(self, points: np.ndarray) -> np.ndarray:
        rel = points - np.asarray(self.origin)
        e = unit(self.axis)
        return rel - dot3(rel, e)[:, None] * e

    def value(self, points: np.ndarray) -> np.ndarray:
        return self.omega0 + self.k * norm3(self._radial(points))

    def gradient(self, points: np.ndarray) -> np.ndarray:
        radial = self._radial(points)
        dist = norm3(radial)
        safe = np.where(dist > 0.0, dist, 1.0)
        return np.where((dist > 0.0)[:, None], self.k * radial / safe[:, None], 0.0)


def build_target(spec: TargetFieldSpec) -> TargetField:
    if spec.kind == TargetKind.LINEAR:
        return LinearTarget(spec.omega0, spec.k, spec.axis, spec.origin)
    if spec.kind == TargetKind.RADIAL:
        return RadialTarget(spec.omega0, spec.k, spec.axis, spec.origin)
    return ConstantTarget(spec.omega0)


# --- Newton ---

def newton_step(boundary: BoundarySet, r, omega_c: float, grad_floor: Optional[float] = None) -> np.ndarray:
    """Raw (undamped, uncapped) step -(P - omega_c) grad / |grad|^2."""
    point = as_vector(r, "point")
    floor = grad_floor if grad_floor is not None else 1e-14 / boundary.diagonal
    batch = evaluate_field(boundary, point)
    raise_on_boundary(batch)
    g = batch.gradient[0]
    g2 = float(dot3(g, g))
    if np.sqrt(g2) <= floor:
        raise StationaryGradient(f"Gradient magnitude {np.sqrt(g2):.3e} is below the floor {floor:.3e}")
    return -(float(batch.potential[0]) - omega_c) * g / g2


def _project_batch(boundary: BoundarySet, seeds: np.ndarray, cfg: SolverConfig, target: TargetField,
                   plane_normal: Optional[np.ndarray] = None) -> List[ProjectionResult]:
    count = len(seeds)
    r = seeds.copy()
    iterations = np.zeros(count, dtype=np.int64)
    residual = np.full(count, np.inf)
    status: List[Optional[ProjectionStatus]] = [None] * count
    active = np.ones(count, dtype=bool)
    center = boundary.center

    def finish(mask: np.ndarray, idx: np.ndarray, state: ProjectionStatus):
        for k in idx[mask]:
            status[k] = state
            active[k] = False

    for step in range(cfg.max_iterations + 1):
        idx = np.flatnonzero(active)
        if len(idx) == 0:
            break

        escaped = norm3(r[idx] - center) > cfg.escape_radius
        finish(escaped, idx, ProjectionStatus.ESCAPED)
        idx = idx[~escaped]
        if len(idx) == 0:
            break

        batch = evaluate_field(boundary, r[idx])
        finish(batch.on_boundary, idx, ProjectionStatus.HIT_BOUNDARY)
        keep = ~batch.on_boundary
        idx = idx[keep]
        if len(idx) == 0:
            continue
        pts = r[idx]
        f = batch.potential[keep] - target.value(pts)
        g = batch.gradient[keep] - target.gradient(pts)
        if plane_normal is not None:
            g = g - dot3(g, plane_normal)[:, None] * plane_normal
        residual[idx] = np.abs(f)

        converged = np.abs(f) <= cfg.tol_omega
        finish(converged, idx, ProjectionStatus.CONVERGED)
        if step == cfg.max_iterations:
            finish(~converged, idx, ProjectionStatus.MAX_ITERATIONS)
            break

        g_norm = norm3(g)
        flat = ~converged & (g_norm <= cfg.grad_floor)
        finish(flat, idx, ProjectionStatus.STATIONARY_GRADIENT)

        move = ~converged & ~flat
        idx, f, g, g_norm = idx[move], f[move], g[move], g_norm[move]
        delta = (-cfg.damping * f / (g_norm * g_norm))[:, None] * g
        length = norm3(delta)
        scale = np.minimum(1.0, cfg.max_step / np.where(length > 0.0, length, 1.0))
        r[idx] = r[idx] + scale[:, None] * delta
        iterations[idx] += 1

    return [
        ProjectionResult(point=r[k].copy(), iterations=int(iterations[k]), residual=float(residual[k]), status=status[k])
        for k in range(count)
    ]


def project_cloud_variable_target(boundary: BoundarySet, seeds, target: TargetField, cfg: SolverConfig,
                                  threads: Optional[int] = None, plane_normal=None) -> List[ProjectionResult]:
    cfg = cfg if cfg.is_resolved else cfg.resolve(boundary)
    pts = as_points(seeds, "seeds")
    normal = None if plane_normal is None else unit(plane_normal, "plane normal")
    slices = chunk_slices(len(pts), PROJECTION_BATCH)
    workers = resolve_threads(threads)

    logger.info(f"Projecting {len(pts)} seeds in {len(slices)} batches on {workers} thread(s)")
    results = flatten(ordered_map(
        lambda sl: _project_batch(boundary, pts[sl], cfg, target, normal), slices, workers,
    ))

    converged = sum(result.converged for result in results)
    logger.info(f"Projection done: {converged}/{len(results)} converged")
    return results


def project_cloud(boundary: BoundarySet, seeds, cfg: SolverConfig, threads: Optional[int] = None,
                  plane_normal=None) -> List[ProjectionResult]:
    return project_cloud_variable_target(boundary, seeds, ConstantTarget(cfg.omega_c), cfg, threads, plane_normal)


def project_point(boundary: BoundarySet, seed, cfg: SolverConfig) -> ProjectionResult:
    return project_cloud(boundary, as_vector(seed, "seed")[None, :], cfg, threads=1)[0]


def project_point_variable_target(boundary: BoundarySet, seed, target: TargetField, cfg: SolverConfig) -> ProjectionResult:
    return project_cloud_variable_target(boundary, as_vector(seed, "seed")[None, :], target, cfg, threads=1)[0]


# --- tangential relaxation ---

def _grid_neighbours(shape: Tuple[int, int]) -> List[np.ndarray]:
    ny, nx = shape
    neighbours = []
    for j in range(ny):
        for i in range(nx):
            nb = [(j + dj) * nx + (i + di) for dj, di in ((-1, 0), (1, 0), (0, -1), (0, 1))
                  if 0 <= j + dj < ny and 0 <= i + di < nx]
            neighbours.append(np.array(nb, dtype=np.int64))
    return neighbours


def _knn_neighbours(points: np.ndarray, k: int) -> List[np.ndarray]:
    k = min(k + 1, len(points))
    _, idx = cKDTree(points).query(points, k=k)
    return [row[row != n] for n, row in enumerate(np.atleast_2d(idx))]


def tangential_relax(boundary: BoundarySet, points, cfg: SolverConfig, smoothing_weight: float,
                     grid_shape: Optional[Tuple[int, int]] = None, neighbours: int = 6,
                     threads: Optional[int] = None) -> np.ndarray:
    """One Laplacian pass along the tangent plane, then a Newton re-projection.

    Neighbours come from the seed lattice when `grid_shape` (ny, nx) is given,
    otherwise from the k nearest points. A re-projection that fails keeps the
    original point.
    """
    pts = as_points(points)
    if smoothing_weight == 0.0 or len(pts) < 2:
        return pts.copy()
    cfg = cfg if cfg.is_resolved else cfg.resolve(boundary)

    if grid_shape is not None:
        nbs = _grid_neighbours(grid_shape)
    else:
        nbs = _knn_neighbours(pts, neighbours)
    centroids = np.stack([pts[nb].mean(axis=0) if len(nb) else pts[n] for n, nb in enumerate(nbs)])

    batch = evaluate_field(boundary, pts, want_potential=False)
    raise_on_boundary(batch)
    normal = batch.gradient / norm3(batch.gradient)[:, None]
    move = smoothing_weight * (centroids - pts)
    move -= dot3(move, normal)[:, None] * normal

    results = project_cloud(boundary, pts + move, cfg, threads=threads)
    relaxed = np.stack([res.point if res.converged else pts[n] for n, res in enumerate(results)])
    kept = sum(not res.converged for res in results)
    if kept:
        logger.warning(f"Tangential relax: {kept} point(s) failed to re-project and were left in place")
    return relaxed


# --- range scan ---

def scan_potential(boundary: BoundarySet, seeds, quantiles: Sequence[float] = (0.05, 0.25, 0.5, 0.75, 0.95),
                   threads: Optional[int] = None) -> PotentialScan:
    """Potential range over a seed set; a guide for choosing omega_c, not a bound."""
    pts = as_points(seeds, "seeds")
    batch = evaluate_field(boundary, pts, want_gradient=False, threads=threads)
    values = batch.potential[~batch.on_boundary]
    if len(values) == 0:
        return PotentialScan(len(pts), int(batch.on_boundary.sum()), np.nan, np.nan, ())
    qs = tuple((float(q), float(np.quantile(values, q))) for q in quantiles)
    return PotentialScan(len(pts), int(batch.on_boundary.sum()), float(values.min()), float(values.max()), qs)
