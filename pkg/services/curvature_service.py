"""Second-order surface information of the level sets.

Sign convention: curvatures are second derivatives of the height of the
surface over its tangent plane, measured along the field normal n = grad/|grad|.
"""
from collections import deque
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger
from scipy.linalg import eigh
from scipy.spatial import cKDTree

from core.config import SINGULAR_STENCIL_COND, UMBILIC_REL_TOL
from core.exceptions import SingularStencil, StationaryGradient
from core.vector import as_points, cross3, dot3, norm3, orthonormal_basis
from schemas.schemas import BoundarySet, CurvatureFrame, SurfaceMesh
from schemas.solver_schema import SolverConfig
from services.solid_angle_service import _single_or_batch, evaluate_field, raise_on_boundary
from services.projection_service import project_cloud


def hessian(boundary: BoundarySet, r, threads: Optional[int] = 1) -> np.ndarray:
    """Symmetrized second derivatives of the potential, shape (3, 3) or (N, 3, 3)."""
    batch = evaluate_field(boundary, r, want_potential=False, want_hessian=True, threads=threads)
    raise_on_boundary(batch)
    return _single_or_batch(r, batch.hessian)


def _is_umbilic(k1: np.ndarray, k2: np.ndarray) -> np.ndarray:
    return np.abs(k1 - k2) <= UMBILIC_REL_TOL * (np.abs(k1) + np.abs(k2))


def frames_from_field(gradient: np.ndarray, hess: np.ndarray) -> List[CurvatureFrame]:
    """Shape operator of the level set from grad and Hessian of the field."""
    frames = []
    for g, H in zip(gradient, hess):
        g_norm = float(norm3(g))
        n = g / g_norm
        P = np.eye(3) - np.outer(n, n)
        beta = -(P @ H @ P) / g_norm

        e1, e2 = orthonormal_basis(n)
        p, r, t = e1 @ beta @ e1, e1 @ beta @ e2, e2 @ beta @ e2
        mean = 0.5 * (p + t)
        spread = float(np.hypot(0.5 * (p - t), r))
        k1, k2 = mean + spread, mean - spread

        theta = 0.5 * np.arctan2(2.0 * r, p - t)
        d1 = np.cos(theta) * e1 + np.sin(theta) * e2
        d2 = cross3(n, d1)
        frames.append(CurvatureFrame(n, beta, float(k1), float(k2), d1, d2, bool(_is_umbilic(k1, k2))))
    return frames


def curvature_frames(boundary: BoundarySet, points, grad_floor: Optional[float] = None,
                     threads: Optional[int] = 1) -> List[Optional[CurvatureFrame]]:
    """Frames for a batch; None where the point is on a wire or the gradient vanishes."""
    pts = as_points(points)
    floor = grad_floor if grad_floor is not None else 1e-14 / boundary.diagonal
    batch = evaluate_field(boundary, pts, want_potential=False, want_hessian=True, threads=threads)
    ok = ~batch.on_boundary & (norm3(np.nan_to_num(batch.gradient)) > floor)

    frames: List[Optional[CurvatureFrame]] = [None] * len(pts)
    idx = np.flatnonzero(ok)
    for k, frame in zip(idx, frames_from_field(batch.gradient[idx], batch.hessian[idx])):
        frames[k] = frame
    return frames


def second_fundamental_form(boundary: BoundarySet, r, grad_floor: Optional[float] = None) -> CurvatureFrame:
    floor = grad_floor if grad_floor is not None else 1e-14 / boundary.diagonal
    batch = evaluate_field(boundary, r, want_potential=False, want_hessian=True)
    raise_on_boundary(batch)
    g = batch.gradient[0]
    if norm3(g) <= floor:
        raise StationaryGradient(f"Gradient magnitude {norm3(g):.3e} is below the floor {floor:.3e}")
    return frames_from_field(batch.gradient, batch.hessian)[0]


def quadratic_fit_curvature(samples, origin, e1, e2, e3) -> Tuple[float, float, np.ndarray, np.ndarray]:
    """Principal curvatures at `origin` of the quadric through six samples.

    Fits z = a x^2 + 2 b x y + c y^2 + f x + g y + h in the local frame
    (e1, e2, e3) and solves the shape-operator pair (second against first
    fundamental form) as a generalized symmetric eigenproblem. Results are
    sorted with kappa1 >= kappa2 and directions returned in world space.
    """
    pts = as_points(samples, "stencil")
    if len(pts) != 6:
        raise SingularStencil(f"Quadratic fit needs exactly 6 points, got {len(pts)}")
    axes = np.stack([e1, e2, e3])
    local = (pts - np.asarray(origin, dtype=float)) @ axes.T

    scale = float(np.max(np.abs(local[:, :2])))
    if scale == 0.0:
        raise SingularStencil("All stencil points project onto the origin")
    x, y, z = (local / scale).T
    A = np.stack([x * x, 2 * x * y, y * y, x, y, np.ones(6)], axis=1)
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > SINGULAR_STENCIL_COND:
        raise SingularStencil(f"Stencil system is ill-conditioned (cond {cond:.3e})")
    a, b, c, f, g, _ = np.linalg.solve(A, z)

    first = np.array([[1 + f * f, f * g], [f * g, 1 + g * g]])
    second = np.array([[2 * a, 2 * b], [2 * b, 2 * c]]) / (np.sqrt(1 + f * f + g * g) * scale)
    values, vectors = eigh(second, first)
    order = np.argsort(values)[::-1]

    dirs = []
    for k in order:
        vx, vy = vectors[:, k]
        tangent = (vx * e1 + vy * e2 + (f * vx + g * vy) * e3)
        dirs.append(tangent / norm3(tangent))
    return float(values[order[0]]), float(values[order[1]]), dirs[0], dirs[1]


def comb_directions(points: np.ndarray, frames: List[Optional[CurvatureFrame]],
                    radius_factor: float = 3.0) -> List[Optional[CurvatureFrame]]:
    """Flip dir1 so neighbouring frames agree in sign. Umbilics are left as they are."""
    combed = list(frames)
    usable = np.array([f is not None and not f.umbilic for f in frames])
    if usable.sum() < 2:
        return combed

    tree = cKDTree(points)
    spacing, _ = tree.query(points, k=2)
    radius = radius_factor * float(np.median(spacing[:, 1]))

    visited = ~usable
    for root in range(len(points)):
        if visited[root]:
            continue
        visited[root] = True
        queue = deque([root])
        while queue:
            cur = queue.popleft()
            for nb in sorted(tree.query_ball_point(points[cur], radius)):
                if visited[nb]:
                    continue
                visited[nb] = True
                if dot3(combed[nb].dir1, combed[cur].dir1) < 0.0:
                    combed[nb] = combed[nb].flipped()
                queue.append(nb)
    return combed


def principal_direction_field(boundary: BoundarySet, points, threads: Optional[int] = 1) -> List[Optional[CurvatureFrame]]:
    pts = as_points(points)
    frames = curvature_frames(boundary, pts, threads=threads)
    umbilics = sum(1 for f in frames if f is not None and f.umbilic)
    if umbilics:
        logger.info(f"{umbilics} umbilic point(s): directions there are an arbitrary tangent pair")
    return comb_directions(pts, frames)


def _opposite_vertices(faces: np.ndarray) -> np.ndarray:
    """For each face edge (j,k), (k,i), (i,j), the far vertex of the neighbour across it, or -1."""
    edge_faces = {}
    for f, tri in enumerate(faces):
        for e in range(3):
            key = tuple(sorted((int(tri[(e + 1) % 3]), int(tri[(e + 2) % 3]))))
            edge_faces.setdefault(key, []).append(f)

    opposite = np.full(faces.shape, -1, dtype=np.int64)
    for f, tri in enumerate(faces):
        for e in range(3):
            key = tuple(sorted((int(tri[(e + 1) % 3]), int(tri[(e + 2) % 3]))))
            others = [g for g in edge_faces[key] if g != f]
            if len(others) == 1:
                far = [v for v in faces[others[0]] if v not in key]
                opposite[f, e] = far[0]
    return opposite


def mesh_stencil_curvatures(boundary: BoundarySet, mesh: SurfaceMesh, cfg: SolverConfig,
                            threads: Optional[int] = None) -> Tuple[np.ndarray, List[Optional[CurvatureFrame]], np.ndarray]:
    """Per-face curvature from each triangle plus its three edge-adjacent far vertices.

    Evaluated at the triangle centroid projected onto the level set. Faces
    missing a neighbour, or with a singular stencil, fall back to the field
    tensor. Returns (points, frames, used_stencil).
    """
    faces = np.asarray(mesh.faces, dtype=np.int64)
    if len(faces) == 0:
        return np.zeros((0, 3)), [], np.zeros(0, dtype=bool)
    cfg = cfg if cfg.is_resolved else cfg.resolve(boundary)

    centroids = mesh.vertices[faces].mean(axis=1)
    results = project_cloud(boundary, centroids, cfg, threads=threads)
    points = np.stack([res.point if res.converged else c for res, c in zip(results, centroids)])
    tensor = curvature_frames(boundary, points, grad_floor=cfg.grad_floor)
    opposite = _opposite_vertices(faces)

    frames: List[Optional[CurvatureFrame]] = []
    used = np.zeros(len(faces), dtype=bool)
    for f, tri in enumerate(faces):
        base = tensor[f]
        if base is None or np.any(opposite[f] < 0):
            frames.append(base)
            continue
        e3 = base.normal
        e1, e2 = orthonormal_basis(e3)
        stencil = mesh.vertices[np.concatenate([tri, opposite[f]])]
        try:
            k1, k2, d1, d2 = quadratic_fit_curvature(stencil, points[f], e1, e2, e3)
        except SingularStencil as exc:
            logger.debug(f"Face {f}: {exc.detail}; using the field tensor")
            frames.append(base)
            continue
        beta = k1 * np.outer(d1, d1) + k2 * np.outer(d2, d2)
        frames.append(CurvatureFrame(e3, beta, k1, k2, d1, d2, bool(_is_umbilic(k1, k2))))
        used[f] = True

    logger.info(f"Stencil curvature on {int(used.sum())}/{len(faces)} faces, field tensor elsewhere")
    return points, frames, used
