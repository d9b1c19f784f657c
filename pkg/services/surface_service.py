from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from core.config import MESH_STRETCH_LIMIT
from core.exceptions import DegenerateInput
from core.parallel import ordered_map, resolve_threads
from core.vector import as_vector, best_fit_plane, cross3, dot3, norm3, orthonormal_basis, unit
from schemas.schemas import BoundarySet, CurvatureFrame, ProjectionResult, SurfaceMesh
from schemas.solver_schema import SeedGridSpec, SolverConfig
from services.curvature_service import curvature_frames
from services.projection_service import project_cloud
from services.solid_angle_service import evaluate_field

Polyline = np.ndarray


def seed_points(grid: SeedGridSpec) -> np.ndarray:
    """nx * ny lattice points, row-major: index of (i, j) is j * nx + i."""
    u = unit(grid.u_axis, "u_axis")
    v = unit(grid.v_axis, "v_axis")
    normal = cross3(u, v)
    if norm3(normal) < 1e-12:
        raise DegenerateInput("Seed grid axes are parallel")
    normal = normal / norm3(normal)

    s = np.arange(grid.nx) / (grid.nx - 1) * grid.width
    t = np.arange(grid.ny) / (grid.ny - 1) * grid.height
    S, T = np.meshgrid(s, t)
    origin = as_vector(grid.origin, "origin") + grid.offset * normal
    return origin + S.ravel()[:, None] * u + T.ravel()[:, None] * v


def build_mesh(grid: SeedGridSpec, results: Sequence[ProjectionResult], stretch_limit: float = MESH_STRETCH_LIMIT,
               omega_c: Optional[float] = None) -> SurfaceMesh:
    """Two triangles per lattice cell over the converged points.

    Triangles touching a failed point, with an edge longer than
    `stretch_limit` times the median edge, or with near-zero area are dropped.
    """
    nx, ny = grid.nx, grid.ny
    if len(results) != nx * ny:
        raise DegenerateInput(f"Expected {nx * ny} projection results, got {len(results)}")
    points = np.stack([res.point for res in results])
    ok = np.array([res.converged for res in results])

    j, i = np.meshgrid(np.arange(ny - 1), np.arange(nx - 1), indexing="ij")
    a = (j * nx + i).ravel()
    b, c = a + 1, a + nx
    d = c + 1
    tris = np.concatenate([np.stack([a, b, d], axis=1), np.stack([a, d, c], axis=1)])
    order = np.argsort(np.concatenate([np.arange(len(a)) * 2, np.arange(len(a)) * 2 + 1]), kind="stable")
    tris = tris[order]
    tris = tris[ok[tris].all(axis=1)]

    if len(tris):
        corners = points[tris]
        edges = norm3(corners - np.roll(corners, -1, axis=1))
        median = float(np.median(edges))
        area = 0.5 * norm3(cross3(corners[:, 1] - corners[:, 0], corners[:, 2] - corners[:, 0]))
        keep = (edges <= stretch_limit * median).all(axis=1) & (area > 1e-14 * median * median)
        dropped = len(tris) - int(keep.sum())
        if dropped:
            logger.info(f"Dropped {dropped} stretched or degenerate triangle(s)")
        tris = tris[keep]

    seed_indices = np.flatnonzero(ok)
    remap = np.full(len(results), -1, dtype=np.int64)
    remap[seed_indices] = np.arange(len(seed_indices))
    return SurfaceMesh(
        vertices=points[seed_indices],
        faces=remap[tris].reshape(-1, 3),
        seed_indices=seed_indices,
        omega_c=omega_c,
    )


def mesh_components(mesh: SurfaceMesh, min_faces: int = 1) -> Tuple[int, np.ndarray]:
    """Connected components over face-sharing vertices.

    Components with fewer than `min_faces` faces are not counted; unreferenced
    vertices get label -1.
    """
    labels = np.full(len(mesh.vertices), -1, dtype=np.int64)
    if len(mesh.faces) == 0:
        return 0, labels
    f = mesh.faces
    rows = np.concatenate([f[:, 0], f[:, 1], f[:, 2]])
    cols = np.concatenate([f[:, 1], f[:, 2], f[:, 0]])
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(mesh.vertices),) * 2)
    _, comp = connected_components(graph, directed=False)

    face_comp = comp[f[:, 0]]
    ids, sizes = np.unique(face_comp, return_counts=True)
    big = ids[sizes >= min_faces]
    used = np.zeros(len(mesh.vertices), dtype=bool)
    used[f.ravel()] = True
    for new, old in enumerate(big):
        labels[used & (comp == old)] = new
    return len(big), labels


# --- sections ---

def _chain(points: np.ndarray, link: float) -> List[Polyline]:
    """Order scattered curve samples into polylines by nearest-neighbour walking."""
    if len(points) == 0:
        return []
    tree = cKDTree(points)
    free = np.ones(len(points), dtype=bool)

    def walk(chain: List[int]):
        while True:
            dist, idx = tree.query(points[chain[-1]], k=min(12, len(points)))
            nxt = next((int(k) for d, k in zip(np.atleast_1d(dist), np.atleast_1d(idx))
                        if d <= link and k < len(points) and free[k]), None)
            if nxt is None:
                return
            free[nxt] = False
            chain.append(nxt)

    curves: List[Polyline] = []
    for start in range(len(points)):
        if not free[start]:
            continue
        free[start] = False
        chain = [start]
        walk(chain)
        chain.reverse()
        walk(chain)
        if len(chain) < 2:
            continue
        curve = points[chain]
        if len(chain) > 2 and norm3(curve[0] - curve[-1]) <= link:
            curve = np.vstack([curve, curve[:1]])
        curves.append(curve)
    return curves


def section_curves(boundary: BoundarySet, plane_point, plane_normal, omega_values: Sequence[float],
                   cfg: SolverConfig, extent: Optional[float] = None, resolution: int = 64,
                   threads: Optional[int] = None) -> List[List[Polyline]]:
    """Level curves of the potential inside a plane, one list of polylines per value.

    Seeds a cell-centred square grid in the plane and runs Newton with the
    gradient projected into the plane, so points never leave it.
    """
    origin = as_vector(plane_point, "plane point")
    normal = unit(plane_normal, "plane normal")
    e1, e2 = orthonormal_basis(normal)
    cfg = cfg if cfg.is_resolved else cfg.resolve(boundary)

    rel = boundary.vertices - origin
    u, v = rel @ e1, rel @ e2
    center = origin + 0.5 * (u.max() + u.min()) * e1 + 0.5 * (v.max() + v.min()) * e2
    if extent is None:
        extent = max(u.max() - u.min(), v.max() - v.min(), 1e-3 * boundary.diagonal)
    cell = 2.0 * extent / resolution
    ticks = -extent + cell * (np.arange(resolution) + 0.5)
    S, T = np.meshgrid(ticks, ticks)
    seeds = center + S.ravel()[:, None] * e1 + T.ravel()[:, None] * e2

    sections: List[List[Polyline]] = []
    for omega in omega_values:
        results = project_cloud(boundary, seeds, cfg.model_copy(update={"omega_c": float(omega)}),
                                threads=threads, plane_normal=normal)
        hits = np.array([res.point for res in results if res.converged]).reshape(-1, 3)
        if len(hits):
            tree = cKDTree(hits)
            drop = set()
            for i, j in sorted(tree.query_pairs(0.25 * cell)):
                if i not in drop:
                    drop.add(j)
            hits = hits[[k for k in range(len(hits)) if k not in drop]]
        curves = _chain(hits, 3.0 * cell)
        logger.info(f"Section at omega {omega:.6g}: {len(hits)} points in {len(curves)} polyline(s)")
        sections.append(curves)
    return sections


# --- principal curvature lines ---

class _Tracer:
    def __init__(self, boundary: BoundarySet, mesh: SurfaceMesh, family: int, step: float, max_steps: int,
                 cfg: SolverConfig, omega_c: float):
        self.boundary = boundary
        self.family = family
        self.step = step
        self.max_steps = max_steps
        self.cfg = cfg.model_copy(update={"omega_c": omega_c})
        self.mesh_tree = cKDTree(mesh.vertices)
        edges = mesh.edge_lengths
        self.mesh_gap = 2.0 * (float(np.median(edges)) if len(edges) else step)
        _, self.plane_normal = best_fit_plane(boundary.vertices)
        self.seg_start = boundary.vertices
        self.seg_vec = boundary.outgoing
        self.seg_len = norm3(boundary.outgoing)

    def frame(self, x: np.ndarray) -> Optional[CurvatureFrame]:
        frame = curvature_frames(self.boundary, x[None, :], grad_floor=self.cfg.grad_floor)[0]
        if frame is None or frame.umbilic:
            return None
        return frame

    def direction(self, frame: CurvatureFrame, reference: np.ndarray) -> np.ndarray:
        d = frame.dir1 if self.family == 1 else frame.dir2
        return -d if dot3(d, reference) < 0.0 else d

    def near_boundary(self, x: np.ndarray) -> bool:
        rel = x - self.seg_start
        t = np.clip(dot3(rel, self.seg_vec) / (self.seg_len ** 2), 0.0, 1.0)
        dist = norm3(rel - t[:, None] * self.seg_vec)
        k = int(np.argmin(dist))
        return bool(dist[k] < 2.0 * self.seg_len[k])

    def reproject(self, x: np.ndarray) -> Optional[np.ndarray]:
        for _ in range(3):
            batch = evaluate_field(self.boundary, x)
            if batch.on_boundary[0]:
                return None
            f = float(batch.potential[0]) - self.cfg.omega_c
            g = batch.gradient[0]
            if abs(f) <= self.cfg.tol_omega:
                return x
            g2 = float(dot3(g, g))
            if np.sqrt(g2) <= self.cfg.grad_floor:
                return None
            x = x - f * g / g2
        batch = evaluate_field(self.boundary, x)
        if batch.on_boundary[0] or abs(float(batch.potential[0]) - self.cfg.omega_c) > 10.0 * self.cfg.tol_omega:
            return None
        return x

    def march(self, start: np.ndarray, heading: np.ndarray) -> Tuple[List[np.ndarray], bool]:
        points = [start]
        x, ref = start, heading
        start_frame = self.frame(start)
        if start_frame is None:
            return points, False
        side_sign = np.sign(dot3(start_frame.normal, self.plane_normal))

        for n in range(self.max_steps):
            frame = self.frame(x)
            if frame is None:
                break
            d = self.direction(frame, ref)
            mid = self.frame(x + 0.5 * self.step * d)
            if mid is None:
                break
            d_mid = self.direction(mid, d)
            nxt = self.reproject(x + self.step * d_mid)
            if nxt is None or self.near_boundary(nxt):
                break
            if side_sign != 0 and np.sign(dot3(mid.normal, self.plane_normal)) != side_sign:
                break
            if self.mesh_tree.query(nxt)[0] > self.mesh_gap:
                break
            if n >= 3 and norm3(nxt - start) < self.step:
                points.append(start)
                return points, True
            points.append(nxt)
            x, ref = nxt, d_mid
        return points, False

    def trace(self, seed: np.ndarray) -> Optional[Polyline]:
        frame = self.frame(seed)
        if frame is None:
            return None
        heading = frame.dir1 if self.family == 1 else frame.dir2
        forward, closed = self.march(seed, heading)
        if closed:
            return np.array(forward)
        backward, _ = self.march(seed, -heading)
        line = backward[::-1] + forward[1:]
        return np.array(line) if len(line) >= 2 else None


def trace_seeds(mesh: SurfaceMesh, seed_spacing: float) -> np.ndarray:
    """Mesh vertices thinned so no two chosen seeds are closer than `seed_spacing`."""
    chosen: List[int] = []
    tree = cKDTree(mesh.vertices)
    blocked = np.zeros(len(mesh.vertices), dtype=bool)
    for k in range(len(mesh.vertices)):
        if blocked[k]:
            continue
        chosen.append(k)
        blocked[tree.query_ball_point(mesh.vertices[k], seed_spacing)] = True
    return mesh.vertices[chosen]


def trace_principal_lines(boundary: BoundarySet, mesh: SurfaceMesh, family: int, seed_spacing: float, step: float,
                          max_steps: int, cfg: SolverConfig, omega_c: Optional[float] = None,
                          threads: Optional[int] = None) -> List[Polyline]:
    """Integrate principal-direction lines over the surface with the midpoint rule.

    Each step is pulled back onto the level set by Newton. A line stops at an
    umbilic, within two segment lengths of a wire, where the surface turns over
    relative to the boundary plane, where it leaves the mesh, when it closes,
    or after `max_steps`.
    """
    if family not in (1, 2):
        raise DegenerateInput(f"Family must be 1 or 2, got {family}")
    if step <= 0 or seed_spacing <= 0:
        raise DegenerateInput("Step and seed spacing must be positive")
    cfg = cfg if cfg.is_resolved else cfg.resolve(boundary)
    if omega_c is None:
        omega_c = mesh.omega_c
    if omega_c is None:
        values = evaluate_field(boundary, mesh.vertices, want_gradient=False).potential
        omega_c = float(np.nanmedian(values))
        logger.info(f"Tracing on the median vertex potential {omega_c:.10g}")

    tracer = _Tracer(boundary, mesh, family, step, max_steps, cfg, omega_c)
    seeds = trace_seeds(mesh, seed_spacing)
    logger.info(f"Tracing family {family} from {len(seeds)} seed(s)")
    lines = ordered_map(tracer.trace, list(seeds), resolve_threads(threads))
    return [line for line in lines if line is not None]
