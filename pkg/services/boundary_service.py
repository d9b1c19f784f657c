import math
from typing import Dict, List, Optional, Sequence

import numpy as np
from loguru import logger
from scipy.spatial import cKDTree

from core.config import CORNER_ANGLE_DEG
from core.exceptions import DegenerateInput, SchemaError
from core.vector import as_vector, best_fit_plane, cross3, dot3, norm3, orthonormal_basis, unit
from schemas.enum import DiagnosticKind, Severity
from schemas.schemas import BoundaryLoop, BoundarySet, Diagnostic

# pairs of segments tested per self-intersection block
INTERSECTION_BLOCK = 1 << 20


def make_circle(center, normal, radius: float, segments: int, current: float = 1.0, label: str = "circle") -> BoundaryLoop:
    """Regular polygon inscribed in the circle, counterclockwise seen from the +normal side."""
    if radius <= 0:
        raise DegenerateInput(f"Circle '{label}' radius must be positive, got {radius}")
    if segments < 3:
        raise DegenerateInput(f"Circle '{label}' needs at least 3 segments, got {segments}")
    c = as_vector(center, "center")
    e1, e2 = orthonormal_basis(normal)

    theta = 2.0 * np.pi * np.arange(segments) / segments
    vertices = c + radius * (np.cos(theta)[:, None] * e1 + np.sin(theta)[:, None] * e2)
    return BoundaryLoop(vertices, current, label)


def make_rectangle(center, u_axis, v_axis, width: float, height: float, segments_per_side: int = 1,
                   current: float = 1.0, label: str = "rectangle") -> BoundaryLoop:
    if width <= 0 or height <= 0:
        raise DegenerateInput(f"Rectangle '{label}' sides must be positive, got {width} x {height}")
    if segments_per_side < 1:
        raise DegenerateInput(f"Rectangle '{label}' needs at least one segment per side")
    c = as_vector(center, "center")
    u = unit(u_axis, "u_axis")
    v = unit(v_axis, "v_axis")
    if norm3(cross3(u, v)) < 1e-12:
        raise DegenerateInput(f"Rectangle '{label}' axes are parallel")
    v = unit(v - dot3(u, v) * u, "v_axis")

    hw, hh = 0.5 * width, 0.5 * height
    corners = [c - hw * u - hh * v, c + hw * u - hh * v, c + hw * u + hh * v, c - hw * u + hh * v]
    steps = np.arange(segments_per_side)[:, None] / segments_per_side
    sides = [corners[k] + steps * (corners[(k + 1) % 4] - corners[k]) for k in range(4)]
    return BoundaryLoop(np.concatenate(sides), current, label)


def reverse_loop(loop: BoundaryLoop) -> BoundaryLoop:
    return BoundaryLoop(loop.vertices[::-1].copy(), loop.current, loop.label)


def turning_angles(loop: BoundaryLoop) -> np.ndarray:
    """Direction change at each vertex, radians in [0, pi]."""
    a = loop.vertices - np.roll(loop.vertices, 1, axis=0)
    b = loop.segments
    return np.arctan2(norm3(cross3(a, b)), dot3(a, b))


def resample_loop(loop: BoundaryLoop, target_segment_length: float,
                  corner_angle_deg: float = CORNER_ANGLE_DEG) -> BoundaryLoop:
    """Subdivide so no segment exceeds the target; corners stay where they are."""
    if target_segment_length <= 0:
        raise DegenerateInput(f"Target segment length must be positive, got {target_segment_length}")
    lengths = norm3(loop.segments)
    if np.any(lengths == 0.0):
        raise DegenerateInput(f"Loop '{loop.label}' has coincident consecutive vertices")
    if lengths.max() <= target_segment_length:
        return loop

    corners = np.flatnonzero(turning_angles(loop) > np.deg2rad(corner_angle_deg))
    if len(corners) == 0:
        corners = np.array([0])

    count = len(loop)
    points: List[np.ndarray] = []
    for k, start in enumerate(corners):
        stop = corners[(k + 1) % len(corners)]
        span = (stop - start) % count or count
        idx = (start + np.arange(span + 1)) % count
        chain = loop.vertices[idx]

        arc = np.concatenate(([0.0], np.cumsum(lengths[idx[:-1]])))
        pieces = max(1, math.ceil(arc[-1] / target_segment_length - 1e-9))
        s = arc[-1] * np.arange(pieces) / pieces
        points.append(np.stack([np.interp(s, arc, chain[:, d]) for d in range(3)], axis=1))

    resampled = BoundaryLoop(np.concatenate(points), loop.current, loop.label)
    logger.debug(f"Resampled loop '{loop.label}' from {count} to {len(resampled)} vertices")
    return resampled


def _self_intersections(loop: BoundaryLoop) -> int:
    """Count proper crossings between non-adjacent segments in the loop's best-fit plane."""
    count = len(loop)
    if count < 4:
        return 0
    centroid, normal = best_fit_plane(loop.vertices)
    e1, e2 = orthonormal_basis(normal)
    rel = loop.vertices - centroid
    p = np.stack((rel @ e1, rel @ e2), axis=1)
    q = np.roll(p, -1, axis=0)

    def orient(a, b, c):
        return (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0])

    crossings = 0
    rows = max(1, INTERSECTION_BLOCK // count)
    j = np.arange(count)
    for start in range(0, count, rows):
        i = np.arange(start, min(start + rows, count))[:, None]
        adjacent = (j[None, :] <= i + 1) | ((i == 0) & (j[None, :] == count - 1))
        pi, qi = p[i], q[i]
        pj, qj = p[None, j], q[None, j]
        d1 = orient(pi, qi, pj)
        d2 = orient(pi, qi, qj)
        d3 = orient(pj, qj, pi)
        d4 = orient(pj, qj, qi)
        hit = (d1 * d2 < 0) & (d3 * d4 < 0) & ~adjacent
        crossings += int(hit.sum())
    return crossings


def validate(boundary: BoundarySet) -> List[Diagnostic]:
    diagnostics: List[Diagnostic] = []
    eps = boundary.eps_degenerate

    for w, loop in enumerate(boundary.loops):
        lengths = norm3(loop.segments)
        for i in np.flatnonzero(lengths <= eps):
            diagnostics.append(Diagnostic(
                DiagnosticKind.DEGENERATE_SEGMENT, Severity.ERROR, w,
                f"Loop '{loop.label}' segment {i} has length {lengths[i]:.3e}", int(i),
            ))

        count = len(loop)
        for i, j in sorted(cKDTree(loop.vertices).query_pairs(eps)):
            if j - i == 1 or (i == 0 and j == count - 1):
                continue
            diagnostics.append(Diagnostic(
                DiagnosticKind.NEAR_DUPLICATE_VERTEX, Severity.WARNING, w,
                f"Loop '{loop.label}' vertices {i} and {j} coincide", int(i),
            ))

        if loop.current == 0.0:
            diagnostics.append(Diagnostic(
                DiagnosticKind.ZERO_CURRENT, Severity.WARNING, w,
                f"Loop '{loop.label}' carries zero current and contributes nothing",
            ))

        crossings = _self_intersections(loop)
        if crossings:
            diagnostics.append(Diagnostic(
                DiagnosticKind.SELF_INTERSECTION, Severity.WARNING, w,
                f"Loop '{loop.label}' crosses itself {crossings} time(s) in its best-fit plane",
            ))
    return diagnostics


def build_boundary_set(loops: Sequence[BoundaryLoop]) -> BoundarySet:
    boundary = BoundarySet(tuple(loops))
    logger.debug(f"Boundary set: {len(boundary.loops)} loops, {boundary.vertex_count} vertices, diagonal {boundary.diagonal:.6g}")
    return boundary


def transform_set(boundary: BoundarySet, rotation: Optional[np.ndarray] = None, translation=None) -> BoundarySet:
    """Rigidly move every loop: p -> R p + t."""
    R = np.eye(3) if rotation is None else np.asarray(rotation, dtype=float)
    t = np.zeros(3) if translation is None else as_vector(translation, "translation")
    return BoundarySet(tuple(
        BoundaryLoop(loop.vertices @ R.T + t, loop.current, loop.label) for loop in boundary.loops
    ))


def with_currents(boundary: BoundarySet, overrides: Dict[str, float]) -> BoundarySet:
    """Replace loop currents by label."""
    if not overrides:
        return boundary
    labels = {loop.label for loop in boundary.loops}
    unknown = sorted(set(overrides) - labels)
    if unknown:
        raise SchemaError(f"Unknown loop label(s) for current override: {', '.join(unknown)}")
    for label, value in overrides.items():
        logger.info(f"Current of loop '{label}' set to {value}")
    return BoundarySet(tuple(
        BoundaryLoop(loop.vertices, overrides.get(loop.label, loop.current), loop.label) for loop in boundary.loops
    ))
