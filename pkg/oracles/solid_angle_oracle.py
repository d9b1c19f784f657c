"""Fan-triangulation reference for the solid angle of a planar loop.

Written from the triangle identity alone. Nothing here calls the kernel.
"""
import numpy as np

from core.exceptions import DegenerateInput, NotStarShaped
from schemas.schemas import BoundaryLoop

FOUR_PI = 4.0 * np.pi


def signed_triangle(p1: np.ndarray, p2: np.ndarray, p3: np.ndarray, r: np.ndarray) -> float:
    u, v, w = r - p1, r - p2, r - p3
    lu, lv, lw = (float(np.sqrt(np.dot(x, x))) for x in (u, v, w))
    top = float(np.dot(np.cross(u, v), w))
    bottom = lu * lv * lw + float(np.dot(u, v)) * lw + float(np.dot(v, w)) * lu + float(np.dot(w, u)) * lv
    return 2.0 * float(np.arctan2(top + 0.0, bottom))


def _plane(points: np.ndarray):
    centroid = points.mean(axis=0)
    _, _, vt = np.linalg.svd(points - centroid)
    return centroid, vt[2]


def fan_triangulation_solid_angle(loop: BoundaryLoop, apex) -> float:
    """Sum of triangle solid angles over the fan from the loop centroid, in [0, 4pi)."""
    pts = np.asarray(loop.vertices, dtype=float)
    r = np.asarray(apex, dtype=float)
    centroid, normal = _plane(pts)

    size = float(np.max(np.linalg.norm(pts - centroid, axis=1)))
    if np.max(np.abs((pts - centroid) @ normal)) > 1e-9 * size:
        raise DegenerateInput("Fan oracle needs a planar loop")

    nxt = np.roll(pts, -1, axis=0)
    hub = centroid
    if np.linalg.norm(r - centroid) <= 1e-9 * size:
        # an apex on the hub would zero every fan triangle
        hub = centroid + 0.25 * (0.5 * (pts[0] + nxt[0]) - centroid)
    turns = np.cross(pts - hub, nxt - hub) @ normal
    if not (np.all(turns > 0.0) or np.all(turns < 0.0)):
        raise NotStarShaped("Loop is not star-shaped about its fan hub")

    total = sum(signed_triangle(hub, a, b, r) for a, b in zip(pts, nxt))
    return total + FOUR_PI if total < 0.0 else total


def on_axis_circle(z: float, radius: float = 1.0) -> float:
    """Classic solid angle of a CCW circle in z=0 seen from (0, 0, z)."""
    return 2.0 * np.pi * (1.0 - z / np.hypot(radius, z))
