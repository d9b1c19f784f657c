"""Small vector helpers over arrays whose last axis holds (x, y, z).

Products are written out component by component so every evaluation point
goes through the same elementwise arithmetic regardless of batch shape.
"""
from typing import Tuple

import numpy as np

from core.exceptions import DegenerateInput


def dot3(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] + a[..., 2] * b[..., 2]


def cross3(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.stack(
        (
            a[..., 1] * b[..., 2] - a[..., 2] * b[..., 1],
            a[..., 2] * b[..., 0] - a[..., 0] * b[..., 2],
            a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0],
        ),
        axis=-1,
    )


def norm3(a: np.ndarray) -> np.ndarray:
    return np.sqrt(dot3(a, a))


def as_vector(value, name: str = "vector") -> np.ndarray:
    vec = np.asarray(value, dtype=float)
    if vec.shape != (3,):
        raise DegenerateInput(f"{name} must have exactly 3 components, got shape {vec.shape}")
    if not np.all(np.isfinite(vec)):
        raise DegenerateInput(f"{name} has non-finite components")
    return vec


def as_points(value, name: str = "points") -> np.ndarray:
    """Return an (N, 3) float array, accepting a single point as well."""
    pts = np.asarray(value, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(1, -1)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise DegenerateInput(f"{name} must be an (N, 3) array, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise DegenerateInput(f"{name} contain non-finite coordinates")
    return pts


def unit(value, name: str = "vector") -> np.ndarray:
    vec = as_vector(value, name)
    length = float(np.sqrt(dot3(vec, vec)))
    if length == 0.0:
        raise DegenerateInput(f"{name} has zero length")
    return vec / length


def orthonormal_basis(normal) -> Tuple[np.ndarray, np.ndarray]:
    """Tangent pair (e1, e2) with e1 x e2 = n.

    e1 depends only on the line of n, so n and -n share e1 and get opposite e2.
    """
    n = unit(normal, "normal")
    ref = np.zeros(3)
    ref[int(np.argmin(np.abs(n)))] = 1.0
    e1 = ref - dot3(ref, n) * n
    e1 = e1 / np.sqrt(dot3(e1, e1))
    e2 = cross3(n, e1)
    return e1, e2


def rotation_matrix(axis, angle_deg: float) -> np.ndarray:
    """Rodrigues rotation about `axis` by `angle_deg` degrees."""
    k = unit(axis, "rotation axis")
    theta = np.deg2rad(angle_deg)
    K = np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])
    return np.eye(3) + np.sin(theta) * K + (1.0 - np.cos(theta)) * (K @ K)


def best_fit_plane(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Centroid and unit normal of the least-squares plane through `points`."""
    centroid = points.mean(axis=0)
    _, _, vt = np.linalg.svd(points - centroid)
    return centroid, vt[-1]
