from typing import Optional

import numpy as np

from core.config import EPS_BOUNDARY_REL
from core.exceptions import ApexOnBoundaryLine
from core.vector import dot3, norm3
from schemas.schemas import BoundarySet
from services.solid_angle_service import (
    ArrayOrFloat,
    _segment_gradient_terms,
    _single_or_batch,
    evaluate_field,
    raise_on_boundary,
)


def segment_gradient(p_i, p_next, r, eps: Optional[float] = None) -> np.ndarray:
    """Field contribution of one straight segment (unit current), Biot-Savart form.

        -(|v| + |w|) (v x w) / (|v| |w| (|v| |w| + v.w)),   v = r - p_i, w = r - p_next

    Stays accurate when v and w are nearly parallel. Raises when r is within
    `eps` (default: a 1e-9 fraction of the segment length) of the segment.
    """
    p_i, p_next, r = (np.asarray(x, dtype=float) for x in (p_i, p_next, r))
    v, w = r - p_i, r - p_next
    d = p_next - p_i
    tol = EPS_BOUNDARY_REL * norm3(d) if eps is None else eps

    t = np.clip(dot3(v, d) / dot3(d, d), 0.0, 1.0)
    offset = v - t[..., None] * d
    if np.any(norm3(offset) <= tol):
        raise ApexOnBoundaryLine(detail="Apex lies on the segment")
    return _segment_gradient_terms(v, w)


def gradient(boundary: BoundarySet, r, threads: Optional[int] = 1) -> ArrayOrFloat:
    """Current-weighted segment sum; the spatial gradient of `potential`."""
    batch = evaluate_field(boundary, r, want_potential=False, want_gradient=True, threads=threads)
    raise_on_boundary(batch)
    return _single_or_batch(r, batch.gradient)
