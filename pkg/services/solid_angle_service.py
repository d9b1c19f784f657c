"""Solid-angle potential of a boundary set.

The canonical quantity is the 2pi-free potential

    P(r) = -sum_w I_w * S_w(r),    S_w = sum of kink angles of loop w seen from r

For a single loop of unit current the classic solid angle is P + 2pi.
Kink angles use the principal atan2 branch and no unwrapping is attempted, so
P carries the usual 4pi ambiguity per loop: pick omega_c to match the sheet
your seeds start on.
"""
from typing import Optional, Union

import numpy as np
from loguru import logger

from core.config import EPS_BOUNDARY_REL, EPS_DEGENERATE_REL
from core.exceptions import ApexOnBoundaryLine, ConventionError, DegenerateTriangle
from core.parallel import chunk_length, chunk_slices, ordered_map
from core.summation import compensated_sum
from core.vector import as_points, cross3, dot3, norm3
from schemas.enum import PotentialConvention
from schemas.schemas import BoundaryLoop, BoundarySet, FieldBatch, FieldSample

TWO_PI = 2.0 * np.pi
FOUR_PI = 4.0 * np.pi

ArrayOrFloat = Union[float, np.ndarray]


# --- per-vertex and per-segment terms ---

def _kink_terms(a: np.ndarray, b: np.ndarray, v: np.ndarray) -> np.ndarray:
    x = dot3(a, b) * dot3(v, v) - dot3(a, v) * dot3(b, v)
    y = norm3(v) * dot3(cross3(a, b), v)
    # + 0.0 maps a signed zero to +0.0 so the range stays (-pi, pi]
    return np.arctan2(y + 0.0, x)


def _in_plane_limit(alpha: np.ndarray, a: np.ndarray, b: np.ndarray, v: np.ndarray, normal: np.ndarray) -> np.ndarray:
    """Resolve kinks whose apex lies in the plane of their two segments.

    Those sit on the atan2 branch cut (alpha is 0 or pi). Take the limit from the
    loop's +normal side so every vertex of a planar loop lands on the same sheet.
    """
    ab = cross3(a, b)
    flat = np.abs(dot3(ab, v)) <= EPS_DEGENERATE_REL * norm3(ab) * norm3(v)
    return np.where(flat, np.copysign(np.abs(alpha), dot3(ab, normal)), alpha)


def _segment_gradient_terms(v: np.ndarray, w: np.ndarray) -> np.ndarray:
    vn, wn = norm3(v), norm3(w)
    scale = -(vn + wn) / (vn * wn * (vn * wn + dot3(v, w)))
    return scale[..., None] * cross3(v, w)


def _skew(x: np.ndarray) -> np.ndarray:
    """D with D[j, k] = d(x cross v)_k / dv_j."""
    D = np.zeros(x.shape + (3,))
    D[..., 0, 1], D[..., 0, 2] = x[..., 2], -x[..., 1]
    D[..., 1, 0], D[..., 1, 2] = -x[..., 2], x[..., 0]
    D[..., 2, 0], D[..., 2, 1] = x[..., 1], -x[..., 0]
    return D


def _hessian_terms(x: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Jacobian of T(x, v) = (x.v)(x cross v) / (|v| |x cross v|^2) with respect to v."""
    s = dot3(x, v)
    c = cross3(x, v)
    n = norm3(v)
    q = dot3(c, c)
    xx = dot3(x, x)

    u = x / n[..., None] - (s / n ** 3)[..., None] * v
    first = u[..., :, None] * c[..., None, :] / q[..., None, None]
    bend = (s[..., None] * x - xx[..., None] * v)
    second = _skew(x) / q[..., None, None] + 2.0 * bend[..., :, None] * c[..., None, :] / (q ** 2)[..., None, None]
    return first + (s / n)[..., None, None] * second


# --- kernel ---

def _line_hits(x: np.ndarray, v: np.ndarray, eps: float) -> np.ndarray:
    c = cross3(x, v)
    return dot3(c, c) <= eps * eps * dot3(x, x)


def _segment_hits(b: np.ndarray, v: np.ndarray, eps: float) -> np.ndarray:
    t = np.clip(dot3(v, b) / dot3(b, b), 0.0, 1.0)
    d = v - t[..., None] * b
    return dot3(d, d) <= eps * eps


def _evaluate_chunk(boundary: BoundarySet, r: np.ndarray, want_potential: bool, want_gradient: bool,
                    want_hessian: bool, eps: float) -> dict:
    p = boundary.vertices
    a = boundary.incoming[None, :, :]
    b = boundary.outgoing[None, :, :]
    v = r[:, None, :] - p[None, :, :]

    if want_potential or want_hessian:
        hits = _line_hits(a, v, eps) | _line_hits(b, v, eps)
    else:
        hits = _segment_hits(b, v, eps)
    on_boundary = hits.any(axis=1)
    first = np.argmax(hits, axis=1)

    out = {"on_boundary": on_boundary, "first": first}
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if want_potential:
            alpha = _in_plane_limit(_kink_terms(a, b, v), a, b, v, boundary.vertex_normal[None, :, :])
            sums = np.stack([compensated_sum(alpha[:, sl], axis=1) for sl in boundary.loop_slices], axis=1)
            out["loop_sums"] = sums
            out["potential"] = -compensated_sum(sums * boundary.currents[None, :], axis=1)
        if want_gradient:
            terms = _segment_gradient_terms(v, v - b) * boundary.vertex_current[None, :, None]
            out["gradient"] = compensated_sum(terms, axis=1)
        if want_hessian:
            terms = (_hessian_terms(a, v) - _hessian_terms(b, v)) * boundary.vertex_current[None, :, None, None]
            raw = compensated_sum(terms, axis=1)
            raw_t = np.swapaxes(raw, -1, -2)
            norm = np.sqrt((raw ** 2).sum(axis=(-1, -2)))
            out["hessian_asymmetry"] = np.sqrt(((raw - raw_t) ** 2).sum(axis=(-1, -2))) / norm
            out["hessian"] = 0.5 * (raw + raw_t)
    return out


def evaluate_field(boundary: BoundarySet, points, want_potential: bool = True, want_gradient: bool = True,
                   want_hessian: bool = False, threads: Optional[int] = 1, include_loop_sums: bool = False) -> FieldBatch:
    """Evaluate potential / gradient / Hessian at an (N, 3) batch of points.

    Points closer than eps_boundary to a boundary line (to a segment, when only
    the gradient is asked for) are flagged in `on_boundary` with the first
    offending loop and vertex; their values are NaN.
    """
    r = as_points(points)
    weight = 1 + (3 if want_gradient else 0) + (18 if want_hessian else 0)
    slices = chunk_slices(len(r), chunk_length(boundary.vertex_count, weight))
    eps = boundary.eps_boundary
    logger.debug(f"Evaluating {len(r)} points against {boundary.vertex_count} vertices in {len(slices)} chunks")

    parts = ordered_map(
        lambda sl: _evaluate_chunk(boundary, r[sl], want_potential, want_gradient, want_hessian, eps),
        slices, threads,
    )

    def gather(key, shape):
        if not parts:
            return np.zeros((0,) + shape)
        return np.concatenate([part[key] for part in parts])

    on_boundary = gather("on_boundary", ()).astype(bool)
    first = gather("first", ()).astype(np.int64)

    potential = gather("potential", ()) if want_potential else None
    gradient = gather("gradient", (3,)) if want_gradient else None
    hessian = gather("hessian", (3, 3)) if want_hessian else None
    asymmetry = gather("hessian_asymmetry", ()) if want_hessian else None
    for values in (potential, gradient, hessian, asymmetry):
        if values is not None:
            values[on_boundary] = np.nan

    batch = FieldBatch(
        potential=potential,
        gradient=gradient,
        hessian=hessian,
        hessian_asymmetry=asymmetry,
        on_boundary=on_boundary,
        loop_index=np.where(on_boundary, boundary.vertex_loop[first], -1),
        vertex_index=np.where(on_boundary, boundary.vertex_index[first], -1),
    )
    if include_loop_sums:
        sums = gather("loop_sums", (len(boundary.loops),))
        sums[on_boundary] = np.nan
        batch.loop_sums = sums
    return batch


def raise_on_boundary(batch: FieldBatch) -> None:
    if batch.on_boundary.any():
        k = int(np.argmax(batch.on_boundary))
        raise ApexOnBoundaryLine(int(batch.loop_index[k]), int(batch.vertex_index[k]))


def _single_or_batch(points, values: np.ndarray):
    if np.ndim(points) == 1:
        item = values[0]
        return float(item) if np.ndim(item) == 0 else item
    return values


# --- public operations ---

def kink_angle(a, b, v) -> ArrayOrFloat:
    """Spherical turning angle at a boundary vertex seen from the apex, in (-pi, pi].

    a: incoming segment, b: outgoing segment, v: apex minus vertex. Works on
    single vectors or stacks of them.
    """
    a, b, v = (np.asarray(x, dtype=float) for x in (a, b, v))
    va, vv, vb = norm3(a), norm3(v), norm3(b)
    bad = (norm3(cross3(a, v)) < EPS_BOUNDARY_REL * va * vv) | (norm3(cross3(b, v)) < EPS_BOUNDARY_REL * vb * vv)
    if np.any(bad):
        raise ApexOnBoundaryLine(0, int(np.argmax(np.ravel(bad))), "Apex is collinear with a segment at the kink")
    alpha = _kink_terms(a, b, v)
    return float(alpha) if np.ndim(alpha) == 0 else alpha


def loop_angle_sum(loop: BoundaryLoop, r) -> ArrayOrFloat:
    boundary = BoundarySet((loop,))
    batch = evaluate_field(boundary, r, want_gradient=False, include_loop_sums=True)
    raise_on_boundary(batch)
    return _single_or_batch(r, batch.loop_sums[:, 0])


def solid_angle_classic(loop: BoundaryLoop, r) -> ArrayOrFloat:
    """2pi minus the loop's kink-angle sum. Far above a planar CCW loop -> 0, far below -> 4pi."""
    sums = loop_angle_sum(loop, r)
    return TWO_PI - sums


def triangle_solid_angle(p1, p2, p3, r, signed: bool = False) -> ArrayOrFloat:
    """Closed-form solid angle of a straight-sided triangle seen from r.

    Reported in [0, 4pi) to agree with `solid_angle_classic`; `signed=True`
    keeps the raw value in (-2pi, 2pi].
    """
    p1, p2, p3, r = (np.asarray(x, dtype=float) for x in (p1, p2, p3, r))
    u, v, w = r - p1, r - p2, r - p3
    un, vn, wn = norm3(u), norm3(v), norm3(w)

    numerator = dot3(cross3(u, v), w)
    denominator = un * vn * wn + dot3(u, v) * wn + dot3(v, w) * un + dot3(w, u) * vn

    scale = np.maximum(np.maximum(un, vn), wn)
    edge = np.maximum(np.maximum(norm3(p2 - p1), norm3(p3 - p1)), norm3(p3 - p2))
    area2 = norm3(cross3(p2 - p1, p3 - p1))
    tiny = EPS_BOUNDARY_REL * scale ** 3
    degenerate = ((np.abs(numerator) <= tiny) & (np.abs(denominator) <= tiny)) | (area2 <= EPS_BOUNDARY_REL * edge ** 2)
    if np.any(degenerate):
        raise DegenerateTriangle("Triangle is degenerate or the apex coincides with its edges")

    omega = 2.0 * np.arctan2(numerator + 0.0, denominator)
    if not signed:
        omega = np.where(omega < 0.0, omega + FOUR_PI, omega)
    return float(omega) if np.ndim(omega) == 0 else omega


def potential(boundary: BoundarySet, r, threads: Optional[int] = 1) -> ArrayOrFloat:
    batch = evaluate_field(boundary, r, want_gradient=False, threads=threads)
    raise_on_boundary(batch)
    return _single_or_batch(r, batch.potential)


def loop_contributions(boundary: BoundarySet, r) -> np.ndarray:
    """Per-loop terms -I_w * S_w, shape (N, loops)."""
    batch = evaluate_field(boundary, r, want_gradient=False, include_loop_sums=True)
    raise_on_boundary(batch)
    return -batch.loop_sums * boundary.currents[None, :]


def evaluate_omega(boundary: BoundarySet, r, convention: PotentialConvention = PotentialConvention.POTENTIAL,
                   threads: Optional[int] = 1) -> ArrayOrFloat:
    check_convention(boundary, convention)
    values = potential(boundary, r, threads=threads)
    return values + TWO_PI if convention == PotentialConvention.CLASSIC else values


def check_convention(boundary: BoundarySet, convention: PotentialConvention) -> None:
    if convention == PotentialConvention.CLASSIC and not boundary.is_single_unit_loop:
        raise ConventionError("The classic solid angle needs exactly one loop with current 1; use the potential convention")


def sample_field(boundary: BoundarySet, r, with_hessian: bool = False) -> FieldSample:
    batch = evaluate_field(boundary, r, want_hessian=with_hessian)
    raise_on_boundary(batch)
    return FieldSample(
        omega=float(batch.potential[0]),
        grad=batch.gradient[0],
        hessian=batch.hessian[0] if with_hessian else None,
    )


def wrap_four_pi(delta: ArrayOrFloat) -> ArrayOrFloat:
    """Map an angle difference into [-2pi, 2pi) so 4pi sheet jumps compare as equal."""
    return np.mod(np.asarray(delta) + TWO_PI, FOUR_PI) - TWO_PI

