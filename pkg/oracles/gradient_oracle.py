"""Independent forms of the segment field, for cross-checking the kernel."""
from decimal import Decimal, getcontext
from typing import Sequence

import numpy as np

from core.exceptions import ApexOnBoundaryLine

getcontext().prec = 50


def biot_savart_endpoint_form(p_i, p_next, r) -> np.ndarray:
    """-|v - w| (v x w)(cos xi + cos zeta) / |v x w|^2.

    xi is the angle at p_i between the segment and the line to r, zeta the
    same at p_next, measured from the other end.
    """
    p_i, p_next, r = (np.asarray(x, dtype=float) for x in (p_i, p_next, r))
    v, w = r - p_i, r - p_next
    d = p_next - p_i
    length = float(np.linalg.norm(d))
    c = np.cross(v, w)
    height = float(np.linalg.norm(c)) / length
    if height <= 1e-9 * length:
        raise ApexOnBoundaryLine(detail="Apex is on the segment's line")

    along = d / length
    cos_xi = float(np.dot(along, v)) / float(np.linalg.norm(v))
    cos_zeta = -float(np.dot(along, w)) / float(np.linalg.norm(w))
    return -length * c * (cos_xi + cos_zeta) / float(np.dot(c, c))


def _d(values) -> list:
    return [Decimal(repr(float(x))) for x in values]


def _dot(a, b) -> Decimal:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _cross(a, b) -> list:
    return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]


def direct_difference_gradient(p_i, p_next, r) -> np.ndarray:
    """-(v - w).(v/|v| - w/|w|) (v x w) / |v x w|^2 evaluated in 50-digit decimals."""
    p, q, x = _d(p_i), _d(p_next), _d(r)
    v = [x[k] - p[k] for k in range(3)]
    w = [x[k] - q[k] for k in range(3)]
    lv, lw = _dot(v, v).sqrt(), _dot(w, w).sqrt()
    c = _cross(v, w)
    cc = _dot(c, c)
    if cc == 0:
        raise ApexOnBoundaryLine(detail="Apex is on the segment's line")
    diff = [v[k] - w[k] for k in range(3)]
    ends = [v[k] / lv - w[k] / lw for k in range(3)]
    scale = -_dot(diff, ends) / cc
    return np.array([float(scale * c[k]) for k in range(3)])


def _vertex_term(x: np.ndarray, v: np.ndarray) -> np.ndarray:
    c = np.cross(x, v)
    return float(np.dot(x, v)) * c / (float(np.linalg.norm(v)) * float(np.dot(c, c)))


def per_vertex_gradient(vertices: Sequence, r, current: float = 1.0) -> np.ndarray:
    """Loop field regrouped by vertex: sum over i of T(a_i, v_i) - T(b_i, v_i).

    a_i is the incoming segment, b_i the outgoing one and v_i = r - p_i, with
    T(x, v) = (x.v)(x cross v) / (|v| |x cross v|^2).
    """
    pts = np.asarray(vertices, dtype=float)
    r = np.asarray(r, dtype=float)
    total = np.zeros(3)
    for i in range(len(pts)):
        a = pts[i] - pts[i - 1]
        b = pts[(i + 1) % len(pts)] - pts[i]
        v = r - pts[i]
        total += _vertex_term(a, v) - _vertex_term(b, v)
    return current * total
