from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from core.config import EPS_BOUNDARY_REL, EPS_DEGENERATE_REL
from core.exceptions import DegenerateInput
from schemas.enum import DiagnosticKind, ProjectionStatus, Severity


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class BoundaryLoop:
    """Closed oriented polyline (last vertex connects back to the first) with a current weight."""

    vertices: np.ndarray
    current: float = 1.0
    label: str = ""

    def __post_init__(self):
        vertices = np.asarray(self.vertices, dtype=float)
        if vertices.ndim != 2 or vertices.shape[1] != 3:
            raise DegenerateInput(f"Loop '{self.label}' vertices must be an (N, 3) array, got shape {vertices.shape}")
        if len(vertices) < 3:
            raise DegenerateInput(f"Loop '{self.label}' needs at least 3 vertices, got {len(vertices)}")
        if not np.all(np.isfinite(vertices)) or not np.isfinite(self.current):
            raise DegenerateInput(f"Loop '{self.label}' has non-finite vertices or current")
        object.__setattr__(self, "vertices", _frozen(vertices))
        object.__setattr__(self, "current", float(self.current))

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def segments(self) -> np.ndarray:
        """Segment vectors p[i+1] - p[i], cyclic."""
        return np.roll(self.vertices, -1, axis=0) - self.vertices

    @property
    def vector_area(self) -> np.ndarray:
        """Half the sum of p[i] x p[i+1]; points along +normal for a CCW planar loop."""
        p = self.vertices - self.vertices.mean(axis=0)
        return 0.5 * np.cross(p, np.roll(p, -1, axis=0)).sum(axis=0)


@dataclass(frozen=True, eq=False)
class BoundarySet:
    """Immutable field source. Flattened per-vertex arrays are built once here."""

    loops: Tuple[BoundaryLoop, ...]
    bbox_min: np.ndarray = field(init=False, repr=False)
    bbox_max: np.ndarray = field(init=False, repr=False)
    diagonal: float = field(init=False)
    vertices: np.ndarray = field(init=False, repr=False)
    incoming: np.ndarray = field(init=False, repr=False)
    outgoing: np.ndarray = field(init=False, repr=False)
    vertex_current: np.ndarray = field(init=False, repr=False)
    vertex_normal: np.ndarray = field(init=False, repr=False)
    vertex_loop: np.ndarray = field(init=False, repr=False)
    vertex_index: np.ndarray = field(init=False, repr=False)
    loop_slices: Tuple[slice, ...] = field(init=False, repr=False)

    def __post_init__(self):
        loops = tuple(self.loops)
        if not loops:
            raise DegenerateInput("A boundary set needs at least one loop")
        object.__setattr__(self, "loops", loops)

        vertices = np.concatenate([loop.vertices for loop in loops])
        incoming = np.concatenate([loop.vertices - np.roll(loop.vertices, 1, axis=0) for loop in loops])
        outgoing = np.concatenate([loop.segments for loop in loops])
        currents = np.concatenate([np.full(len(loop), loop.current) for loop in loops])
        normals = np.concatenate([np.tile(loop.vector_area, (len(loop), 1)) for loop in loops])
        loop_ids = np.concatenate([np.full(len(loop), w, dtype=np.int64) for w, loop in enumerate(loops)])
        local_ids = np.concatenate([np.arange(len(loop), dtype=np.int64) for loop in loops])

        offsets = np.cumsum([0] + [len(loop) for loop in loops])
        slices = tuple(slice(int(offsets[w]), int(offsets[w + 1])) for w in range(len(loops)))

        bbox_min, bbox_max = vertices.min(axis=0), vertices.max(axis=0)
        diagonal = float(np.linalg.norm(bbox_max - bbox_min))
        if diagonal == 0.0:
            raise DegenerateInput("Boundary set collapses to a single point")

        for name, value in (
            ("bbox_min", _frozen(bbox_min)),
            ("bbox_max", _frozen(bbox_max)),
            ("diagonal", diagonal),
            ("vertices", _frozen(vertices)),
            ("incoming", _frozen(incoming)),
            ("outgoing", _frozen(outgoing)),
            ("vertex_current", _frozen(currents)),
            ("vertex_normal", _frozen(normals)),
            ("vertex_loop", loop_ids),
            ("vertex_index", local_ids),
            ("loop_slices", slices),
        ):
            if isinstance(value, np.ndarray):
                value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def currents(self) -> np.ndarray:
        return np.array([loop.current for loop in self.loops])

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.bbox_min + self.bbox_max)

    @property
    def eps_boundary(self) -> float:
        return EPS_BOUNDARY_REL * self.diagonal

    @property
    def eps_degenerate(self) -> float:
        return EPS_DEGENERATE_REL * self.diagonal

    @property
    def is_single_unit_loop(self) -> bool:
        return len(self.loops) == 1 and self.loops[0].current == 1.0


@dataclass(frozen=True)
class Diagnostic:
    kind: DiagnosticKind
    severity: Severity
    loop_index: int
    message: str
    vertex_index: Optional[int] = None


@dataclass(frozen=True, eq=False)
class FieldSample:
    omega: float
    grad: np.ndarray
    hessian: Optional[np.ndarray] = None


@dataclass(eq=False)
class FieldBatch:
    """Vectorized evaluation result. Rows flagged on_boundary hold NaN."""

    potential: Optional[np.ndarray]
    gradient: Optional[np.ndarray]
    hessian: Optional[np.ndarray]
    hessian_asymmetry: Optional[np.ndarray]
    on_boundary: np.ndarray
    loop_index: np.ndarray
    vertex_index: np.ndarray
    loop_sums: Optional[np.ndarray] = None


@dataclass(frozen=True, eq=False)
class ProjectionResult:
    point: np.ndarray
    iterations: int
    residual: float
    status: ProjectionStatus

    @property
    def converged(self) -> bool:
        return self.status == ProjectionStatus.CONVERGED


@dataclass(frozen=True, eq=False)
class CurvatureFrame:
    normal: np.ndarray
    beta: np.ndarray
    kappa1: float
    kappa2: float
    dir1: np.ndarray
    dir2: np.ndarray
    umbilic: bool = False

    @property
    def mean_curvature(self) -> float:
        return 0.5 * (self.kappa1 + self.kappa2)

    @property
    def gaussian_curvature(self) -> float:
        return self.kappa1 * self.kappa2

    def flipped(self) -> "CurvatureFrame":
        """Same frame with both tangent directions reversed."""
        return CurvatureFrame(self.normal, self.beta, self.kappa1, self.kappa2, -self.dir1, -self.dir2, self.umbilic)


@dataclass(frozen=True, eq=False)
class SurfaceMesh:
    vertices: np.ndarray
    faces: np.ndarray
    seed_indices: np.ndarray
    omega_c: Optional[float] = None

    @property
    def edge_lengths(self) -> np.ndarray:
        if len(self.faces) == 0:
            return np.zeros(0)
        tri = self.vertices[self.faces]
        return np.linalg.norm(tri - np.roll(tri, -1, axis=1), axis=2).ravel()


@dataclass(frozen=True)
class PotentialScan:
    sampled: int
    on_boundary: int
    minimum: float
    maximum: float
    quantiles: Tuple[Tuple[float, float], ...]
