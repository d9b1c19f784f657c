from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from core.config import MESH_STRETCH_LIMIT
from schemas.enum import CommandEnum, TargetKind
from schemas.schemas import BoundarySet

Triple = Tuple[float, float, float]


class SolverConfig(BaseModel):
    """Newton settings. Length-scaled defaults stay None until resolved against a scene."""

    model_config = ConfigDict(frozen=True)

    omega_c: float = 0.0
    damping: float = Field(default=1.0, gt=0, le=1)
    max_step: Optional[float] = Field(default=None, gt=0)
    tol_omega: float = Field(default=1e-10, gt=0)
    max_iterations: int = Field(default=100, ge=1)
    grad_floor: Optional[float] = Field(default=None, ge=0)
    escape_radius: Optional[float] = Field(default=None, gt=0)

    def resolve(self, boundary: BoundarySet) -> "SolverConfig":
        diagonal = boundary.diagonal
        return self.model_copy(update={
            "max_step": self.max_step if self.max_step is not None else 0.25 * diagonal,
            "grad_floor": self.grad_floor if self.grad_floor is not None else 1e-14 / diagonal,
            "escape_radius": self.escape_radius if self.escape_radius is not None else 10.0 * diagonal,
        })

    @property
    def is_resolved(self) -> bool:
        return None not in (self.max_step, self.grad_floor, self.escape_radius)


class SeedGridSpec(BaseModel):
    """Lattice over a rectangle spanned from `origin` by two axes, pushed `offset` along their normal."""

    model_config = ConfigDict(frozen=True)

    origin: Triple = (0.0, 0.0, 0.0)
    u_axis: Triple = (1.0, 0.0, 0.0)
    v_axis: Triple = (0.0, 1.0, 0.0)
    width: float = Field(default=1.0, gt=0)
    height: float = Field(default=1.0, gt=0)
    nx: int = Field(default=50, ge=2)
    ny: int = Field(default=50, ge=2)
    offset: float = 0.0

    @classmethod
    def from_region(cls, x0: float, y0: float, x1: float, y1: float, z: float, nx: int, ny: int, offset: float = 0.0) -> "SeedGridSpec":
        return cls(
            origin=(min(x0, x1), min(y0, y1), z),
            width=abs(x1 - x0),
            height=abs(y1 - y0),
            nx=nx,
            ny=ny,
            offset=offset,
        )

    @property
    def shape(self) -> Tuple[int, int]:
        return self.ny, self.nx


class TargetFieldSpec(BaseModel):
    kind: TargetKind = TargetKind.CONSTANT
    omega0: float = 0.0
    k: float = 0.0
    axis: Triple = (0.0, 0.0, 1.0)
    origin: Triple = (0.0, 0.0, 0.0)


class RunConfig(BaseModel):
    command: CommandEnum
    scene_path: Optional[str] = None
    out: Optional[str] = None
    report: Optional[str] = None
    threads: int = Field(default=0, ge=0)
    stretch_limit: float = Field(default=MESH_STRETCH_LIMIT, gt=1)

    @model_validator(mode="after")
    def check_paths(self):
        emitting = {CommandEnum.EVAL, CommandEnum.SURFACE, CommandEnum.SECTIONS, CommandEnum.CURVATURE, CommandEnum.TRACE}
        if self.command != CommandEnum.VALIDATE and not self.scene_path:
            raise ValueError(f"{self.command.value} needs --scene")
        if self.command in emitting and not self.out:
            raise ValueError(f"{self.command.value} needs a non-empty --out path")
        return self
