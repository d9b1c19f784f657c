import argparse
from typing import Dict, List, Optional

from loguru import logger

from core.config import MESH_STRETCH_LIMIT
from core.exceptions import SchemaError
from schemas.enum import CommandEnum
from schemas.schemas import BoundarySet
from schemas.solver_schema import RunConfig, SeedGridSpec, SolverConfig
from services.boundary_service import with_currents
from storage.scene_store import load_scene


def parse_current_overrides(items: Optional[List[str]]) -> Dict[str, float]:
    overrides: Dict[str, float] = {}
    for item in items or []:
        label, sep, value = item.partition("=")
        if not sep or not label:
            raise SchemaError(f"--current expects LABEL=VALUE, got '{item}'")
        try:
            overrides[label] = float(value)
        except ValueError as exc:
            raise SchemaError(f"--current value for '{label}' is not a number: '{value}'") from exc
    return overrides


def parse_triple(text: str, name: str) -> tuple:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    try:
        values = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise SchemaError(f"{name} must be comma-separated numbers, got '{text}'") from exc
    if len(values) != 3:
        raise SchemaError(f"{name} needs 3 numbers, got {len(values)}")
    return values


def get_run_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=CommandEnum(args.command),
        scene_path=getattr(args, "scene", None),
        out=getattr(args, "out", None),
        report=getattr(args, "report", None),
        threads=args.threads or 0,
        stretch_limit=getattr(args, "stretch_limit", MESH_STRETCH_LIMIT),
    )


def get_boundary_set(args: argparse.Namespace) -> BoundarySet:
    boundary = load_scene(args.scene)
    return with_currents(boundary, parse_current_overrides(getattr(args, "current", None)))


def get_solver_config(args: argparse.Namespace, boundary: BoundarySet, omega_c: Optional[float] = None) -> SolverConfig:
    cfg = SolverConfig(
        omega_c=omega_c if omega_c is not None else (getattr(args, "omega_c", None) or 0.0),
        damping=getattr(args, "damping", 1.0),
        max_step=getattr(args, "max_step", None),
        tol_omega=getattr(args, "tol", 1e-10),
        max_iterations=getattr(args, "max_iterations", 100),
    ).resolve(boundary)
    logger.debug(f"Solver: {cfg.model_dump()}")
    return cfg


def get_seed_grid(args: argparse.Namespace) -> SeedGridSpec:
    region = [p for p in args.grid_region.replace(" ", "").split(",") if p]
    if len(region) != 5:
        raise SchemaError(f"--grid-region needs x0,y0,x1,y1,z, got '{args.grid_region}'")
    try:
        x0, y0, x1, y1, z = (float(p) for p in region)
    except ValueError as exc:
        raise SchemaError(f"--grid-region must be numeric, got '{args.grid_region}'") from exc
    return SeedGridSpec.from_region(x0, y0, x1, y1, z, args.grid_nx, args.grid_ny, getattr(args, "offset", 0.0))
