import argparse
from typing import List, Optional

import numpy as np
from loguru import logger

from core.options import scene_options, solver_options
from core.router import CommandRouter
from dependencies.scene import get_boundary_set, get_solver_config
from schemas.enum import CurvatureMethod
from schemas.schemas import CurvatureFrame
from services.curvature_service import mesh_stencil_curvatures, principal_direction_field
from services.solid_angle_service import evaluate_field
from storage.csv_store import write_rows
from storage.obj_store import read_mesh

HEADER = ["x", "y", "z", "k1", "k2", "d1x", "d1y", "d1z", "d2x", "d2y", "d2z", "umbilic_flag"]

router = CommandRouter(
    "curvature",
    help="Principal curvatures and directions on a surface",
    description="tensor: per vertex from the field derivatives; stencil: per face from the six-point quadratic fit.",
)
scene_options(router)
router.argument("--surface", required=True, help="OBJ written by `surface`")
router.argument("--method", choices=[m.value for m in CurvatureMethod], default=CurvatureMethod.TENSOR.value)
router.argument("--omega-c", type=float, default=None, help="Level for re-projecting face centroids (stencil)")
solver_options(router)
router.argument("--out", required=True, help="Output CSV")


def frame_rows(points: np.ndarray, frames: List[Optional[CurvatureFrame]]) -> list:
    rows = []
    for p, frame in zip(points, frames):
        if frame is None:
            rows.append([*p] + [None] * 9)
            continue
        rows.append([*p, frame.kappa1, frame.kappa2, *frame.dir1, *frame.dir2, int(frame.umbilic)])
    return rows


@router.command()
def curvature(args: argparse.Namespace) -> int:
    boundary = get_boundary_set(args)
    mesh = read_mesh(args.surface)

    if CurvatureMethod(args.method) == CurvatureMethod.STENCIL:
        omega_c = args.omega_c if args.omega_c is not None else mesh.omega_c
        if omega_c is None:
            omega_c = float(np.nanmedian(evaluate_field(boundary, mesh.vertices, want_gradient=False).potential))
        cfg = get_solver_config(args, boundary, omega_c=omega_c)
        points, frames, _ = mesh_stencil_curvatures(boundary, mesh, cfg, threads=args.threads)
    else:
        points = mesh.vertices
        frames = principal_direction_field(boundary, points, threads=args.threads)

    missing = sum(frame is None for frame in frames)
    if missing:
        logger.warning(f"{missing} row(s) without a frame (on a wire or vanishing gradient)")
    write_rows(args.out, HEADER, frame_rows(points, frames))
    logger.info(f"Wrote {len(frames)} curvature rows to {args.out}")
    return 0
