import argparse

import numpy as np
from loguru import logger

from core.config import MESH_STRETCH_LIMIT
from core.exceptions import SchemaError
from core.options import grid_options, scene_options, solver_options
from core.router import CommandRouter
from dependencies.scene import get_boundary_set, get_seed_grid, get_solver_config, parse_triple
from schemas.enum import SeedMode, TargetKind
from schemas.schemas import ProjectionResult, SurfaceMesh
from schemas.solver_schema import TargetFieldSpec
from services.projection_service import build_target, project_cloud_variable_target, tangential_relax
from services.surface_service import build_mesh, seed_points
from storage.csv_store import read_points, write_rows
from storage.obj_store import write_mesh

router = CommandRouter(
    "surface",
    help="Project seeds onto a level set and mesh them",
    description="Solves potential(r) = omega_c (2pi-free convention: classic solid angle = potential + 2pi for one unit loop).",
)
scene_options(router)
router.argument("--omega-c", type=float, required=True, help="Target potential")
router.argument("--seeds", choices=[m.value for m in SeedMode], default=SeedMode.GRID.value)
router.argument("--seed-file", help="CSV of seed points for --seeds file")
grid_options(router)
solver_options(router)
router.argument("--stretch-limit", type=float, default=MESH_STRETCH_LIMIT)
router.argument("--target", choices=[k.value for k in TargetKind], default=TargetKind.CONSTANT.value)
router.argument("--target-k", type=float, default=0.0, help="Slope of a linear or radial target")
router.argument("--target-axis", default="0,0,1")
router.argument("--target-origin", default="0,0,0")
router.argument("--relax", type=int, default=0, help="Tangential smoothing passes")
router.argument("--relax-weight", type=float, default=0.5)
router.argument("--out", required=True, help="Output OBJ")
router.argument("--report", help="Per-seed CSV report")


@router.command()
def surface(args: argparse.Namespace) -> int:
    boundary = get_boundary_set(args)
    cfg = get_solver_config(args, boundary)
    target = build_target(TargetFieldSpec(
        kind=TargetKind(args.target),
        omega0=args.omega_c,
        k=args.target_k,
        axis=parse_triple(args.target_axis, "--target-axis"),
        origin=parse_triple(args.target_origin, "--target-origin"),
    ))

    grid = None
    if SeedMode(args.seeds) == SeedMode.FILE:
        if not args.seed_file:
            raise SchemaError("--seeds file needs --seed-file")
        seeds = read_points(args.seed_file)
    else:
        grid = get_seed_grid(args)
        seeds = seed_points(grid)

    run = args.run
    results = project_cloud_variable_target(boundary, seeds, target, cfg, threads=run.threads)

    for _ in range(args.relax):
        ok = np.array([res.converged for res in results])
        points = np.stack([res.point for res in results])
        relaxed = points.copy()
        relaxed[ok] = tangential_relax(boundary, points[ok], cfg, args.relax_weight, threads=run.threads)
        results = [
            ProjectionResult(relaxed[k], res.iterations, res.residual, res.status) for k, res in enumerate(results)
        ]

    if grid is not None:
        mesh = build_mesh(grid, results, run.stretch_limit, omega_c=args.omega_c)
    else:
        ok = np.flatnonzero([res.converged for res in results])
        mesh = SurfaceMesh(np.array([results[k].point for k in ok]).reshape(-1, 3), np.zeros((0, 3), dtype=np.int64), ok, args.omega_c)
    write_mesh(run.out, mesh)
    logger.info(f"Wrote {len(mesh.vertices)} vertices and {len(mesh.faces)} faces to {run.out}")

    if run.report:
        write_rows(run.report, ["seed", "status", "iterations", "residual"],
                   [[k, res.status.value, res.iterations, res.residual] for k, res in enumerate(results)])

    converged = sum(res.converged for res in results)
    return 0 if converged else 1
