import argparse

from loguru import logger

from core.options import scene_options, solver_options
from core.router import CommandRouter
from dependencies.scene import get_boundary_set, get_solver_config
from services.surface_service import trace_principal_lines
from storage.obj_store import read_mesh, write_polylines

router = CommandRouter("trace", help="Trace principal curvature lines over a surface")
scene_options(router)
router.argument("--surface", required=True, help="OBJ written by `surface`")
router.argument("--family", type=int, choices=[1, 2], default=1)
router.argument("--seed-spacing", type=float, required=True)
router.argument("--step", type=float, required=True)
router.argument("--max-steps", type=int, default=500)
router.argument("--omega-c", type=float, default=None, help="Level to stay on (default: the mesh's, else median vertex potential)")
solver_options(router)
router.argument("--out", required=True, help="Output OBJ of polylines")


@router.command()
def trace(args: argparse.Namespace) -> int:
    boundary = get_boundary_set(args)
    mesh = read_mesh(args.surface)
    cfg = get_solver_config(args, boundary)
    lines = trace_principal_lines(
        boundary, mesh, args.family, args.seed_spacing, args.step, args.max_steps, cfg,
        omega_c=args.omega_c, threads=args.threads,
    )
    write_polylines(args.out, [(f"family_{args.family}", lines)])
    logger.info(f"Wrote {len(lines)} line(s) to {args.out}")
    return 0
