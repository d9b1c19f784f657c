import argparse

from loguru import logger

from core.options import scene_options, solver_options
from core.router import CommandRouter
from dependencies.scene import get_boundary_set, get_solver_config, parse_triple
from services.surface_service import section_curves
from storage.obj_store import write_polylines

router = CommandRouter(
    "sections",
    help="Level curves of the potential in a plane",
    description="Writes one OBJ object of polylines per --omega value (2pi-free potential convention).",
)
scene_options(router)
router.argument("--plane-point", default="0,0,0")
router.argument("--plane-normal", default="1,0,0")
router.argument("--omega", type=float, action="append", required=True, help="Potential value; repeat for several")
router.argument("--resolution", type=int, default=64, help="Seeds per side of the in-plane grid")
router.argument("--extent", type=float, default=None, help="Half-width of the in-plane grid")
solver_options(router)
router.argument("--out", required=True, help="Output OBJ of polylines")


@router.command()
def sections(args: argparse.Namespace) -> int:
    boundary = get_boundary_set(args)
    cfg = get_solver_config(args, boundary, omega_c=args.omega[0])
    curves = section_curves(
        boundary,
        parse_triple(args.plane_point, "--plane-point"),
        parse_triple(args.plane_normal, "--plane-normal"),
        args.omega,
        cfg,
        extent=args.extent,
        resolution=args.resolution,
        threads=args.threads,
    )
    groups = [(f"omega_{omega:.10g}", lines) for omega, lines in zip(args.omega, curves)]
    write_polylines(args.out, groups)
    logger.info(f"Wrote {sum(len(lines) for lines in curves)} polyline(s) to {args.out}")
    return 0
