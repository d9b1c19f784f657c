import argparse

from loguru import logger

from core.options import scene_options
from core.router import CommandRouter
from dependencies.scene import get_boundary_set
from schemas.enum import PotentialConvention
from services.solid_angle_service import TWO_PI, check_convention, evaluate_field
from storage.csv_store import read_points, write_rows

router = CommandRouter(
    "eval",
    help="Evaluate potential and gradient at points",
    description="Writes x,y,z,potential,omega_classic,gx,gy,gz. omega_classic is filled only for a single loop of current 1.",
)
scene_options(router)
router.argument("--points", required=True, help="CSV of x,y,z rows")
router.argument("--out", required=True, help="Output CSV")
router.argument("--convention", choices=[c.value for c in PotentialConvention], default=PotentialConvention.POTENTIAL.value,
                help="classic requires a single loop with current 1")

@router.command()
def eval_points(args: argparse.Namespace) -> int:
    boundary = get_boundary_set(args)
    check_convention(boundary, PotentialConvention(args.convention))
    points = read_points(args.points)

    batch = evaluate_field(boundary, points, threads=args.threads)
    classic = boundary.is_single_unit_loop
    if batch.on_boundary.any():
        logger.warning(f"{int(batch.on_boundary.sum())} point(s) lie on a boundary line; their rows are blank")

    rows = []
    for p, value, grad, bad in zip(points, batch.potential, batch.gradient, batch.on_boundary):
        if bad:
            rows.append([*p, None, None, None, None, None])
            continue
        rows.append([*p, value, value + TWO_PI if classic else None, *grad])
    write_rows(args.out, ["x", "y", "z", "potential", "omega_classic", "gx", "gy", "gz"], rows)
    logger.info(f"Wrote {len(rows)} samples to {args.out}")
    return 0
