import argparse

from loguru import logger

from core.options import grid_options, scene_options
from core.router import CommandRouter
from dependencies.scene import get_boundary_set, get_seed_grid
from services.projection_service import scan_potential
from services.solid_angle_service import evaluate_field
from services.surface_service import seed_points
from storage.csv_store import write_rows

router = CommandRouter(
    "scan",
    help="Potential range over a seed grid",
    description="Samples the potential to help choose --omega-c. No theoretical bound is implied.",
)
scene_options(router)
grid_options(router)
router.argument("--out", help="Optional CSV of x,y,z,potential per seed")


@router.command()
def scan(args: argparse.Namespace) -> int:
    boundary = get_boundary_set(args)
    seeds = seed_points(get_seed_grid(args))
    summary = scan_potential(boundary, seeds, threads=args.threads)

    print(f"samples      {summary.sampled}")
    print(f"on boundary  {summary.on_boundary}")
    print(f"min          {summary.minimum:.17g}")
    print(f"max          {summary.maximum:.17g}")
    for q, value in summary.quantiles:
        print(f"q{q:<11.2f} {value:.17g}")

    if args.out:
        values = evaluate_field(boundary, seeds, want_gradient=False, threads=args.threads).potential
        write_rows(args.out, ["x", "y", "z", "potential"], [[*p, v] for p, v in zip(seeds, values)])
        logger.info(f"Wrote {len(seeds)} samples to {args.out}")
    return 0
