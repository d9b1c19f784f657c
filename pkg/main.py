import argparse
import sys
from typing import List, Optional

from commands.curvature import router as curvature_router
from commands.eval import router as eval_router
from commands.scan import router as scan_router
from commands.sections import router as sections_router
from commands.surface import router as surface_router
from commands.trace import router as trace_router
from commands.validate import router as validate_router
from core.config import OMEGASURF_LOG_LEVEL
from core.logger import configure_logging
from core.middleware import CommandMiddleware
from dependencies.scene import get_run_config

ROUTERS = [
    eval_router,
    surface_router,
    sections_router,
    curvature_router,
    trace_router,
    scan_router,
    validate_router,
]


def global_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--log-level", default=OMEGASURF_LOG_LEVEL, help="DEBUG, INFO, WARNING or ERROR")
    parent.add_argument("--log-file", default=None, help="Also log to this file (rotated)")
    parent.add_argument("--threads", type=int, default=0, help="Worker threads; 0 = OMEGASURF_THREADS or all cores")
    parent.add_argument("--current", action="append", metavar="LABEL=VALUE", help="Override a loop's current; repeatable")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omegasurf",
        description="Constant solid angle surfaces spanned by closed boundary wires. "
                    "Solver commands work in the 2pi-free potential convention.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    parents = [global_options()]
    for router in ROUTERS:
        router.mount(subparsers, parents)
    return parser


def handle(args: argparse.Namespace) -> int:
    args.run = get_run_config(args)
    return args.endpoint(args)


def cli(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level, args.log_file)
    return CommandMiddleware().dispatch(args, handle)


if __name__ == "__main__":
    sys.exit(cli())
