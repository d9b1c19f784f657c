import argparse

from core.router import CommandRouter
from services.validation_service import run_validate

router = CommandRouter(
    "validate",
    help="Run the built-in acceptance suite",
    description="Analytic and cross-method checks on self-contained scenes; exit 0 iff all pass.",
)
router.argument("--only", action="append", default=None, help="Run only checks whose name contains this text")


@router.command()
def validate(args: argparse.Namespace) -> int:
    return run_validate(threads=args.threads, only=args.only)
