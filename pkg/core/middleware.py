import argparse
import time
from typing import Callable

from loguru import logger
from pydantic import ValidationError

from core.exceptions import EXIT_OK, EXIT_USAGE, OmegaSurfError


class CommandMiddleware:
    """Wraps every command: logs it, times it and turns errors into exit codes."""

    def dispatch(self, args: argparse.Namespace, call_next: Callable[[argparse.Namespace], int]) -> int:
        command = getattr(args, "command", None)
        logger.info(f"Command → {command}")
        started = time.perf_counter()
        try:
            code = call_next(args)
        except OmegaSurfError as exc:
            logger.error(f"{type(exc).__name__}: {exc.detail}")
            return exc.exit_code
        except ValidationError as exc:
            logger.error(f"Invalid parameters for {command}: {exc}")
            return EXIT_USAGE

        elapsed = time.perf_counter() - started
        logger.info(f"Command {command} finished in {elapsed:.2f}s with exit code {code}")
        return EXIT_OK if code is None else int(code)
