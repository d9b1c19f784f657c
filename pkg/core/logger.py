import sys
from typing import Optional
from loguru import logger

from core.config import OMEGASURF_LOG_FILE, OMEGASURF_LOG_LEVEL

LOG_FORMAT = "<green>{time:HH:mm:ss.SSS}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan> - <level>{message}</level>"


def configure_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """Route loguru to stderr (and optionally a rotating file). Stdout stays clean for data."""
    logger.remove()
    logger.add(sys.stderr, level=(level or OMEGASURF_LOG_LEVEL).upper(), format=LOG_FORMAT)

    target = log_file or OMEGASURF_LOG_FILE
    if target:
        logger.add(target, level="DEBUG", rotation="10 MB", retention=3)
