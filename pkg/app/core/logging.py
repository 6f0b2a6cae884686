import logging
import sys
from typing import Optional

from app.core.config import settings


def configure_logging(level: Optional[str] = None, fmt: Optional[str] = None) -> None:
    """Route package logs to stderr so stdout artifacts stay byte-identical."""
    logging.basicConfig(
        level=getattr(logging, (level or settings.log_level).upper(), logging.WARNING),
        format=fmt or settings.log_format,
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )
