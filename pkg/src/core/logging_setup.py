import logging
from typing import Optional

DEFAULT_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str = "WARNING", fmt: Optional[str] = None) -> None:
    """Configure root logging once for command-line use"""
    numeric = getattr(logging, str(level).upper(), None)
    if not isinstance(numeric, int):
        raise ValueError(f"Unknown logging level: {level}")
    logging.basicConfig(level=numeric, format=fmt or DEFAULT_FORMAT)
    logging.getLogger().setLevel(numeric)
