from .config import ConfigManager
from .exceptions import (
    WaldcheckError,
    CompositionError,
    TruncationOverflow,
    ParseError,
    NaturalityError,
    RepresentationError,
    CleavageError,
    QuiverError,
    NotLeftRootedError,
)
from .logging_setup import configure_logging

__all__ = [
    'ConfigManager', 'configure_logging',
    'WaldcheckError', 'CompositionError', 'TruncationOverflow', 'ParseError',
    'NaturalityError', 'RepresentationError', 'CleavageError', 'QuiverError',
    'NotLeftRootedError',
]
