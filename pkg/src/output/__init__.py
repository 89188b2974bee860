from .base_handler import BaseOutputHandler
from .text_handler import TextHandler
from .records_handler import RecordsHandler

HANDLERS = {'text': TextHandler, 'records': RecordsHandler}


def get_handler(format: str) -> BaseOutputHandler:
    if format not in HANDLERS:
        raise ValueError(f"Unknown output format: {format}. Valid: {', '.join(HANDLERS)}")
    return HANDLERS[format]()


__all__ = ['BaseOutputHandler', 'TextHandler', 'RecordsHandler', 'get_handler']
