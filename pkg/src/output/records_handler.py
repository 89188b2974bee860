import json
from typing import Any, Dict

from .base_handler import BaseOutputHandler


class RecordsHandler(BaseOutputHandler):
    """Handler for machine-readable reports: one JSON object per line"""

    def to_string(self, report: Dict[str, Any]) -> str:
        head = {
            'command': report.get('command'),
            'status': report.get('status'),
            'exit_code': report.get('exit_code'),
            **report.get('summary', {}),
        }
        lines = [self.format_single_result(head)]
        lines.extend(self.format_single_result(record) for record in report.get('records', []))
        return "\n".join(lines) + "\n"

    def format_single_result(self, record: Dict[str, Any]) -> str:
        return json.dumps(_plain(record), sort_keys=True, ensure_ascii=False)


def _plain(value: Any) -> Any:
    """JSON-friendly copy: tuple keys and frozensets become strings and sorted lists"""
    if isinstance(value, dict):
        return {str(k) if not isinstance(k, str) else k: _plain(v) for k, v in value.items()}
    if isinstance(value, (frozenset, set)):
        return sorted(_plain(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value
