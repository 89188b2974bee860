import json
from typing import Any, Dict, List

import pandas as pd

from .base_handler import BaseOutputHandler


class TextHandler(BaseOutputHandler):
    """Handler for human-readable text reports"""

    def to_string(self, report: Dict[str, Any]) -> str:
        sections = []

        status = report.get('status', 'unknown')
        marker = self.STATUS_MARKERS.get(status, '')
        sections.append(f"command: {report.get('command', 'unknown')}")
        sections.append(f"status: {status} {marker}".rstrip())
        sections.append(f"exit_code: {report.get('exit_code')}")

        for key, value in report.get('summary', {}).items():
            sections.append(f"{key}: {self._value(value)}")

        for name, rows in report.get('tables', {}).items():
            sections.append("")
            sections.append(f"== {name} ==")
            sections.append(self._table(rows))

        return "\n".join(sections) + "\n"

    def format_single_result(self, record: Dict[str, Any]) -> str:
        """Format a single record as 'key=value' pairs"""
        return " ".join(f"{key}={self._value(value)}" for key, value in record.items())

    @staticmethod
    def _value(value: Any) -> str:
        if isinstance(value, bool):
            return "yes" if value else "no"
        if value is None:
            return "-"
        if isinstance(value, (list, tuple, dict)):
            return json.dumps(value, sort_keys=True, ensure_ascii=False)
        return str(value)

    def _table(self, rows: List[Dict[str, Any]]) -> str:
        if not rows:
            return "(empty)"
        df = pd.DataFrame([{key: self._value(value) for key, value in row.items()} for row in rows])
        return df.fillna("-").to_string(index=False)
