from abc import ABC, abstractmethod
from typing import Dict, Any
import os


class BaseOutputHandler(ABC):
    """Abstract base class for report handlers.

    A report is a dict with keys command, status, exit_code, summary
    (ordered key/value pairs), tables (name -> list of row dicts) and
    records (list of dicts).
    """

    STATUS_MARKERS = {'pass': '✅', 'fail': '❌', 'inconclusive': '⚠️'}

    @abstractmethod
    def to_string(self, report: Dict[str, Any]) -> str:
        """Render a whole report"""
        pass

    @abstractmethod
    def format_single_result(self, record: Dict[str, Any]) -> Any:
        """Format a single record"""
        pass

    def save(self, report: Dict[str, Any], output_path: str) -> str:
        """Save a rendered report to file"""
        self.ensure_directory(output_path)
        with open(output_path, 'w', encoding='utf-8') as f:
            f.write(self.to_string(report))
        return output_path

    def ensure_directory(self, file_path: str):
        """Ensure directory exists for file path"""
        directory = os.path.dirname(file_path)
        if directory and not os.path.exists(directory):
            os.makedirs(directory, exist_ok=True)
