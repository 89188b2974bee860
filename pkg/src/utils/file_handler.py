import os
import glob
from pathlib import Path
from typing import List

from ..cli.documents import Document, parse_document

FIXTURES_DIR = Path(__file__).resolve().parents[2] / "fixtures"


class FileHandler:
    """Utility class for document files"""

    @staticmethod
    def read_text(file_path: str) -> str:
        if not os.path.exists(file_path):
            raise FileNotFoundError(f"Document not found: {file_path}")
        with open(file_path, 'r', encoding='utf-8') as f:
            return f.read()

    @staticmethod
    def read_document(file_path: str) -> Document:
        """Read and parse a document; raises FileNotFoundError or ParseError"""
        return parse_document(FileHandler.read_text(file_path))

    @staticmethod
    def get_fixtures_dir() -> Path:
        return FIXTURES_DIR

    @staticmethod
    def fixture_path(name: str) -> str:
        return str(FIXTURES_DIR / name)

    @staticmethod
    def get_documents_from_folder(folder_path: str, extension: str) -> List[str]:
        """Sorted ``*.extension`` files of a folder"""
        if not os.path.isdir(folder_path):
            raise FileNotFoundError(f"Folder does not exist: {folder_path}")
        return sorted(glob.glob(os.path.join(folder_path, f"*.{extension}")))
