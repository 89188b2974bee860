from typing import Dict, Optional, Tuple
import os

from ..category.backends import backend_from_spec
from ..category.quiver import Quiver

OUTPUT_FORMATS = ("text", "records")


class Validators:
    """Utility class for various validations"""

    @staticmethod
    def validate_file_path(file_path: str) -> Tuple[bool, Optional[str]]:
        """
        Validate if file path exists and is accessible

        Returns:
            Tuple of (is_valid, error_message)
        """
        if not file_path:
            return False, "File path is empty"

        if not os.path.exists(file_path):
            return False, f"File does not exist: {file_path}"

        if os.path.isdir(file_path):
            return False, f"Path is a directory: {file_path}"

        if not os.access(file_path, os.R_OK):
            return False, f"File is not readable: {file_path}"

        return True, None

    @staticmethod
    def validate_backend_spec(spec: str) -> Tuple[bool, Optional[str]]:
        """
        Validate a backend spec such as 'pset:2' or 'vect:2:1'

        Returns:
            Tuple of (is_valid, error_message)
        """
        if not spec:
            return False, "Backend spec is empty"

        try:
            backend_from_spec(spec)
        except ValueError as e:
            return False, str(e)

        return True, None

    @staticmethod
    def validate_budget(budget: Optional[int]) -> Tuple[bool, Optional[str]]:
        if budget is None:
            return True, None
        if budget < 0:
            return False, f"Budget must be non-negative, got {budget}"
        return True, None

    @staticmethod
    def validate_quiver_limits(quiver: Quiver, limits: Dict[str, int]) -> Tuple[bool, Optional[str]]:
        """
        Validate quiver size against the representation limits

        Returns:
            Tuple of (is_valid, error_message)
        """
        max_vertices = limits.get('max_vertices')
        max_arrows = limits.get('max_arrows')

        if max_vertices is not None and len(quiver.vertices) > max_vertices:
            return False, f"Too many vertices: {len(quiver.vertices)}. Maximum allowed: {max_vertices}"

        if max_arrows is not None and len(quiver.arrows) > max_arrows:
            return False, f"Too many arrows: {len(quiver.arrows)}. Maximum allowed: {max_arrows}"

        return True, None

    @staticmethod
    def validate_output_format(format: str) -> Tuple[bool, Optional[str]]:
        if format not in OUTPUT_FORMATS:
            return False, f"Unknown output format: {format}. Valid: {', '.join(OUTPUT_FORMATS)}"
        return True, None
