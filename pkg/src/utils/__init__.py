from .file_handler import FileHandler
from .validators import Validators

__all__ = ['FileHandler', 'Validators']
