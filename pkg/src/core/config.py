import yaml
import os
import copy
from typing import Dict, Any, Optional

BUDGET_ENV_VAR = "WALDCHECK_BUDGET"

DEFAULT_CONFIG: Dict[str, Any] = {
    'verification': {
        'budget': 20000,
        'check_universality': False,
        'max_witnesses': 5,
    },
    'backends': {
        'default': 'pset:2',
        'pset': {'n_max': 2},
        'vect': {'p': 2, 'd_max': 1},
    },
    'representations': {
        'component_bound': {'pset': 2, 'vect': 1},
        'max_vertices': 4,
        'max_arrows': 4,
    },
    'logging': {
        'level': 'WARNING',
        'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
    },
    'output': {
        'format': 'text',
    },
}


class ConfigManager:
    """Manages verification configuration from YAML file"""

    def __init__(self, config_path: Optional[str] = "config.yaml"):
        self.config_path = config_path
        self._config = None
        self.load_config()

    def load_config(self) -> Dict[str, Any]:
        """Load configuration from YAML file, falling back to defaults"""
        if self.config_path is None:
            self._config = copy.deepcopy(DEFAULT_CONFIG)
            return self._config
        try:
            with open(self.config_path, 'r') as f:
                loaded = yaml.safe_load(f) or {}
        except FileNotFoundError:
            if self.config_path == "config.yaml":
                self._config = copy.deepcopy(DEFAULT_CONFIG)
                return self._config
            raise FileNotFoundError(f"Configuration file {self.config_path} not found")
        except yaml.YAMLError as e:
            raise ValueError(f"Error parsing configuration file: {e}")
        if not isinstance(loaded, dict):
            raise ValueError(f"Configuration file {self.config_path} must contain a mapping")
        self._config = _merge(copy.deepcopy(DEFAULT_CONFIG), loaded)
        return self._config

    @property
    def config(self) -> Dict[str, Any]:
        """Get the loaded configuration"""
        if self._config is None:
            self.load_config()
        return self._config

    def get_verification_config(self) -> Dict[str, Any]:
        """Get verification settings"""
        return self.config.get('verification', {})

    def get_backends_config(self) -> Dict[str, Any]:
        """Get backend bounds"""
        return self.config.get('backends', {})

    def get_representations_config(self) -> Dict[str, Any]:
        """Get representation category bounds"""
        return self.config.get('representations', {})

    def get_logging_config(self) -> Dict[str, Any]:
        return self.config.get('logging', {})

    def get_output_config(self) -> Dict[str, Any]:
        return self.config.get('output', {})

    def get_budget(self) -> Optional[int]:
        """Get the enumeration budget; WALDCHECK_BUDGET wins over the file.

        A budget of None means unlimited.
        """
        raw = os.environ.get(BUDGET_ENV_VAR)
        if raw is not None and raw.strip():
            try:
                budget = int(raw)
            except ValueError:
                raise ValueError(f"{BUDGET_ENV_VAR} must be an integer, got {raw!r}")
        else:
            budget = self.get_verification_config().get('budget', 20000)
        if budget is not None and budget < 0:
            raise ValueError(f"Budget must be non-negative, got {budget}")
        return budget

    def check_universality(self) -> bool:
        return bool(self.get_verification_config().get('check_universality', False))

    def get_max_witnesses(self) -> int:
        return self.get_verification_config().get('max_witnesses', 5)

    def get_default_backend(self) -> str:
        return self.get_backends_config().get('default', 'pset:2')

    def get_component_bound(self, backend_kind: str) -> int:
        """Get per-vertex object bound for representation categories"""
        bounds = self.get_representations_config().get('component_bound', {})
        return bounds.get(backend_kind, 2 if backend_kind == 'pset' else 1)

    def get_quiver_limits(self) -> Dict[str, int]:
        rep = self.get_representations_config()
        return {
            'max_vertices': rep.get('max_vertices', 4),
            'max_arrows': rep.get('max_arrows', 4),
        }

    def get_output_format(self) -> str:
        return self.get_output_config().get('format', 'text')


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            base[key] = _merge(base[key], value)
        else:
            base[key] = value
    return base
