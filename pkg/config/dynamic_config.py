"""
Runtime configuration
Layers explicit overrides (command-line flags) over environment and static config
"""

import logging
import os
from typing import Any, Dict, Optional

from config.config import Config as StaticConfig

logger = logging.getLogger(__name__)

# Keys that may be overridden, with their environment names
ENV_NAMES = {
    'ring_size_cap': 'E2HOMLAB_CAP',
    'group_size_cap': 'E2HOMLAB_GROUP_CAP',
    'basis_size_cap': 'E2HOMLAB_BASIS_CAP',
    'enumeration_cap': 'E2HOMLAB_MATRIX_CAP',
    'max_degree': 'E2HOMLAB_DEGREE',
    'default_jobs': 'E2HOMLAB_JOBS',
    'random_seed': 'E2HOMLAB_SEED',
    'bar_samples': 'E2HOMLAB_SAMPLES',
    'database_path': 'E2HOMLAB_DB',
}


class RuntimeConfig:
    """Typed settings resolved as override > environment > static config"""

    def __init__(self, overrides: Optional[Dict[str, Any]] = None, static=StaticConfig):
        self.overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
        self.static = static
        self._cache = {}

    def _get_value(self, key: str, default_value: Any, value_type: type = str) -> Any:
        """Resolve a setting with type conversion"""
        if key in self._cache:
            return self._cache[key]

        raw = self.overrides.get(key)
        if raw is None and key in ENV_NAMES:
            raw = os.environ.get(ENV_NAMES[key])
        if raw is None:
            self._cache[key] = default_value
            return default_value

        try:
            if value_type == int:
                converted_value = int(raw)
            elif value_type == bool:
                converted_value = str(raw).lower() in ('true', '1', 'yes', 'on')
            else:
                converted_value = str(raw)
        except (TypeError, ValueError) as e:
            logger.error(f"Invalid value for {key}: {raw!r} ({e}); using {default_value}")
            converted_value = default_value

        self._cache[key] = converted_value
        return converted_value

    def clear_cache(self):
        """Clear resolved values"""
        self._cache.clear()

    def update_value(self, key: str, value: Any) -> bool:
        """Install an override for one key"""
        if key not in ENV_NAMES:
            return False
        self.overrides[key] = value
        self._cache.pop(key, None)
        return True

    # Caps
    @property
    def RING_SIZE_CAP(self) -> int:
        return self._get_value('ring_size_cap', self.static.RING_SIZE_CAP, int)

    @property
    def GROUP_SIZE_CAP(self) -> int:
        return self._get_value('group_size_cap', self.static.GROUP_SIZE_CAP, int)

    @property
    def BASIS_SIZE_CAP(self) -> int:
        return self._get_value('basis_size_cap', self.static.BASIS_SIZE_CAP, int)

    @property
    def ENUMERATION_CAP(self) -> int:
        return self._get_value('enumeration_cap', self.static.ENUMERATION_CAP, int)

    @property
    def MAX_DEGREE(self) -> int:
        return self._get_value('max_degree', self.static.MAX_DEGREE, int)

    # Check suite
    @property
    def DEFAULT_JOBS(self) -> int:
        return self._get_value('default_jobs', self.static.DEFAULT_JOBS, int)

    @property
    def RANDOM_SEED(self) -> int:
        return self._get_value('random_seed', self.static.RANDOM_SEED, int)

    @property
    def BAR_SAMPLES(self) -> int:
        return self._get_value('bar_samples', self.static.BAR_SAMPLES, int)

    @property
    def DATABASE_PATH(self) -> str:
        return self._get_value('database_path', self.static.DATABASE_PATH, str)

    @property
    def ARTIFACT_VERSION(self) -> str:
        return self.static.ARTIFACT_VERSION

    @property
    def SCHEMA_VERSION(self) -> str:
        return self.static.SCHEMA_VERSION


# Global instance (installed by the command line front end)
runtime_config = None


def configure(overrides: Optional[Dict[str, Any]] = None) -> RuntimeConfig:
    """Install and return a fresh runtime config"""
    global runtime_config
    runtime_config = RuntimeConfig(overrides)
    return runtime_config


def get_config():
    """Get the active runtime config instance"""
    return runtime_config if runtime_config else RuntimeConfig()
