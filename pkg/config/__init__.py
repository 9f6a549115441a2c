"""
Configuration package for the E2 homology workbench
"""

from .config import Config, config
from .dynamic_config import RuntimeConfig, configure, get_config

__all__ = [
    'Config',
    'config',
    'RuntimeConfig',
    'configure',
    'get_config'
]
