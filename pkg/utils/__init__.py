"""
Utils package for the E2 homology workbench
Contains logging setup and the exception hierarchy
"""

from .errors import (
    CapExceededError,
    CheckFailure,
    DomainError,
    E2HomLabError,
    LinAlgError,
    RingSpecError,
)
from .logger import setup_logger

__all__ = [
    'setup_logger',
    'E2HomLabError',
    'RingSpecError',
    'CapExceededError',
    'CheckFailure',
    'DomainError',
    'LinAlgError'
]
