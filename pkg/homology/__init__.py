"""
Homology package for the E2 homology workbench
The complex of unimodular vectors, its invariants, Bloch groups and bar chains
"""

from .unimod import ChainComplexY, build_y_complex
from .invariants import GrothendieckWitt, grothendieck_witt

__all__ = [
    'ChainComplexY',
    'build_y_complex',
    'GrothendieckWitt',
    'grothendieck_witt'
]
