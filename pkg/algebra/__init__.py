"""
Algebra package for the E2 homology workbench
Finite rings, integer linear algebra and 2x2 matrix groups
"""

from .ringkit import FiniteRing, build_ring, parse_ring_spec
from .zlinalg import AbGroup, Lattice, smith_normal_form
from .matgroup import GroupTable, e2_group

__all__ = [
    'FiniteRing',
    'build_ring',
    'parse_ring_spec',
    'AbGroup',
    'Lattice',
    'smith_normal_form',
    'GroupTable',
    'e2_group'
]
