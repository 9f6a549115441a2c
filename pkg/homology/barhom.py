"""
Bar chains for the enumerated groups.

Chains live in B_•(G) ⊗_G Z, so a bar [g_1|...|g_k] carries no group
coefficient and

    d[g_1|...|g_k] = [g_2|...|g_k] + Σ (-1)^i [...|g_i g_(i+1)|...] + (-1)^k [g_1|...|g_(k-1)].

Tensor chains in B_•(G) ⊗_G Y_• are reduced the same way: g[..] ⊗ s is
identified with [..] ⊗ g^-1 s, so every term is a bare bar next to a simplex.
"""

import logging
import random
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from algebra.matgroup import (GroupTable, Mat2, diag, e12, g_mat, h_mat, identity, mat_inv,
                              mat_mul, weyl)
from algebra.ringkit import FiniteRing
from homology.unimod import ChainComplexY, Simplex
from utils.errors import CheckFailure, DomainError

logger = logging.getLogger(__name__)

Bar = Tuple[Mat2, ...]


def _accumulate(terms: Dict, key, coeff: int):
    value = terms.get(key, 0) + coeff
    if value:
        terms[key] = value
    else:
        terms.pop(key, None)


class BarChain:
    """Integer combination of k-bars; zero coefficients are never stored."""

    __slots__ = ('ring', 'degree', 'terms')

    def __init__(self, ring: FiniteRing, degree: int, terms: Optional[Mapping[Bar, int]] = None):
        self.ring = ring
        self.degree = degree
        self.terms: Dict[Bar, int] = {}
        for bar, c in (terms or {}).items():
            self.add(bar, c)

    @classmethod
    def bar(cls, ring: FiniteRing, *mats: Mat2, coeff: int = 1) -> 'BarChain':
        return cls(ring, len(mats), {tuple(mats): coeff})

    def add(self, bar: Sequence[Mat2], coeff: int = 1) -> 'BarChain':
        bar = tuple(bar)
        if len(bar) != self.degree:
            raise ValueError(f"bar of length {len(bar)} in a degree {self.degree} chain")
        _accumulate(self.terms, bar, coeff)
        return self

    def copy(self) -> 'BarChain':
        return BarChain(self.ring, self.degree, self.terms)

    def _combine(self, other: 'BarChain', sign: int) -> 'BarChain':
        if other.degree != self.degree:
            raise ValueError("chains of different degrees")
        out = self.copy()
        for bar, c in other.terms.items():
            out.add(bar, sign * c)
        return out

    def __add__(self, other: 'BarChain') -> 'BarChain':
        return self._combine(other, 1)

    def __sub__(self, other: 'BarChain') -> 'BarChain':
        return self._combine(other, -1)

    def __neg__(self) -> 'BarChain':
        return BarChain(self.ring, self.degree, {b: -c for b, c in self.terms.items()})

    def __rmul__(self, k: int) -> 'BarChain':
        return BarChain(self.ring, self.degree, {b: k * c for b, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (isinstance(other, BarChain) and self.degree == other.degree
                and self.terms == other.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def outside(self, group: GroupTable) -> List[Bar]:
        """Bars with an entry that is not an element of the group."""
        return [bar for bar in self.terms if any(m not in group for m in bar)]

    def __repr__(self) -> str:
        return f"BarChain(degree={self.degree}, terms={len(self.terms)})"


def bar_boundary(chain: BarChain) -> BarChain:
    """Exact alternating face sum; degenerate bars are kept."""
    k = chain.degree
    if k < 1:
        raise ValueError("bar_boundary needs degree at least 1")
    ring = chain.ring
    out = BarChain(ring, k - 1)
    for bar, c in chain.terms.items():
        out.add(bar[1:], c)
        for i in range(1, k):
            merged = bar[:i - 1] + (mat_mul(ring, bar[i - 1], bar[i]),) + bar[i + 1:]
            out.add(merged, (-1) ** i * c)
        out.add(bar[:-1], (-1) ** k * c)
    return out


def normalize(chain: BarChain) -> BarChain:
    """Drop bars with an identity entry."""
    one = identity(chain.ring)
    return BarChain(chain.ring, chain.degree,
                    {bar: c for bar, c in chain.terms.items() if one not in bar})


def verify_cycle(chain: BarChain, normalized: bool = True) -> bool:
    if chain.degree < 1:
        raise ValueError("verify_cycle needs degree at least 1")
    boundary = bar_boundary(chain)
    if normalized:
        boundary = normalize(boundary)
    return boundary.is_zero()


# ---------------------------------------------------------------------------
# The standard cycles
# ---------------------------------------------------------------------------

def _require_units(ring: FiniteRing, *values: int):
    for v in values:
        if not ring.is_unit(v):
            raise DomainError(f"{ring.label(v)} is not a unit of {ring.name}")


def _require_two(ring: FiniteRing):
    if not ring.is_unit(ring.integer(2)):
        raise DomainError(f"2 is not a unit of {ring.name}")


def r_chain(ring: FiniteRing, z: int) -> BarChain:
    """The eleven-term chain R_z; its boundary over ∞ is U_z + [D(z)] up to [I]."""
    _require_two(ring)
    _require_units(ring, z)
    mul, inv = (lambda x, y: mat_mul(ring, x, y)), (lambda x: mat_inv(ring, x))
    w = weyl(ring)
    dz = diag(ring, z)
    dz_inv = inv(dz)
    d2 = diag(ring, ring.integer(2))
    hz = h_mat(ring, z)
    hz_inv = inv(hz)
    hz_inv2 = mul(hz_inv, hz_inv)
    dz_hz = mul(dz, hz)

    chain = BarChain(ring, 2)
    chain.add((w, inv(g_mat(ring, z))), 1)
    chain.add((w, hz_inv), -1)
    chain.add((mul(hz_inv, dz_inv), mul(w, hz_inv)), -1)
    chain.add((h_mat(ring, ring.inverse(z)), inv(w)), 1)
    chain.add((hz_inv, dz_inv), -1)
    chain.add((dz_hz, dz_inv), 1)
    chain.add((dz_hz, hz_inv), -1)
    chain.add((hz_inv, hz_inv), 2)
    chain.add((hz_inv2, hz_inv2), 1)
    chain.add((mul(mul(d2, hz_inv), inv(d2)), d2), 1)
    chain.add((d2, hz_inv), -1)
    return chain


def f_cycle(ring: FiniteRing, a: int, b: int) -> BarChain:
    """[D(a)|D(b)] + R_ab - R_a - R_b + R_1."""
    chain = BarChain.bar(ring, diag(ring, a), diag(ring, b))
    chain = chain + r_chain(ring, ring.mul(a, b)) - r_chain(ring, a) - r_chain(ring, b)
    return chain + r_chain(ring, ring.one)


def g_cycle(ring: FiniteRing, x: int, y: int) -> BarChain:
    """[E12(x)|E12(y)] - [E12(y)|E12(x)]."""
    return (BarChain.bar(ring, e12(ring, x), e12(ring, y))
            - BarChain.bar(ring, e12(ring, y), e12(ring, x)))


def h_cycle(ring: FiniteRing, a: int, b: int) -> BarChain:
    """[D(a)|D(b)] - [D(b)|D(a)]."""
    _require_units(ring, a, b)
    return (BarChain.bar(ring, diag(ring, a), diag(ring, b))
            - BarChain.bar(ring, diag(ring, b), diag(ring, a)))


def standard_cycles(ring: FiniteRing, a: int, b: int, x: int, y: int) -> Tuple[BarChain, BarChain, BarChain]:
    """(F(a, b), G(x, y), H(a, b))."""
    _require_units(ring, a, b)
    return f_cycle(ring, a, b), g_cycle(ring, x, y), h_cycle(ring, a, b)


def shuffle_product(c: Mat2, z: BarChain, group: Optional[GroupTable] = None) -> BarChain:
    """Σ [c|g|h] - [g|c|h] + [g|h|c] over the terms [g|h] of a 2-cycle z.

    ``c`` must commute with every entry of z, and with the generators of
    ``group`` when one is given.
    """
    ring = z.ring
    if z.degree != 2:
        raise ValueError("shuffle_product takes a 2-chain")
    entries = {m for bar in z.terms for m in bar}
    if group is not None:
        entries |= set(group.generators)
    for m in entries:
        if mat_mul(ring, c, m) != mat_mul(ring, m, c):
            raise DomainError(f"{c} does not commute with {m}")
    if not verify_cycle(z):
        raise DomainError("shuffle_product needs a cycle")
    out = BarChain(ring, 3)
    for (g, h), k in z.terms.items():
        out.add((c, g, h), k)
        out.add((g, c, h), -k)
        out.add((g, h, c), k)
    if not verify_cycle(out):
        raise CheckFailure('shuffle', f"shuffle product with {c} is not a cycle")
    return out


def random_chain(group: GroupTable, degree: int, terms: int = 4, seed: Optional[int] = None,
                 max_coeff: int = 3) -> BarChain:
    rng = random.Random(seed)
    chain = BarChain(group.ring, degree)
    for _ in range(terms):
        bar = tuple(rng.choice(group.elements) for _ in range(degree))
        coeff = rng.randint(1, max_coeff) * rng.choice((1, -1))
        chain.add(bar, coeff)
    return chain


# ---------------------------------------------------------------------------
# B_•(G) ⊗_G Y_•
# ---------------------------------------------------------------------------

class TensorChain:
    """Integer combination of [g_1|...|g_k] ⊗ s, s a simplex of Y_•.

    Terms of several bidegrees may be mixed; the bidegree of a term is
    (bar length, simplex length - 1).
    """

    __slots__ = ('complex', 'terms')

    def __init__(self, complex_: ChainComplexY,
                 terms: Optional[Mapping[Tuple[Bar, Simplex], int]] = None):
        self.complex = complex_
        self.terms: Dict[Tuple[Bar, Simplex], int] = {}
        for (bar, simplex), c in (terms or {}).items():
            self.add(bar, simplex, c)

    @classmethod
    def over(cls, complex_: ChainComplexY, chain: BarChain, simplex: Sequence[int]) -> 'TensorChain':
        """chain ⊗ simplex."""
        out = cls(complex_)
        for bar, c in chain.terms.items():
            out.add(bar, simplex, c)
        return out

    @classmethod
    def over_infinity(cls, complex_: ChainComplexY, chain: BarChain) -> 'TensorChain':
        return cls.over(complex_, chain, (complex_.infinity,))

    def add(self, bar: Sequence[Mat2], simplex: Sequence[int], coeff: int = 1) -> 'TensorChain':
        _accumulate(self.terms, (tuple(bar), tuple(simplex)), coeff)
        return self

    def copy(self) -> 'TensorChain':
        return TensorChain(self.complex, self.terms)

    def _combine(self, other: 'TensorChain', sign: int) -> 'TensorChain':
        out = self.copy()
        for (bar, simplex), c in other.terms.items():
            out.add(bar, simplex, sign * c)
        return out

    def __add__(self, other: 'TensorChain') -> 'TensorChain':
        return self._combine(other, 1)

    def __sub__(self, other: 'TensorChain') -> 'TensorChain':
        return self._combine(other, -1)

    def __neg__(self) -> 'TensorChain':
        return TensorChain(self.complex, {key: -c for key, c in self.terms.items()})

    def __rmul__(self, k: int) -> 'TensorChain':
        return TensorChain(self.complex, {key: k * c for key, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorChain) and self.terms == other.terms

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def bidegrees(self) -> List[Tuple[int, int]]:
        return sorted({(len(bar), len(s) - 1) for bar, s in self.terms})

    def coefficient_chains(self) -> Dict[Bar, Dict[Simplex, int]]:
        """Y-coefficient of every bar."""
        out: Dict[Bar, Dict[Simplex, int]] = {}
        for (bar, simplex), c in self.terms.items():
            out.setdefault(bar, {})[simplex] = c
        return out

    def __repr__(self) -> str:
        return f"TensorChain(bidegrees={self.bidegrees}, terms={len(self.terms)})"


def tensor_boundary(chain: TensorChain) -> TensorChain:
    """d ⊗ id; the first face moves the simplex by g_1^-1."""
    complex_ = chain.complex
    ring = complex_.ring
    out = TensorChain(complex_)
    for (bar, simplex), c in chain.terms.items():
        k = len(bar)
        if k == 0:
            continue
        out.add(bar[1:], complex_.act(mat_inv(ring, bar[0]), simplex), c)
        for i in range(1, k):
            merged = bar[:i - 1] + (mat_mul(ring, bar[i - 1], bar[i]),) + bar[i + 1:]
            out.add(merged, simplex, (-1) ** i * c)
        out.add(bar[:-1], simplex, (-1) ** k * c)
    return out


def simplex_boundary(chain: TensorChain) -> TensorChain:
    """id ⊗ ∂; Y_0 maps to zero."""
    out = TensorChain(chain.complex)
    for (bar, simplex), c in chain.terms.items():
        if len(simplex) < 2:
            continue
        for i in range(len(simplex)):
            out.add(bar, simplex[:i] + simplex[i + 1:], (-1) ** i * c)
    return out


def total_boundary(chain: TensorChain) -> TensorChain:
    """d ⊗ id + (-1)^k id ⊗ ∂ on the total complex."""
    out = tensor_boundary(chain)
    for (bar, simplex), c in simplex_boundary(chain).terms.items():
        out.add(bar, simplex, (-1) ** len(bar) * c)
    return out


def normalize_tensor(chain: TensorChain) -> TensorChain:
    one = identity(chain.complex.ring)
    return TensorChain(chain.complex, {(bar, s): c for (bar, s), c in chain.terms.items()
                                       if one not in bar})


def augmentation_free(chain: TensorChain) -> bool:
    """Whether every Y_0-coefficient has augmentation zero, i.e. the chain lies in B ⊗ Z_0."""
    for bar, coeffs in chain.coefficient_chains().items():
        if any(len(s) != 1 for s in coeffs):
            return False
        if sum(coeffs.values()):
            return False
    return True


def random_tensor_chain(complex_: ChainComplexY, group: GroupTable, bar_degree: int,
                        simplex_degree: int, terms: int = 4, seed: Optional[int] = None) -> TensorChain:
    rng = random.Random(seed)
    basis = complex_.bases[simplex_degree]
    out = TensorChain(complex_)
    for _ in range(terms):
        bar = tuple(rng.choice(group.elements) for _ in range(bar_degree))
        out.add(bar, rng.choice(basis), rng.randint(1, 3) * rng.choice((1, -1)))
    return out


def b_relation_witness(complex_: ChainComplexY, g: Mat2, h: Mat2) -> TensorChain:
    """-[g|h] ⊗ (∞), whose d ⊗ id is ([gh] - [g] - [h]) ⊗ (∞); g and h must fix ∞."""
    ring = complex_.ring
    inf = complex_.infinity
    for m in (g, h):
        if complex_.act_point(m, inf) != inf:
            raise DomainError(f"{m} does not fix ∞")
    witness = TensorChain(complex_).add((g, h), (inf,), -1)
    expected = TensorChain(complex_)
    expected.add((mat_mul(ring, g, h),), (inf,), 1)
    expected.add((g,), (inf,), -1)
    expected.add((h,), (inf,), -1)
    if tensor_boundary(witness) != expected:
        raise CheckFailure('b-relation', f"witness for {g}, {h} has the wrong boundary")
    return witness


# ---------------------------------------------------------------------------
# Connecting map replay
# ---------------------------------------------------------------------------

def lift_chain(complex_: ChainComplexY, z: int) -> TensorChain:
    """([g_z^-1] - [h_z^-1] - [g_1^-1] + [h_1^-1]) ⊗ (∞, 0)."""
    ring = complex_.ring
    edge = (complex_.infinity, complex_.origin)
    out = TensorChain(complex_)
    for zz, sign in ((z, 1), (ring.one, -1)):
        out.add((mat_inv(ring, g_mat(ring, zz)),), edge, sign)
        out.add((mat_inv(ring, h_mat(ring, zz)),), edge, -sign)
    return out


def u_chain(complex_: ChainComplexY, z: int) -> TensorChain:
    """U_z = (id ⊗ ∂)(lift_chain(z))."""
    return simplex_boundary(lift_chain(complex_, z))


@dataclass
class ReplayStep:
    name: str
    passed: bool
    detail: str = ''

    def to_json(self) -> Dict:
        out = {'name': self.name, 'passed': self.passed}
        if self.detail:
            out['detail'] = self.detail
        return out


@dataclass
class ConnectingReplay:
    a: int
    b: int
    value: Tuple[int, ...]
    expected: Tuple[int, ...]
    steps: List[ReplayStep] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.steps) and self.value == self.expected


def connecting_replay(ring: FiniteRing, a: int, b: int, complex_: Optional[ChainComplexY] = None,
                      gw=None) -> ConnectingReplay:
    """Push F(a, b) ⊗ (∞) through the double complex down to GW(A).

    ``gw`` is a GrothendieckWitt of the same complex; it supplies the class
    of a 1-cycle and the product <<a>><<b>>.
    """
    _require_two(ring)
    _require_units(ring, a, b)
    if complex_ is None or gw is None:
        from homology.invariants import grothendieck_witt
        if complex_ is None:
            from homology.unimod import build_y_complex
            complex_ = build_y_complex(ring, 2)
        gw = gw or grothendieck_witt(ring, complex_)
    steps: List[ReplayStep] = []
    inf = complex_.infinity
    ab = ring.mul(a, b)

    u = {}
    for z in sorted({a, b, ab, ring.one}):
        u[z] = u_chain(complex_, z)
        steps.append(ReplayStep(f"U_{ring.label(z)} in B_1 ⊗ ker ε", augmentation_free(u[z])))
        lifted = tensor_boundary(TensorChain.over_infinity(
            complex_, r_chain(ring, z) - r_chain(ring, ring.one)))
        lifted.add((diag(ring, z),), (inf,), -1)
        ok = normalize_tensor(lifted) == normalize_tensor(u[z])
        steps.append(ReplayStep(f"d((R_{ring.label(z)} - R_1) ⊗ ∞) - [D({ring.label(z)})] ⊗ ∞ = U", ok))

    f_image = tensor_boundary(TensorChain.over_infinity(complex_, f_cycle(ring, a, b)))
    target = u[ab] - u[a] - u[b]
    steps.append(ReplayStep("d(F ⊗ ∞) = U_ab - U_a - U_b",
                            normalize_tensor(f_image) == normalize_tensor(target)))

    lift = lift_chain(complex_, ab) - lift_chain(complex_, a) - lift_chain(complex_, b)
    top = tensor_boundary(lift)
    if any(len(bar) for bar, _ in top.terms):
        raise CheckFailure('connecting', "lift does not land in B_0 ⊗ Y_1")
    vector = complex_.chain({s: c for (_, s), c in top.terms.items()})
    cycle = not complex_.boundary(1, vector)
    steps.append(ReplayStep("lifted 1-chain lies in Z_1", cycle))
    value = gw.class_of_cycle(vector) if cycle else gw.group.zero()
    expected = gw.pontryagin(a, b)

    result = ConnectingReplay(a, b, value, expected, steps)
    logger.debug(f"{ring.name}: connecting replay ({ring.label(a)}, {ring.label(b)}) "
                 f"-> {value}, expected {expected}, passed={result.passed}")
    return result
