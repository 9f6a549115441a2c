"""
Refined scissors congruence and Bloch groups.

Symbols <g>[x] (g a square-class representative, x in W_A) are indexed as
class_index(g) * |W_A| + position of x in W_A. Every presentation keeps its
G_A-translated relations explicitly, so one integer engine handles both the
presented group RP̄(A) and the geometric RP(A) = (Z_2)_{E_2}.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Dict, List, Optional, Tuple

from algebra.ringkit import FiniteRing, unit_data, units_group, w_set
from algebra.zlinalg import (AbGroup, Lattice, SparseMatrix, Vector, generates, kernel_lattice,
                             preimage_lattice, quotient_structure, subgroup_structure)
from homology.invariants import cycle_coinvariants
from homology.unimod import (ChainComplexY, build_y_complex, canonical_simplex, canonicalize_tuple,
                             y_coinvariants, y_homology)
from utils.errors import CheckFailure, DomainError

logger = logging.getLogger(__name__)


def _accumulate(out: Vector, key: int, c: int):
    value = out.get(key, 0) + c
    if value:
        out[key] = value
    else:
        out.pop(key, None)


def _as_vector(coords) -> Vector:
    return {i: x for i, x in enumerate(coords) if x}


def _span(columns: List, row: Vector, size: int) -> List[int]:
    out = [0] * size
    for j, x in row.items():
        for i, c in enumerate(columns[j]):
            out[i] += x * c
    return out


# ---------------------------------------------------------------------------
# S^2(A×) and the wedge quotient
# ---------------------------------------------------------------------------

@dataclass
class TensorQuotient:
    """A quotient of A× ⊗ A× on the basis e_i ⊗ e_j of the unit-group generators."""
    name: str
    units: AbGroup
    coords: Dict[int, Tuple[int, ...]] = field(repr=False)
    group: AbGroup = field(default_factory=AbGroup.trivial)
    relations: List[Vector] = field(default_factory=list, repr=False)

    @property
    def width(self) -> int:
        return len(self.units.invariants)

    def vector(self, a: int, b: int) -> Vector:
        u, v = self.coords[a], self.coords[b]
        k = self.width
        return {i * k + j: u[i] * v[j] for i in range(k) for j in range(k) if u[i] * v[j]}

    def tensor(self, a: int, b: int) -> Tuple[int, ...]:
        return self.group.project(self.vector(a, b))


def _tensor_relations(units: AbGroup) -> List[Vector]:
    inv = units.invariants
    k = len(inv)
    return [{i * k + j: gcd(inv[i], inv[j])} for i in range(k) for j in range(k)
            if gcd(inv[i], inv[j])]


@lru_cache(maxsize=32)
def sym_square(ring: FiniteRing) -> TensorQuotient:
    """S^2_Z(A×) = A× ⊗ A× / <a⊗b + b⊗a>."""
    units, coords = units_group(ring)
    k = len(units.invariants)
    relations = _tensor_relations(units)
    for i in range(k):
        relations.append({i * k + i: 2})
        for j in range(i + 1, k):
            relations.append({i * k + j: 1, j * k + i: 1})
    group = quotient_structure(k * k, relations)
    logger.debug(f"{ring.name}: S^2(A×) = {group}")
    return TensorQuotient('S2', units, coords, group, relations)


@lru_cache(maxsize=32)
def wedge_quotient(ring: FiniteRing) -> TensorQuotient:
    """(A× ∧ A×) / (μ_2(A) ∧ A×)."""
    units, coords = units_group(ring)
    k = len(units.invariants)
    relations = _tensor_relations(units)
    for i in range(k):
        relations.append({i * k + i: 1})
        for j in range(i + 1, k):
            relations.append({i * k + j: 1, j * k + i: 1})
    probe = TensorQuotient('wedge', units, coords)
    for m in unit_data(ring).mu2:
        for b in ring.units:
            vec = probe.vector(m, b)
            if vec:
                relations.append(vec)
    group = quotient_structure(k * k, relations)
    return TensorQuotient('wedge', units, coords, group, relations)


@dataclass
class AlphaMap:
    source: TensorQuotient = field(repr=False)
    target: TensorQuotient = field(repr=False)
    well_defined: bool = False
    kernel: AbGroup = field(default_factory=AbGroup.trivial)

    @property
    def injective(self) -> bool:
        return self.kernel.is_trivial

    def apply(self, vec: Vector) -> Tuple[int, ...]:
        """α on the class of a representative in A× ⊗ A×."""
        return self.target.group.project({i: 2 * c for i, c in vec.items()})

    def wedge_image(self, a: int, b: int) -> Tuple[int, ...]:
        return self.apply(self.source.vector(a, b))


def alpha_map(ring: FiniteRing) -> AlphaMap:
    """α: a ∧ b -> 2(a ⊗ b); injectivity is computed, not assumed."""
    s2, wedge = sym_square(ring), wedge_quotient(ring)
    size = s2.width ** 2
    images = [s2.group.project({idx: 2}) for idx in range(size)]
    well_defined = all(s2.group.is_zero(s2.group.project({i: 2 * c for i, c in rel.items()}))
                       for rel in wedge.relations)
    kernel = preimage_lattice([_as_vector(im) for im in images], len(s2.group.invariants),
                              s2.group.invariants)
    kernel_group = subgroup_structure(wedge.group, [wedge.group.project(row) for row in kernel.rows()])
    return AlphaMap(wedge, s2, well_defined, AbGroup(kernel_group.invariants))


# ---------------------------------------------------------------------------
# RP̄(A)
# ---------------------------------------------------------------------------

@dataclass
class RPBar:
    ring: FiniteRing
    classes: Tuple[int, ...]
    w: Tuple[int, ...]
    w_index: Dict[int, int] = field(repr=False)
    instances: List[Tuple[int, int]] = field(default_factory=list, repr=False)
    skipped: List[Tuple[int, int]] = field(default_factory=list, repr=False)
    relations: List[Vector] = field(default_factory=list, repr=False)
    group: AbGroup = field(default_factory=AbGroup.trivial)

    @property
    def size(self) -> int:
        return len(self.classes) * len(self.w)

    def index(self, g: int, x: int) -> int:
        return unit_data(self.ring).class_index(g) * len(self.w) + self.w_index[x]

    def symbols(self) -> List[Tuple[int, int]]:
        return [(g, x) for g in self.classes for x in self.w]

    def labels(self) -> List[str]:
        ring = self.ring
        return [f"<{ring.label(g)}>[{ring.label(x)}]" for g, x in self.symbols()]


def five_term_arguments(ring: FiniteRing, a: int, b: int) -> List[Tuple[int, int, int]]:
    """(multiplier, argument, sign) of the five terms for the pair (a, b)."""
    wset = w_set(ring)
    if a not in wset or b not in wset:
        raise DomainError(f"({ring.label(a)}, {ring.label(b)}) is not a pair in W_A")
    one = ring.one
    a_inv, b_inv = ring.inverse(a), ring.inverse(b)
    terms = [
        (one, a, 1),
        (one, b, -1),
        (a, ring.div(b, a), 1),
        (ring.sub(a_inv, one), ring.div(ring.sub(one, a_inv), ring.sub(one, b_inv)), -1),
        (ring.sub(one, a), ring.div(ring.sub(one, a), ring.sub(one, b)), 1),
    ]
    for _, x, _ in terms:
        if x not in wset:
            raise DomainError(f"five-term argument {ring.label(x)} for ({ring.label(a)}, "
                              f"{ring.label(b)}) is not in W_A")
    return terms


@lru_cache(maxsize=32)
def _w_index(ring: FiniteRing) -> Tuple[Tuple[int, ...], Dict[int, int]]:
    w = tuple(w_set(ring))
    return w, {x: i for i, x in enumerate(w)}


def five_term_element(ring: FiniteRing, a: int, b: int, g: Optional[int] = None) -> Vector:
    """<g> times the five-term relation of (a, b), as a vector on symbols."""
    terms = five_term_arguments(ring, a, b)
    w, w_index = _w_index(ring)
    units = unit_data(ring)
    g = ring.one if g is None else g
    out: Vector = {}
    for mult, x, sign in terms:
        _accumulate(out, units.class_index(ring.mul(g, mult)) * len(w) + w_index[x], sign)
    return out


def rp_bar_presentation(ring: FiniteRing) -> RPBar:
    w, w_index = _w_index(ring)
    classes = unit_data(ring).class_reps
    rp = RPBar(ring, classes, w, w_index)
    for a in w:
        for b in w:
            if a == b or ring.div(b, a) not in w_index:
                continue
            try:
                five_term_arguments(ring, a, b)
            except DomainError:
                rp.skipped.append((a, b))
                continue
            rp.instances.append((a, b))
            for g in classes:
                vec = five_term_element(ring, a, b, g)
                if vec:
                    rp.relations.append(vec)
    if rp.skipped:
        logger.warning(f"{ring.name}: {len(rp.skipped)} five-term instances skipped "
                       f"(argument outside W_A)")
    rp.group = quotient_structure(rp.size, rp.relations)
    logger.info(f"{ring.name}: RP̄ on {rp.size} symbols, {len(rp.instances)} five-term instances, "
                f"RP̄ = {rp.group}")
    return rp


# ---------------------------------------------------------------------------
# λ̄_1, λ̄_2
# ---------------------------------------------------------------------------

@dataclass
class LambdaBar:
    rp: RPBar
    s2: TensorQuotient
    lambda1: List[Vector] = field(repr=False)
    lambda2: List[Vector] = field(repr=False)

    def apply1(self, vec: Vector) -> Vector:
        out: Vector = {}
        for j, x in vec.items():
            for i, c in self.lambda1[j].items():
                _accumulate(out, i, x * c)
        return out

    def apply2(self, vec: Vector) -> Tuple[int, ...]:
        out: Vector = {}
        for j, x in vec.items():
            for i, c in self.lambda2[j].items():
                _accumulate(out, i, x * c)
        return self.s2.group.project(out)

    def column1(self, j: int) -> Tuple[int, ...]:
        return tuple(self.lambda1[j].get(i, 0) for i in range(len(self.rp.classes)))

    @property
    def kills_relations(self) -> Tuple[bool, bool]:
        s2 = self.s2.group
        first = all(not self.apply1(rel) for rel in self.rp.relations)
        second = all(s2.is_zero(self.apply2(rel)) for rel in self.rp.relations)
        return first, second


def lambda_bar_maps(ring: FiniteRing, rp: Optional[RPBar] = None) -> LambdaBar:
    """λ̄_1: <g>[x] -> <g><<x>><<1-x>> in Z[G_A]; λ̄_2: <g>[x] -> x ⊗ (1-x) in S^2(A×)."""
    rp = rp or rp_bar_presentation(ring)
    s2 = sym_square(ring)
    units = unit_data(ring)
    lambda1, lambda2 = [], []
    for g, x in rp.symbols():
        y = ring.sub(ring.one, x)
        col: Vector = {}
        for t, sign in ((ring.mul(x, y), 1), (x, -1), (y, -1), (ring.one, 1)):
            _accumulate(col, units.class_index(ring.mul(g, t)), sign)
        lambda1.append(col)
        lambda2.append(s2.vector(x, y))
    return LambdaBar(rp, s2, lambda1, lambda2)


# ---------------------------------------------------------------------------
# RP(A) = (Z_2)_{E_2}
# ---------------------------------------------------------------------------

@dataclass
class RPGeom:
    complex: ChainComplexY
    cycles: Lattice
    group: AbGroup
    y2: AbGroup
    rp1: AbGroup

    def lambda1(self, vec: Vector) -> Tuple[int, ...]:
        """λ_1 on a 2-chain: its class in (Y_2)_{E_2} = Z[G_A]."""
        return self.y2.project(vec)


def rp_geometric(ring: FiniteRing, complex_: Optional[ChainComplexY] = None) -> RPGeom:
    if complex_ is None:
        complex_ = build_y_complex(ring, 3)
    cycles, _, group = cycle_coinvariants(complex_, 2)
    y2, _ = y_coinvariants(complex_, 2)
    if len(y2.invariants) != unit_data(ring).square_class_count:
        raise CheckFailure('rp-geometric', f"(Y_2)_E2 has rank {len(y2.invariants)}, "
                                           f"expected |G_A| = {unit_data(ring).square_class_count}")

    # Z_2 ∩ ker λ_1 as the kernel of the stacked map (∂_2, λ_1)
    offset = complex_.rank(1)
    slots = y2.projection.slot
    stacked = [{**col, offset + slots[k]: 1} for k, col in enumerate(complex_.boundary_matrix(2).columns)]
    joint = kernel_lattice(SparseMatrix(offset + len(y2.invariants), stacked))
    rp1 = subgroup_structure(group, [group.project(z) for z in joint.rows()])
    logger.info(f"{ring.name}: RP = {group}, RP_1 = {rp1}")
    return RPGeom(complex_, cycles, group, y2, AbGroup(rp1.invariants))


# ---------------------------------------------------------------------------
# η
# ---------------------------------------------------------------------------

@dataclass
class EtaReport:
    images: List[Tuple[int, ...]] = field(repr=False)
    kernel_lattice: Lattice = field(repr=False)
    well_defined: bool = True
    surjective: bool = True
    bijective: bool = True
    lambda_compatible: bool = True
    syzygy: bool = True
    exact: Optional[bool] = None

    @property
    def iso_flag(self) -> bool:
        return self.surjective and bool(self.exact)


def _eta_vector(complex_: ChainComplexY, g: int, x: int) -> Vector:
    """-∂_3(<g>[x]')."""
    simplex = complex_.simplex_index(canonical_simplex(complex_, g, x))
    return {k: -c for k, c in complex_.boundary(3, {simplex: 1}).items()}


def syzygy_vector(complex_: ChainComplexY, rp: RPBar, a: int, b: int) -> Vector:
    """∂_4(∞, 0, 1, a, b) read on the symbols <r>[x]'."""
    out: Vector = {}
    simplex = canonical_simplex(complex_, complex_.ring.one, a, b)
    for i in range(len(simplex)):
        face = simplex[:i] + simplex[i + 1:]
        form = canonicalize_tuple(complex_, face)
        _accumulate(out, rp.index(form.class_rep, form.params[0]), (-1) ** i)
    return out


def eta_map(ring: FiniteRing, complex_: Optional[ChainComplexY] = None, rp: Optional[RPBar] = None,
            geom: Optional[RPGeom] = None, lam: Optional[LambdaBar] = None) -> EtaReport:
    """η: RP̄(A) -> RP(A), <g>[x] -> -∂_3(∞, 0, g, gx).

    ``exact`` is left as None when the complex stops below degree 4.
    """
    if complex_ is None:
        complex_ = build_y_complex(ring, 4)
    if complex_.max_degree < 3:
        raise ValueError("η needs the complex built to degree 3")
    rp = rp or rp_bar_presentation(ring)
    geom = geom or rp_geometric(ring, complex_)
    lam = lam or lambda_bar_maps(ring, rp)
    target = geom.group

    images, compatible = [], True
    for j, (g, x) in enumerate(rp.symbols()):
        vec = _eta_vector(complex_, g, x)
        images.append(target.project(vec))
        compatible = compatible and geom.lambda1(vec) == lam.column1(j)

    def evaluate(row: Vector) -> Tuple[int, ...]:
        return target.normalize(_span(images, row, len(target.invariants)))

    well_defined = all(target.is_zero(evaluate(rel)) for rel in rp.relations)
    surjective = generates(target, images)
    kernel = preimage_lattice([_as_vector(im) for im in images], len(target.invariants), target.invariants)
    bijective = surjective and all(rp.group.is_zero(rp.group.project(row)) for row in kernel.rows())
    syzygy = all(syzygy_vector(complex_, rp, a, b) == five_term_element(ring, a, b)
                 for a, b in rp.instances)
    exact = None
    if complex_.max_degree >= 4:
        exact = all(y_homology(complex_, k).is_trivial for k in (1, 2, 3))
    report = EtaReport(images, kernel, well_defined, surjective, bijective, compatible, syzygy, exact)
    logger.info(f"{ring.name}: η surjective={surjective}, bijective={bijective}, exact={exact}")
    return report


def eta_kernel(rp: RPBar, eta: EtaReport) -> AbGroup:
    """ker(η) as a subgroup of RP̄(A)."""
    group = subgroup_structure(rp.group, [rp.group.project(row) for row in eta.kernel_lattice.rows()])
    return AbGroup(group.invariants)


# ---------------------------------------------------------------------------
# RB(A), RB̄(A)
# ---------------------------------------------------------------------------

@dataclass
class RefinedBloch:
    rp1: AbGroup
    rp1_bar: AbGroup
    rb: AbGroup
    rb_bar: AbGroup
    comparison_kernel: AbGroup
    lambda2_well_defined: bool
    alpha_compatible: bool
    rp1_matches_geometric: bool

    @property
    def finite(self) -> bool:
        return self.rb.is_finite and self.rb_bar.is_finite


def alpha_compatibility(rp: RPBar, lam: LambdaBar, alpha: AlphaMap) -> bool:
    """α(x ∧ (1-x)) = 2 λ̄_2(<g>[x]) on every symbol."""
    if not alpha.well_defined:
        return False
    ring = rp.ring
    s2 = alpha.target.group
    for g, x in rp.symbols():
        lhs = alpha.wedge_image(x, ring.sub(ring.one, x))
        rhs = s2.scale(lam.apply2({rp.index(g, x): 1}), 2)
        if lhs != rhs:
            logger.warning(f"{ring.name}: α and 2λ̄_2 disagree at <{ring.label(g)}>[{ring.label(x)}]")
            return False
    return True


def refined_bloch(ring: FiniteRing, rp: RPBar, lam: LambdaBar, geom: RPGeom, eta: EtaReport,
                  alpha: Optional[AlphaMap] = None) -> RefinedBloch:
    """RB(A) = ker(λ_2 on RP_1(A)) and RB̄(A) = ker(λ̄_2 on RP̄_1(A)).

    λ_2 on RP(A) is x ⊗ (1-x) on the images of the symbols, which needs η onto.
    """
    if not eta.surjective:
        raise DomainError(f"η is not surjective for {ring.name}; λ_2 is undefined on RP")
    s2 = lam.s2
    target = geom.group
    n_classes = len(rp.classes)

    lambda2_ok = all(s2.group.is_zero(lam.apply2(row)) for row in eta.kernel_lattice.rows())

    def to_rp(row: Vector) -> Tuple[int, ...]:
        return target.normalize(_span(eta.images, row, len(target.invariants)))

    # symbol lattices killed by λ̄_1, and by λ̄_1 and λ̄_2 together
    lambda1_cols = [tuple(lam.column1(j)) for j in range(rp.size)]
    ker1 = preimage_lattice([_as_vector(c) for c in lambda1_cols], n_classes, (0,) * n_classes)
    joint_cols = [lambda1_cols[j] + lam.apply2({j: 1}) for j in range(rp.size)]
    moduli = (0,) * n_classes + s2.group.invariants
    ker12 = preimage_lattice([_as_vector(c) for c in joint_cols], len(moduli), moduli)

    rp1 = subgroup_structure(target, [to_rp(row) for row in ker1.rows()])
    rp1_bar = subgroup_structure(rp.group, [rp.group.project(row) for row in ker1.rows()])
    rb_rows = ker12.rows()
    rb_images = [to_rp(row) for row in rb_rows]
    rb = subgroup_structure(target, rb_images)
    rb_bar = subgroup_structure(rp.group, [rp.group.project(row) for row in rb_rows])

    # kernel of RB̄ -> RB
    dead = preimage_lattice([_as_vector(im) for im in rb_images], len(target.invariants), target.invariants)
    dead_rows = []
    for coeffs in dead.rows():
        vec: Vector = {}
        for j, x in coeffs.items():
            for k, c in rb_rows[j].items():
                _accumulate(vec, k, x * c)
        dead_rows.append(rp.group.project(vec))
    comparison_kernel = subgroup_structure(rp.group, dead_rows)

    alpha_ok = alpha_compatibility(rp, lam, alpha or alpha_map(ring))

    result = RefinedBloch(AbGroup(rp1.invariants), AbGroup(rp1_bar.invariants), AbGroup(rb.invariants),
                          AbGroup(rb_bar.invariants), AbGroup(comparison_kernel.invariants), lambda2_ok,
                          alpha_ok, AbGroup(rp1.invariants).isomorphic(geom.rp1))
    logger.info(f"{ring.name}: RB = {result.rb}, RB̄ = {result.rb_bar}")
    return result


@dataclass
class BlochReport:
    rp_bar: RPBar
    lambdas: LambdaBar
    geometric: RPGeom
    eta: EtaReport
    eta_kernel: AbGroup
    alpha: AlphaMap
    refined: Optional[RefinedBloch] = None
    refused: str = ''


def bloch_suite(ring: FiniteRing, complex_: Optional[ChainComplexY] = None) -> BlochReport:
    if complex_ is None:
        complex_ = build_y_complex(ring, 4)
    rp = rp_bar_presentation(ring)
    lam = lambda_bar_maps(ring, rp)
    geom = rp_geometric(ring, complex_)
    eta = eta_map(ring, complex_, rp, geom, lam)
    alpha = alpha_map(ring)
    report = BlochReport(rp, lam, geom, eta, eta_kernel(rp, eta), alpha)
    try:
        report.refined = refined_bloch(ring, rp, lam, geom, eta, alpha)
    except DomainError as e:
        logger.warning(f"{ring.name}: refined Bloch groups skipped: {e}")
        report.refused = str(e)
    return report
