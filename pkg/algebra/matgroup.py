"""
2x2 matrix groups over finite rings.

Groups are enumerated breadth first from generators; every element keeps a
parent pointer so its generator word can be replayed.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from algebra.ringkit import FiniteRing, RingSpec, build_ring
from algebra.zlinalg import AbGroup, abelian_group_from_generators
from config.dynamic_config import get_config
from utils.errors import CapExceededError, DomainError

logger = logging.getLogger(__name__)

# (a, b, c, d) for [[a, b], [c, d]]
Mat2 = Tuple[int, int, int, int]


# ---------------------------------------------------------------------------
# Matrix arithmetic
# ---------------------------------------------------------------------------

def mat_mul(ring: FiniteRing, x: Mat2, y: Mat2) -> Mat2:
    a, b, c, d = x
    e, f, g, h = y
    add, mul = ring.add, ring.mul
    return (add(mul(a, e), mul(b, g)), add(mul(a, f), mul(b, h)),
            add(mul(c, e), mul(d, g)), add(mul(c, f), mul(d, h)))


def mat_det(ring: FiniteRing, x: Mat2) -> int:
    a, b, c, d = x
    return ring.sub(ring.mul(a, d), ring.mul(b, c))


def mat_inv(ring: FiniteRing, x: Mat2) -> Mat2:
    a, b, c, d = x
    det = mat_det(ring, x)
    if not ring.is_unit(det):
        raise DomainError(f"matrix {x} is not invertible over {ring.name}")
    t = ring.inverse(det)
    return (ring.mul(t, d), ring.mul(t, ring.neg(b)), ring.mul(t, ring.neg(c)), ring.mul(t, a))


def mat_apply(ring: FiniteRing, x: Mat2, v: Tuple[int, int]) -> Tuple[int, int]:
    a, b, c, d = x
    return (ring.add(ring.mul(a, v[0]), ring.mul(b, v[1])),
            ring.add(ring.mul(c, v[0]), ring.mul(d, v[1])))


def mat_neg(ring: FiniteRing, x: Mat2) -> Mat2:
    return tuple(ring.neg(e) for e in x)


def identity(ring: FiniteRing) -> Mat2:
    return (ring.one, ring.zero, ring.zero, ring.one)


def minus_identity(ring: FiniteRing) -> Mat2:
    m = ring.neg(ring.one)
    return (m, ring.zero, ring.zero, m)


def e12(ring: FiniteRing, x: int) -> Mat2:
    return (ring.one, x, ring.zero, ring.one)


def e21(ring: FiniteRing, x: int) -> Mat2:
    return (ring.one, ring.zero, x, ring.one)


def diag(ring: FiniteRing, a: int) -> Mat2:
    """D(a) = diag(a, a^-1)."""
    return (a, ring.zero, ring.zero, ring.inverse(a))


def weyl(ring: FiniteRing) -> Mat2:
    return (ring.zero, ring.one, ring.neg(ring.one), ring.zero)


def g_mat(ring: FiniteRing, z: int) -> Mat2:
    """g_z = [[0, 1], [-1, z]]."""
    return (ring.zero, ring.one, ring.neg(ring.one), z)


def h_mat(ring: FiniteRing, z: int) -> Mat2:
    """h_z = [[1, z^-1], [0, 1]]; z must be a unit."""
    return (ring.one, ring.inverse(z), ring.zero, ring.one)


def sign_normalizer(ring: FiniteRing) -> Callable[[Mat2], Mat2]:
    """Pick the smaller of g and -g; identifies a matrix with its class mod {±I}."""
    return lambda m: min(m, mat_neg(ring, m))


def projective_rep(ring: FiniteRing, v: Tuple[int, int]) -> Tuple[int, int]:
    """Least representative of the unit-scaling class of a vector."""
    return min((ring.mul(u, v[0]), ring.mul(u, v[1])) for u in ring.units)


def mat_label(ring: FiniteRing, m: Mat2) -> str:
    a, b, c, d = (ring.label(x) for x in m)
    return f"[[{a},{b}],[{c},{d}]]"


def generator_label(ring: FiniteRing, m: Mat2) -> str:
    """E12(x) or E21(x) for elementary matrices, the entries otherwise."""
    a, b, c, d = m
    if a == d == ring.one:
        if c == ring.zero and b != ring.zero:
            return f"E12({ring.label(b)})"
        if b == ring.zero and c != ring.zero:
            return f"E21({ring.label(c)})"
    return mat_label(ring, m)


# ---------------------------------------------------------------------------
# Group tables
# ---------------------------------------------------------------------------

class GroupTable:
    """Finite matrix group with elements numbered in discovery order.

    ``parent[i] = (j, k)`` records ``element[i] = element[j] * generator[k]``;
    elements loaded without a closure have no parents.
    """

    def __init__(self, ring: FiniteRing, elements: Sequence[Mat2], generators: Sequence[Mat2],
                 parents: Optional[Sequence[Optional[Tuple[int, int]]]] = None,
                 normalize: Optional[Callable[[Mat2], Mat2]] = None, name: str = ''):
        self.ring = ring
        self.normalize = normalize
        self.name = name
        self.elements: List[Mat2] = list(elements)
        self.index: Dict[Mat2, int] = {m: i for i, m in enumerate(self.elements)}
        self.generators: List[Mat2] = [self.canonical(g) for g in generators]
        self.parents = list(parents) if parents is not None else [None] * len(self.elements)
        self._inverse: Dict[int, int] = {}

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, m: Mat2) -> bool:
        return self.canonical(m) in self.index

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self) -> str:
        return f"GroupTable({self.name!r}, order={self.order})"

    def canonical(self, m: Mat2) -> Mat2:
        return self.normalize(m) if self.normalize else m

    def index_of(self, m: Mat2) -> int:
        return self.index[self.canonical(m)]

    @property
    def identity(self) -> int:
        return self.index_of(identity(self.ring))

    def mul(self, i: int, j: int) -> int:
        return self.index_of(mat_mul(self.ring, self.elements[i], self.elements[j]))

    def inv(self, i: int) -> int:
        if i not in self._inverse:
            self._inverse[i] = self.index_of(mat_inv(self.ring, self.elements[i]))
        return self._inverse[i]

    def commutator(self, i: int, j: int) -> int:
        return self.mul(self.mul(i, j), self.mul(self.inv(i), self.inv(j)))

    def conjugate(self, i: int, by: int) -> int:
        return self.mul(self.mul(by, i), self.inv(by))

    def generator_indices(self) -> List[int]:
        return [self.index[g] for g in self.generators]

    def word(self, i: int) -> List[int]:
        """Generator indices whose ordered product is element i."""
        out = []
        while self.parents[i] is not None:
            j, k = self.parents[i]
            out.append(k)
            i = j
        out.reverse()
        return out

    def spell(self, m: Mat2) -> str:
        """m as a shortest word in the generators; '1' for the identity."""
        i = self.index_of(m)
        if i == self.identity:
            return "1"
        word = self.word(i)
        if not word:
            raise DomainError(f"{mat_label(self.ring, m)} has no recorded word in {self.name}")
        return "·".join(generator_label(self.ring, self.generators[k]) for k in word)

    def evaluate(self, word: Iterable[int]) -> Mat2:
        m = identity(self.ring)
        for k in word:
            m = mat_mul(self.ring, m, self.generators[k])
        return self.canonical(m)

    def element_set(self) -> frozenset:
        return frozenset(self.elements)


def generate_closure(ring: FiniteRing, generators: Sequence[Mat2], cap: Optional[int] = None,
                     normalize: Optional[Callable[[Mat2], Mat2]] = None,
                     name: str = '') -> GroupTable:
    """Breadth-first closure of invertible generators under multiplication."""
    cap = get_config().GROUP_SIZE_CAP if cap is None else cap
    for g in generators:
        if not ring.is_unit(mat_det(ring, g)):
            raise DomainError(f"generator {g} is not invertible")
    canon = normalize or (lambda m: m)
    gens = []
    for g in generators:
        g = canon(g)
        if g not in gens:
            gens.append(g)
    start = canon(identity(ring))
    elements = [start]
    parents: List[Optional[Tuple[int, int]]] = [None]
    index = {start: 0}
    frontier = 0
    while frontier < len(elements):
        x = elements[frontier]
        for k, g in enumerate(gens):
            y = canon(mat_mul(ring, x, g))
            if y not in index:
                if len(elements) >= cap:
                    raise CapExceededError('group', len(elements) + 1, cap)
                index[y] = len(elements)
                elements.append(y)
                parents.append((frontier, k))
        frontier += 1
    logger.info(f"Closure {name or 'group'} over {ring.name}: {len(elements)} elements")
    return GroupTable(ring, elements, gens, parents, normalize, name)


def elementary_generators(ring: FiniteRing) -> List[Mat2]:
    gens = [e12(ring, x) for x in ring.elements if x != ring.zero]
    gens += [e21(ring, x) for x in ring.elements if x != ring.zero]
    return gens


def e2_group(ring: FiniteRing, cap: Optional[int] = None) -> GroupTable:
    """E_2(A), generated by all E12(x) and E21(x)."""
    return generate_closure(ring, elementary_generators(ring), cap, name='E2')


def borel_group(ring: FiniteRing, cap: Optional[int] = None) -> GroupTable:
    """B(A): upper triangular matrices of determinant 1."""
    gens = [diag(ring, u) for u in ring.units] + [e12(ring, x) for x in ring.elements if x != ring.zero]
    return generate_closure(ring, gens, cap, name='B')


def torus_group(ring: FiniteRing) -> GroupTable:
    return generate_closure(ring, [diag(ring, u) for u in ring.units], name='T')


def sl2_elements(ring: FiniteRing, cap: Optional[int] = None) -> List[Mat2]:
    """SL_2(A) by determinant filter over all matrices."""
    cap = get_config().ENUMERATION_CAP if cap is None else cap
    total = ring.size ** 4
    if total > cap:
        raise CapExceededError('matrix enumeration', total, cap)
    one = ring.one
    els = ring.elements
    return [(a, b, c, d) for a in els for b in els for c in els for d in els
            if ring.sub(ring.mul(a, d), ring.mul(b, c)) == one]


def sl2_and_e2(ring: FiniteRing, cap: Optional[int] = None) -> Tuple[GroupTable, GroupTable, bool]:
    sl2 = GroupTable(ring, sl2_elements(ring), elementary_generators(ring), name='SL2')
    e2 = e2_group(ring, cap)
    equal = e2.element_set() == sl2.element_set()
    logger.debug(f"{ring.name}: |SL2| = {sl2.order}, |E2| = {e2.order}, equal={equal}")
    return sl2, e2, equal


def product_orders(ring: FiniteRing, group: Optional[GroupTable] = None) -> Optional[Tuple[int, int]]:
    """(|E_2(A)|, product of |E_2(A_i)| over the written factors); None for a single factor."""
    atoms = ring.spec.atoms
    if len(atoms) < 2:
        return None
    whole = (group if group is not None else e2_group(ring)).order
    split = 1
    for atom in atoms:
        split *= e2_group(build_ring(RingSpec((atom,)))).order
    logger.debug(f"{ring.name}: |E2| = {whole}, over the factors {split}")
    return whole, split


# ---------------------------------------------------------------------------
# Standard subgroups
# ---------------------------------------------------------------------------

@dataclass
class StandardSubgroups:
    borel: GroupTable
    torus: GroupTable
    unipotent: GroupTable
    w: Mat2
    D: Dict[int, Mat2]
    E12: Dict[int, Mat2]
    E21: Dict[int, Mat2]


def standard_subgroups(ring: FiniteRing, group: GroupTable) -> StandardSubgroups:
    """B(A), T(A), N(A) inside a group, checked as stabilizers of points of P^1."""
    zero, one = ring.zero, ring.one
    infinity = projective_rep(ring, (one, zero))
    origin = projective_rep(ring, (zero, one))
    fixes = lambda m, p: projective_rep(ring, mat_apply(ring, m, p)) == p

    borel = [i for i, m in enumerate(group.elements) if m[2] == zero]
    torus = [i for i in borel if group.elements[i][1] == zero]
    unipotent = [i for i in borel if group.elements[i][0] == one and group.elements[i][3] == one]

    stab_inf = [i for i, m in enumerate(group.elements) if fixes(m, infinity)]
    stab_both = [i for i in stab_inf if fixes(group.elements[i], origin)]
    if stab_inf != borel or stab_both != torus:
        raise DomainError(f"triangular subgroups of {group.name} are not the point stabilizers")
    if group.normalize is None:
        lower = {group.index_of(e21(ring, x)) for x in ring.elements}
        if lower & set(borel) != {group.identity}:
            raise DomainError("Borel subgroup meets the lower unipotent group nontrivially")

    diagonals = [diag(ring, a) for a in ring.units]
    uppers = [e12(ring, x) for x in ring.elements if x != zero]
    tables = {}
    for name, gens, members in (('B', diagonals + uppers, borel), ('T', diagonals, torus),
                                ('N', uppers, unipotent)):
        table = generate_closure(ring, gens, normalize=group.normalize, name=name)
        if table.element_set() != {group.elements[i] for i in members}:
            raise DomainError(f"{name} of {group.name} differs from its generated subgroup")
        tables[name] = table

    subs = StandardSubgroups(
        borel=tables['B'],
        torus=tables['T'],
        unipotent=tables['N'],
        w=weyl(ring),
        D={a: diag(ring, a) for a in ring.units},
        E12={x: e12(ring, x) for x in ring.elements},
        E21={x: e21(ring, x) for x in ring.elements},
    )
    logger.debug(f"{ring.name}: |B| = {subs.borel.order}, |T| = {subs.torus.order}, "
                 f"|N| = {subs.unipotent.order}")
    return subs


# ---------------------------------------------------------------------------
# Subgroups, quotients and abelianization
# ---------------------------------------------------------------------------

def _grow(group: GroupTable, members: set, generators: List[int]) -> set:
    grown = set(members)
    frontier = list(members)
    while frontier:
        y = frontier.pop()
        for s in generators:
            z = group.mul(y, s)
            if z not in grown:
                grown.add(z)
                frontier.append(z)
    return grown


def generated_subgroup(group: GroupTable, seeds: Iterable[int]) -> set:
    members = {group.identity}
    gens: List[int] = []
    for x in seeds:
        if x not in members:
            gens.append(x)
            members = _grow(group, members, gens)
    return members


def normal_closure(group: GroupTable, seeds: Iterable[int]) -> set:
    """Smallest normal subgroup containing the seeds (element indices)."""
    members = {group.identity}
    gens: List[int] = []
    conjugators = [group.index[g] for g in group.generators]
    queue = list(seeds)
    while queue:
        x = queue.pop()
        if x in members:
            continue
        gens.append(x)
        members = _grow(group, members, gens)
        queue.extend(group.conjugate(x, c) for c in conjugators)
    return members


def commutator_subgroup(group: GroupTable) -> set:
    gens = group.generator_indices()
    seeds = [group.commutator(g, h) for g in gens for h in gens]
    return normal_closure(group, seeds)


def commutator_subgroup_all_pairs(group: GroupTable) -> set:
    """Derived subgroup from every commutator [g, h]."""
    n = group.order
    return generated_subgroup(group, sorted({group.commutator(i, j)
                                             for i in range(n) for j in range(i + 1, n)}))


def coset_map(group: GroupTable, normal: set) -> List[int]:
    """Least element index of each coset gN."""
    rep = [-1] * group.order
    normal = sorted(normal)
    for g in range(group.order):
        if rep[g] < 0:
            for c in normal:
                rep[group.mul(g, c)] = g
    return rep


def finite_abelian_structure(group: GroupTable, normal: set) -> Tuple[AbGroup, Dict[int, Tuple[int, ...]]]:
    """Structure of an abelian quotient G/N, with coordinates keyed by coset representative."""
    rep = coset_map(group, normal)
    gens = []
    for g in group.generator_indices():
        r = rep[g]
        if r != rep[group.identity] and r not in gens:
            gens.append(r)
    multiply = lambda x, y: rep[group.mul(x, y)]
    quotient, coords = abelian_group_from_generators(rep[group.identity], gens, multiply)
    return quotient, coords


def abelianization(group: GroupTable) -> AbGroup:
    """H_1(G, Z) = G / [G, G]."""
    derived = commutator_subgroup(group)
    quotient, _ = finite_abelian_structure(group, derived)
    logger.debug(f"{group.name} over {group.ring.name}: |[G,G]| = {len(derived)}, G^ab = {quotient}")
    return quotient


def abelianization_map(group: GroupTable) -> Tuple[AbGroup, Callable[[Mat2], Tuple[int, ...]]]:
    """G^ab with the projection G -> G^ab on matrices."""
    derived = commutator_subgroup(group)
    rep = coset_map(group, derived)
    quotient, coords = finite_abelian_structure(group, derived)
    return quotient, lambda m: coords[rep[group.index_of(m)]]


def central_quotient(group: GroupTable) -> GroupTable:
    """PE_2 = group / {±I}."""
    ring = group.ring
    if minus_identity(ring) not in group:
        raise DomainError(f"-I is not in {group.name}")
    quotient = generate_closure(ring, group.generators, normalize=sign_normalizer(ring),
                                name=f"P{group.name}")
    expected = group.order if minus_identity(ring) == identity(ring) else group.order // 2
    if quotient.order != expected:
        raise DomainError(f"quotient by ±I has order {quotient.order}, expected {expected}")
    return quotient


# ---------------------------------------------------------------------------
# Matrix identities used by the chain-level cycles
# ---------------------------------------------------------------------------

def verify_cycle_identities(ring: FiniteRing) -> List[str]:
    """Exhaustive check of the conjugation and Weyl identities over all units."""
    failures = []
    w = weyl(ring)
    for z in ring.units:
        dz = diag(ring, z)
        dz_inv = mat_inv(ring, dz)
        z_inv = ring.inverse(z)
        z2 = ring.mul(z, z)
        for u in ring.units:
            lhs = mat_mul(ring, mat_mul(ring, dz, h_mat(ring, u)), dz_inv)
            if lhs != h_mat(ring, ring.div(u, z2)):
                failures.append(f"D(z) h_u D(z)^-1 != h_(u/z^2) at z={ring.label(z)}, u={ring.label(u)}")
        lhs = mat_mul(ring, w, mat_inv(ring, g_mat(ring, z)))
        rhs = mat_mul(ring, dz_inv, mat_inv(ring, h_mat(ring, z_inv)))
        rhs = mat_mul(ring, mat_mul(ring, rhs, w), mat_inv(ring, h_mat(ring, z)))
        if lhs != rhs:
            failures.append(f"w g_z^-1 != D(z)^-1 h_(z^-1)^-1 w h_z^-1 at z={ring.label(z)}")
    return failures
