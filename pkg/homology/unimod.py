"""
The complex of unimodular vectors.

Y_n is free on ordered (n+1)-tuples of points of P^1(A) that are pairwise in
general position. Points are stored by index; simplices are tuples of point
indices and each degree keeps its basis in lexicographic order.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from algebra.matgroup import (GroupTable, Mat2, diag, e12, e21, mat_apply, mat_det, mat_inv,
                              mat_mul)
from algebra.ringkit import FiniteRing, additive_group, unit_data
from algebra.zlinalg import AbGroup, Lattice, SparseMatrix, Vector, quotient_structure
from config.dynamic_config import get_config
from utils.errors import CapExceededError, DomainError

logger = logging.getLogger(__name__)

Simplex = Tuple[int, ...]


def is_unimodular(ring: FiniteRing, u1: int, u2: int, multiples: Optional[Dict[int, frozenset]] = None) -> bool:
    """Whether the ideal (u1, u2) is all of A."""
    if multiples is None:
        multiples = {}
    for u in (u1, u2):
        if u not in multiples:
            multiples[u] = frozenset(ring.mul(u, x) for x in ring.elements)
    second = multiples[u2]
    return any(ring.sub(ring.one, a) in second for a in multiples[u1])


def proj_points(ring: FiniteRing) -> Tuple[List[Tuple[int, int]], Dict[Tuple[int, int], int]]:
    """Canonical representatives of P^1(A), and the point index of every unimodular vector.

    The representative of a class is its least unit multiple.
    """
    multiples: Dict[int, frozenset] = {}
    reps = set()
    classes: Dict[Tuple[int, int], Tuple[int, int]] = {}
    for u1 in ring.elements:
        for u2 in ring.elements:
            v = (u1, u2)
            if v in classes or not is_unimodular(ring, u1, u2, multiples):
                continue
            orbit = [(ring.mul(u, u1), ring.mul(u, u2)) for u in ring.units]
            rep = min(orbit)
            reps.add(rep)
            for w in orbit:
                classes[w] = rep
    points = sorted(reps)
    position = {p: i for i, p in enumerate(points)}
    return points, {v: position[rep] for v, rep in classes.items()}


@dataclass(frozen=True)
class OrbitClass:
    """Canonical form of a simplex of degree 2 to 4.

    ``class_rep`` is the square-class representative r; ``params`` holds x
    (degree 3) or (x, y) (degree 4) so the canonical simplex is
    (∞, 0, r, rx, ry). ``transporter`` carries the input simplex onto it.
    """
    degree: int
    class_rep: int
    params: Tuple[int, ...]
    transporter: Mat2
    canonical: Simplex

    @property
    def key(self) -> Tuple[int, ...]:
        return (self.class_rep,) + self.params


class ChainComplexY:
    """Y_•(A^2) truncated at a maximal degree."""

    def __init__(self, ring: FiniteRing, max_degree: int, points: List[Tuple[int, int]],
                 point_index: Dict[Tuple[int, int], int], bases: List[List[Simplex]],
                 generators: List[Mat2]):
        self.ring = ring
        self.max_degree = max_degree
        self.points = points
        self.point_index = point_index
        self.bases = bases
        self.indices: List[Dict[Simplex, int]] = [{s: i for i, s in enumerate(b)} for b in bases]
        self.generators = generators
        self.units = unit_data(ring)
        self.point_actions = [[self.act_point(g, p) for p in range(len(points))] for g in generators]
        self._boundaries: Dict[int, SparseMatrix] = {}
        self._permutations: Dict[Tuple[int, int], List[int]] = {}

    def __repr__(self) -> str:
        sizes = [len(b) for b in self.bases]
        return f"ChainComplexY({self.ring.name!r}, sizes={sizes})"

    # points ---------------------------------------------------------------

    def point_of(self, vec: Tuple[int, int]) -> int:
        return self.point_index[vec]

    @property
    def infinity(self) -> int:
        return self.point_of((self.ring.one, self.ring.zero))

    @property
    def origin(self) -> int:
        return self.point_of((self.ring.zero, self.ring.one))

    def point(self, a: int) -> int:
        """The point <e1 + a e2>."""
        return self.point_of((self.ring.one, a))

    def in_general_position(self, p: int, q: int) -> bool:
        u, v = self.points[p], self.points[q]
        det = self.ring.sub(self.ring.mul(u[0], v[1]), self.ring.mul(u[1], v[0]))
        return self.ring.is_unit(det)

    def act_point(self, g: Mat2, p: int) -> int:
        return self.point_of(mat_apply(self.ring, g, self.points[p]))

    # simplices ------------------------------------------------------------

    def rank(self, n: int) -> int:
        return len(self.bases[n])

    def simplex_index(self, simplex: Sequence[int]) -> int:
        simplex = tuple(simplex)
        return self.indices[len(simplex) - 1][simplex]

    def act(self, g: Mat2, simplex: Sequence[int]) -> Simplex:
        return tuple(self.act_point(g, p) for p in simplex)

    def chain(self, terms: Mapping[Sequence[int], int]) -> Vector:
        """Sparse vector of a formal combination of simplices of one degree."""
        out: Vector = {}
        for simplex, c in terms.items():
            k = self.simplex_index(simplex)
            value = out.get(k, 0) + c
            if value:
                out[k] = value
            else:
                out.pop(k, None)
        return out

    def act_chain(self, g: Mat2, n: int, vec: Mapping[int, int]) -> Vector:
        out: Vector = {}
        for k, c in vec.items():
            j = self.indices[n][self.act(g, self.bases[n][k])]
            out[j] = out.get(j, 0) + c
        return {k: c for k, c in out.items() if c}

    def permutation(self, generator: int, n: int) -> List[int]:
        """Action of one generator on the basis of Y_n."""
        key = (generator, n)
        if key not in self._permutations:
            moves = self.point_actions[generator]
            index = self.indices[n]
            self._permutations[key] = [index[tuple(moves[p] for p in s)] for s in self.bases[n]]
        return self._permutations[key]

    # boundaries -----------------------------------------------------------

    def boundary_matrix(self, n: int) -> SparseMatrix:
        """∂_n : Y_n -> Y_{n-1} as alternating face sums; n = 0 gives the zero map."""
        if n == 0:
            return SparseMatrix(0, [{} for _ in self.bases[0]])
        if n not in self._boundaries:
            lower = self.indices[n - 1]
            columns = []
            for s in self.bases[n]:
                col: Vector = {}
                for i in range(n + 1):
                    k = lower[s[:i] + s[i + 1:]]
                    value = col.get(k, 0) + (-1) ** i
                    if value:
                        col[k] = value
                    else:
                        col.pop(k, None)
                columns.append(col)
            self._boundaries[n] = SparseMatrix(len(self.bases[n - 1]), columns)
        return self._boundaries[n]

    def boundary(self, n: int, vec: Mapping[int, int]) -> Vector:
        return self.boundary_matrix(n).apply(vec)

    def augmentation(self, vec: Mapping[int, int]) -> int:
        return sum(vec.values())


def build_y_complex(ring: FiniteRing, max_degree: int = 4, cap: Optional[int] = None,
                    truncate: bool = False, verify_ge2: Optional[GroupTable] = None) -> ChainComplexY:
    """Build Y_0..Y_max_degree.

    General position means the representative determinant is a unit. With
    ``truncate`` a basis over the cap ends the complex at the previous degree
    instead of raising. ``verify_ge2`` takes an E_2 table and checks every
    general-position pair against it.
    """
    if not 0 <= max_degree <= 4:
        raise ValueError("max_degree must lie in 0..4")
    cap = get_config().BASIS_SIZE_CAP if cap is None else cap
    points, point_index = proj_points(ring)
    n_points = len(points)

    def general(p, q):
        u, v = points[p], points[q]
        return ring.is_unit(ring.sub(ring.mul(u[0], v[1]), ring.mul(u[1], v[0])))

    neighbours = [[q for q in range(n_points) if q != p and general(p, q)] for p in range(n_points)]
    if verify_ge2 is not None:
        for p in range(n_points):
            for q in neighbours[p]:
                u, v = points[p], points[q]
                t = ring.inverse(ring.sub(ring.mul(u[0], v[1]), ring.mul(u[1], v[0])))
                h = (u[0], ring.mul(v[0], t), u[1], ring.mul(v[1], t))
                if h not in verify_ge2:
                    raise DomainError(f"pair {u}, {v} is in general position but not in GE_2")

    bases: List[List[Simplex]] = [[(p,) for p in range(n_points)]]
    adjacency = [set(nb) for nb in neighbours]
    for n in range(1, max_degree + 1):
        grown = []
        for s in bases[-1]:
            common = set(neighbours[s[0]])
            for p in s[1:]:
                common &= adjacency[p]
            grown.extend(s + (q,) for q in sorted(common))
        if len(grown) > cap:
            if truncate:
                logger.warning(f"{ring.name}: Y_{n} has {len(grown)} simplices, over cap {cap}; "
                               f"truncating at degree {n - 1}")
                break
            raise CapExceededError(f'Y_{n} basis', len(grown), cap)
        grown.sort()
        bases.append(grown)

    additive = additive_group(ring)
    generators = [e12(ring, x) for x in additive.generators] + [e21(ring, x) for x in additive.generators]
    complex_ = ChainComplexY(ring, len(bases) - 1, points, point_index, bases, generators)
    logger.info(f"Built Y complex over {ring.name}: sizes {[len(b) for b in bases]}")
    return complex_


# ---------------------------------------------------------------------------
# Homology and coinvariants
# ---------------------------------------------------------------------------

def boundary_lattice(complex_: ChainComplexY, n: int) -> Lattice:
    """Image of ∂_n as an echelon lattice in Y_{n-1}."""
    matrix = complex_.boundary_matrix(n)
    return Lattice(matrix.nrows, matrix.columns)


def y_homology(complex_: ChainComplexY, k: int) -> AbGroup:
    """H_k = ker ∂_k / im ∂_{k+1}; torsion is read off coker ∂_{k+1}."""
    if k + 1 > complex_.max_degree:
        raise ValueError(f"H_{k} needs the complex built to degree {k + 1}")
    n_k = complex_.rank(k)
    rank_k = 0 if k == 0 else boundary_lattice(complex_, k).rank
    coker = quotient_structure(n_k, boundary_lattice(complex_, k + 1))
    free = coker.rank - rank_k
    homology = AbGroup.from_orders(list(coker.torsion) + [0] * free)
    logger.debug(f"{complex_.ring.name}: H_{k}(Y) = {homology}")
    return homology


def augmentation_exact(complex_: ChainComplexY) -> bool:
    """ε ∘ ∂_1 = 0, ε onto Z, and ker ε = im ∂_1."""
    if complex_.max_degree < 1:
        raise ValueError("needs degree 1")
    d1 = complex_.boundary_matrix(1)
    if any(complex_.augmentation(c) for c in d1.columns):
        return False
    return y_homology(complex_, 0).invariants == (0,)


def check_boundaries(complex_: ChainComplexY) -> List[str]:
    failures = []
    for n in range(2, complex_.max_degree + 1):
        outer = complex_.boundary_matrix(n - 1)
        inner = complex_.boundary_matrix(n)
        bad = sum(1 for c in inner.columns if outer.apply(c))
        if bad:
            failures.append(f"∂_{n - 1}∂_{n} != 0 on {bad} simplices")
    return failures


def check_equivariance(complex_: ChainComplexY) -> List[str]:
    """∂(g·s) = g·∂(s) for every generator and basis simplex."""
    failures = []
    for gi in range(len(complex_.generators)):
        for n in range(1, complex_.max_degree + 1):
            perm_n = complex_.permutation(gi, n)
            perm_low = complex_.permutation(gi, n - 1)
            d = complex_.boundary_matrix(n)
            for k, col in enumerate(d.columns):
                moved = {perm_low[j]: c for j, c in col.items()}
                if d.columns[perm_n[k]] != moved:
                    failures.append(f"generator {gi} does not commute with ∂_{n} at simplex {k}")
                    break
    return failures


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


def orbits(complex_: ChainComplexY, n: int, permutations: Optional[Sequence[Sequence[int]]] = None) -> List[int]:
    """Orbit id (least member index) of every basis simplex of Y_n."""
    uf = _UnionFind(complex_.rank(n))
    if permutations is None:
        permutations = [complex_.permutation(g, n) for g in range(len(complex_.generators))]
    for perm in permutations:
        for k, j in enumerate(perm):
            uf.union(k, j)
    return [uf.find(k) for k in range(complex_.rank(n))]


class OrbitProjection:
    """Y_n -> free abelian group on orbits."""

    def __init__(self, orbit_of: Sequence[int], order: Sequence[int]):
        position = {o: i for i, o in enumerate(order)}
        self.slot = [position[o] for o in orbit_of]
        self.size = len(order)

    def __call__(self, vec: Mapping[int, int]) -> Tuple[int, ...]:
        out = [0] * self.size
        for k, c in vec.items():
            out[self.slot[k]] += c
        return tuple(out)


def symbol_label(ring: FiniteRing, orbit: OrbitClass) -> str:
    base = f"<{ring.label(orbit.class_rep)}>"
    if orbit.degree == 2:
        return base + "[]"
    return base + "[" + ",".join(ring.label(x) for x in orbit.params) + "]'"


def y_coinvariants(complex_: ChainComplexY, n: int) -> Tuple[AbGroup, List[str]]:
    """(Y_n)_{E_2}: free on orbits; labels are the symbols <a>[] and <a>[x]'."""
    if n > complex_.max_degree:
        raise ValueError(f"Y_{n} is not built")
    orbit_of = orbits(complex_, n)
    roots = sorted(set(orbit_of))
    if n >= 2:
        forms = {r: canonicalize_tuple(complex_, complex_.bases[n][r]) for r in roots}
        roots.sort(key=lambda r: forms[r].key)
        labels = [symbol_label(complex_.ring, forms[r]) for r in roots]
    else:
        labels = [",".join(['∞', '0'][:n + 1])] if roots else []
    group = AbGroup(tuple([0] * len(roots)), OrbitProjection(orbit_of, roots))
    logger.debug(f"{complex_.ring.name}: (Y_{n}) coinvariants free of rank {len(roots)}")
    return group, labels


# ---------------------------------------------------------------------------
# Canonical forms
# ---------------------------------------------------------------------------

def canonicalize_tuple(complex_: ChainComplexY, simplex: Sequence[int],
                       e2: Optional[GroupTable] = None) -> OrbitClass:
    """Move a simplex of degree 2..4 to (∞, 0, r, rx, ry) with r a square-class rep.

    With ``e2`` the transporter is also located in the E_2 table.
    """
    ring = complex_.ring
    simplex = tuple(simplex)
    degree = len(simplex) - 1
    if not 2 <= degree <= 4:
        raise ValueError("canonical forms are defined in degrees 2 to 4")
    for i in range(len(simplex)):
        for j in range(i + 1, len(simplex)):
            if not complex_.in_general_position(simplex[i], simplex[j]):
                raise DomainError(f"simplex {simplex} is not in general position")

    u, v = complex_.points[simplex[0]], complex_.points[simplex[1]]
    det_inv = ring.inverse(mat_det(ring, (u[0], v[0], u[1], v[1])))
    h = (u[0], ring.mul(v[0], det_inv), u[1], ring.mul(v[1], det_inv))
    h_inv = mat_inv(ring, h)
    alpha, beta = mat_apply(ring, h_inv, complex_.points[simplex[2]])
    a = ring.div(beta, alpha)
    units = complex_.units
    r = units.class_of(a)
    t = units.sqrt[ring.div(a, r)]
    transporter = mat_mul(ring, diag(ring, t), h_inv)

    params = []
    for p in simplex[3:]:
        gamma, delta = mat_apply(ring, transporter, complex_.points[p])
        params.append(ring.div(ring.div(delta, gamma), r))
    canonical = (complex_.infinity, complex_.origin, complex_.point(r))
    canonical += tuple(complex_.point(ring.mul(r, x)) for x in params)
    if complex_.act(transporter, simplex) != canonical:
        raise DomainError(f"transporter does not carry {simplex} to canonical form")
    if e2 is not None and transporter not in e2:
        raise DomainError("transporter is not in E_2")
    return OrbitClass(degree, r, tuple(params), transporter, canonical)


def canonical_simplex(complex_: ChainComplexY, r: int, *params: int) -> Simplex:
    """(∞, 0, r, r·x, ...) as point indices."""
    ring = complex_.ring
    return ((complex_.infinity, complex_.origin, complex_.point(r))
            + tuple(complex_.point(ring.mul(r, x)) for x in params))
