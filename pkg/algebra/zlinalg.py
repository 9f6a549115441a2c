"""
Exact integer lattice algebra.

Normal forms, kernels and quotient presentations over Z. All arithmetic is on
Python integers, so nothing overflows. Sparse vectors are plain dicts mapping
a coordinate index to a nonzero entry.
"""

import logging
from dataclasses import dataclass, field
from math import prod
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import factorint

from utils.errors import LinAlgError

logger = logging.getLogger(__name__)

Vector = Dict[int, int]


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b) >= 0."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def sparse(vec: Union[Mapping[int, int], Sequence[int]]) -> Vector:
    """Copy a dense sequence or a mapping into a fresh sparse vector."""
    if isinstance(vec, Mapping):
        return {k: v for k, v in vec.items() if v}
    return {i: v for i, v in enumerate(vec) if v}


def _axpy(target: Vector, row: Mapping[int, int], q: int) -> None:
    """target += q * row, in place, dropping zeros."""
    for k, x in row.items():
        value = target.get(k, 0) + q * x
        if value:
            target[k] = value
        else:
            target.pop(k, None)


def _combine(u: Mapping[int, int], s: int, w: Mapping[int, int], t: int) -> Vector:
    out = {k: s * x for k, x in u.items()} if s else {}
    if t:
        _axpy(out, w, t)
    return {k: x for k, x in out.items() if x}


def _negate(v: Mapping[int, int]) -> Vector:
    return {k: -x for k, x in v.items()}


class IntMatrix:
    """Dense integer matrix stored as a list of rows."""

    __slots__ = ('rows', 'nrows', 'ncols')

    def __init__(self, rows: Iterable[Sequence[int]] = (), ncols: Optional[int] = None):
        self.rows = [[int(x) for x in r] for r in rows]
        self.nrows = len(self.rows)
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        self.ncols = ncols
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("rows of unequal length")

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> 'IntMatrix':
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> 'IntMatrix':
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def diagonal(cls, entries: Sequence[int], nrows: Optional[int] = None,
                 ncols: Optional[int] = None) -> 'IntMatrix':
        nrows = len(entries) if nrows is None else nrows
        ncols = len(entries) if ncols is None else ncols
        m = cls.zeros(nrows, ncols)
        for i, d in enumerate(entries):
            m.rows[i][i] = d
        return m

    @classmethod
    def from_columns(cls, columns: Sequence[Union[Mapping[int, int], Sequence[int]]],
                     nrows: int) -> 'IntMatrix':
        m = cls.zeros(nrows, len(columns))
        for j, col in enumerate(columns):
            for i, x in sparse(col).items():
                m.rows[i][j] = x
        return m

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> List[int]:
        return [r[j] for r in self.rows]

    def columns(self) -> List[List[int]]:
        return [self.column(j) for j in range(self.ncols)]

    def sparse_columns(self) -> List[Vector]:
        cols: List[Vector] = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, x in enumerate(r):
                if x:
                    cols[j][i] = x
        return cols

    def transpose(self) -> 'IntMatrix':
        return IntMatrix(self.columns(), self.nrows)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.ncols != other.nrows:
                raise ValueError("dimension mismatch")
            cols = other.columns()
            return IntMatrix(
                [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows],
                other.ncols)
        vec = list(other)
        if len(vec) != self.ncols:
            raise ValueError("dimension mismatch")
        return [sum(a * b for a, b in zip(r, vec)) for r in self.rows]

    def __eq__(self, other) -> bool:
        return (isinstance(other, IntMatrix) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.rows == other.rows)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def tolist(self) -> List[List[int]]:
        return [list(r) for r in self.rows]

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows!r}, ncols={self.ncols})"


class SparseMatrix:
    """Column-sparse integer matrix; column j maps row index -> entry."""

    __slots__ = ('nrows', 'columns')

    def __init__(self, nrows: int, columns: Iterable[Mapping[int, int]] = ()):
        self.nrows = nrows
        self.columns = [sparse(c) for c in columns]

    @property
    def ncols(self) -> int:
        return len(self.columns)

    @classmethod
    def from_dense(cls, m: IntMatrix) -> 'SparseMatrix':
        return cls(m.nrows, m.sparse_columns())

    def to_dense(self) -> IntMatrix:
        return IntMatrix.from_columns(self.columns, self.nrows)

    def apply(self, vec: Mapping[int, int]) -> Vector:
        out: Vector = {}
        for j, c in vec.items():
            if c:
                _axpy(out, self.columns[j], c)
        return out

    def compose(self, other: 'SparseMatrix') -> 'SparseMatrix':
        """Matrix of self after other."""
        return SparseMatrix(self.nrows, (self.apply(c) for c in other.columns))

    def is_zero(self) -> bool:
        return not any(self.columns)


Relations = Union[IntMatrix, SparseMatrix, Iterable[Union[Mapping[int, int], Sequence[int]]]]


def _relation_vectors(relations: Relations) -> Iterable[Vector]:
    if isinstance(relations, IntMatrix):
        return relations.sparse_columns()
    if isinstance(relations, SparseMatrix):
        return relations.columns
    return (sparse(r) for r in relations)


# ---------------------------------------------------------------------------
# Smith normal form (dense, with transforms)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmithForm:
    """U * A * V == D with U, V unimodular and D diagonal."""
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    invariant_factors: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d)


def _min_pivot(a, r, c, t, cells=None):
    best = None
    candidates = cells if cells is not None else (
        (i, j) for i in range(t, r) for j in range(t, c))
    for i, j in candidates:
        x = a[i][j]
        if x and (best is None or (abs(x), i, j) < best):
            best = (abs(x), i, j)
    return None if best is None else best[1:]


def smith_normal_form(m: IntMatrix, verify: bool = True) -> SmithForm:
    """Smith normal form with minimal-absolute-value pivoting.

    Ties go to the lowest (row, column). The result is re-verified by exact
    multiplication unless ``verify`` is False.
    """
    r, c = m.nrows, m.ncols
    a = [row[:] for row in m.rows]
    u = [[int(i == j) for j in range(r)] for i in range(r)]
    v = [[int(i == j) for j in range(c)] for i in range(c)]

    def swap_rows(i, k):
        if i != k:
            a[i], a[k] = a[k], a[i]
            u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        if j != k:
            for row in a:
                row[j], row[k] = row[k], row[j]
            for row in v:
                row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):
        rs, rd = a[src], a[dst]
        for k in range(c):
            if rs[k]:
                rd[k] += q * rs[k]
        us, ud = u[src], u[dst]
        for k in range(r):
            if us[k]:
                ud[k] += q * us[k]

    def add_col(dst, src, q):
        for row in a:
            if row[src]:
                row[dst] += q * row[src]
        for row in v:
            if row[src]:
                row[dst] += q * row[src]

    t = 0
    while t < min(r, c):
        pivot = _min_pivot(a, r, c, t)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            dirty = False
            p = a[t][t]
            for i in range(t + 1, r):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        add_row(i, t, -q)
                    dirty = dirty or bool(a[i][t])
            for j in range(t + 1, c):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        add_col(j, t, -q)
                    dirty = dirty or bool(a[t][j])
            if dirty:
                cells = [(i, t) for i in range(t, r)] + [(t, j) for j in range(t + 1, c)]
                i, j = _min_pivot(a, r, c, t, cells)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next((i for i in range(t + 1, r)
                        for j in range(t + 1, c) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    U, D, V = IntMatrix(u, r), IntMatrix(a, c), IntMatrix(v, c)
    factors = tuple(a[i][i] for i in range(min(r, c)))
    if verify and (U @ m) @ V != D:
        raise LinAlgError("Smith form transforms do not reproduce the diagonal")
    return SmithForm(U, D, V, factors)


# ---------------------------------------------------------------------------
# Sparse echelon lattices
# ---------------------------------------------------------------------------

class Lattice:
    """Sublattice of Z^dim kept in sparse row echelon form.

    Each stored row is keyed by its pivot (first nonzero coordinate) and the
    pivot entry is positive.
    """

    __slots__ = ('dim', '_rows')

    def __init__(self, dim: int, vectors: Iterable[Union[Mapping[int, int], Sequence[int]]] = ()):
        self.dim = dim
        self._rows: Dict[int, Vector] = {}
        for vec in vectors:
            self.add_vector(vec)

    def copy(self) -> 'Lattice':
        other = Lattice(self.dim)
        other._rows = {p: dict(r) for p, r in self._rows.items()}
        return other

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> List[int]:
        return sorted(self._rows)

    def row(self, pivot: int) -> Vector:
        return self._rows[pivot]

    def rows(self) -> List[Vector]:
        return [self._rows[p] for p in self.pivots]

    def add_vector(self, vec: Union[Mapping[int, int], Sequence[int]]) -> bool:
        """Insert a vector; returns True when the lattice changed."""
        v = sparse(vec)
        rows = self._rows
        changed = False
        while v:
            j = min(v)
            row = rows.get(j)
            if row is None:
                rows[j] = v if v[j] > 0 else _negate(v)
                return True
            a, b = row[j], v[j]
            if b % a == 0:
                _axpy(v, row, -(b // a))
            elif a % b == 0:
                new_row = v if b > 0 else _negate(v)
                rows[j] = new_row
                v = dict(row)
                _axpy(v, new_row, -(a // new_row[j]))
                changed = True
            else:
                x, y, g = xgcd(a, b)
                rows[j] = _combine(row, x, v, y)
                v = _combine(row, -(b // g), v, a // g)
                changed = True
        return changed

    def __contains__(self, vec) -> bool:
        return self.coordinates(vec) is not None

    def coordinates(self, vec: Union[Mapping[int, int], Sequence[int]],
                    check: bool = True) -> Optional[Dict[int, int]]:
        """Coefficients (keyed by pivot) expressing vec over the rows.

        With ``check=False`` the caller guarantees membership and only pivot
        coordinates are tracked.
        """
        rows = self._rows
        v = sparse(vec)
        if not check:
            v = {k: x for k, x in v.items() if k in rows}
        coords: Dict[int, int] = {}
        while v:
            j = min(v)
            row = rows.get(j)
            if row is None or v[j] % row[j]:
                return None
            q = v[j] // row[j]
            coords[j] = q
            if check:
                _axpy(v, row, -q)
            else:
                for k, x in row.items():
                    if k in rows:
                        value = v.get(k, 0) - q * x
                        if value:
                            v[k] = value
                        else:
                            v.pop(k, None)
        return coords

    def reduce_fully(self) -> 'Lattice':
        """Bring entries above each pivot into [0, pivot)."""
        pivots = self.pivots
        for idx, p in enumerate(pivots):
            prow = self._rows[p]
            a = prow[p]
            for q in pivots[:idx]:
                row = self._rows[q]
                x = row.get(p)
                if x:
                    f = x // a
                    if f:
                        _axpy(row, prow, -f)
        return self

    def to_matrix(self) -> IntMatrix:
        """Basis as the columns of a dense matrix."""
        return IntMatrix.from_columns(self.rows(), self.dim)


def kernel_lattice(matrix: Union[IntMatrix, SparseMatrix]) -> Lattice:
    """Full integer kernel of a matrix, as a reduced echelon lattice."""
    if isinstance(matrix, IntMatrix):
        matrix = SparseMatrix.from_dense(matrix)
    nrows, ncols = matrix.nrows, matrix.ncols
    augmented = Lattice(nrows + ncols)
    for j, col in enumerate(matrix.columns):
        v = dict(col)
        v[nrows + j] = 1
        augmented.add_vector(v)
    kernel = Lattice(ncols)
    for p in augmented.pivots:
        if p >= nrows:
            kernel._rows[p - nrows] = {k - nrows: x for k, x in augmented.row(p).items()}
    logger.debug(f"kernel of {nrows}x{ncols} matrix has rank {kernel.rank}")
    return kernel.reduce_fully()


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Columns form a basis of the integer kernel of m."""
    basis = kernel_lattice(m).to_matrix()
    if not (m @ basis).is_zero():
        raise LinAlgError("kernel basis is not annihilated")
    return basis


class LinearSolver:
    """Express vectors as integer combinations of fixed generators."""

    def __init__(self, generators: Sequence[Union[Mapping[int, int], Sequence[int]]], dim: int):
        self.dim = dim
        self.count = len(generators)
        self._lattice = Lattice(dim + self.count)
        for j, gen in enumerate(generators):
            v = sparse(gen)
            v[dim + j] = 1
            self._lattice.add_vector(v)

    def solve(self, target: Union[Mapping[int, int], Sequence[int]]) -> Optional[List[int]]:
        rows = self._lattice._rows
        dim = self.dim
        v = sparse(target)
        while True:
            head = [k for k in v if k < dim]
            if not head:
                break
            j = min(head)
            row = rows.get(j)
            if row is None or v[j] % row[j]:
                return None
            _axpy(v, row, -(v[j] // row[j]))
        return [-v.get(dim + j, 0) for j in range(self.count)]


def solve_in_lattice(basis: IntMatrix, target: Sequence[int]) -> Optional[List[int]]:
    """Coordinates of target over the columns of basis, or None."""
    coords = LinearSolver(basis.sparse_columns(), basis.nrows).solve(target)
    if coords is None:
        return None
    if basis @ coords != list(target):
        raise LinAlgError("lattice solution does not reproduce the target")
    return coords


def preimage_lattice(generators: Sequence[Union[Mapping[int, int], Sequence[int]]], dim: int,
                     moduli: Sequence[int]) -> Lattice:
    """All c with sum(c_j * generator_j) in the lattice spanned by moduli[i] * e_i.

    A modulus of 0 leaves its coordinate free, so this is the kernel of
    Z^n -> Z^dim / diag(moduli).
    """
    n = len(generators)
    columns = [sparse(g) for g in generators]
    columns += [{i: d} for i, d in enumerate(moduli) if d]
    kernel = kernel_lattice(SparseMatrix(dim, columns))
    result = Lattice(n)
    for row in kernel.rows():
        result.add_vector({k: x for k, x in row.items() if k < n})
    return result.reduce_fully()


# ---------------------------------------------------------------------------
# Finitely generated abelian groups
# ---------------------------------------------------------------------------

class QuotientProjection:
    """Canonical coordinates on Z^n / L.

    Unit-pivot rows of L eliminate their pivot coordinates; the remaining
    relations live on a small core that is diagonalized densely.
    """

    def __init__(self, unit_rows: Dict[int, Vector], core_transform: List[Vector],
                 moduli: Tuple[int, ...], free_columns: List[int]):
        self.unit_rows = unit_rows
        self.core_transform = core_transform
        self.moduli = moduli
        self.free_columns = free_columns

    def reduce(self, vec: Union[Mapping[int, int], Sequence[int]]) -> Vector:
        v = sparse(vec)
        units = self.unit_rows
        while True:
            hits = [k for k in v if k in units]
            if not hits:
                return v
            j = min(hits)
            _axpy(v, units[j], -v[j])

    def __call__(self, vec: Union[Mapping[int, int], Sequence[int]]) -> Tuple[int, ...]:
        v = self.reduce(vec)
        coords = []
        for row, d in zip(self.core_transform, self.moduli):
            value = sum(x * v.get(k, 0) for k, x in row.items())
            coords.append(value % d if d else value)
        coords.extend(v.get(k, 0) for k in self.free_columns)
        return tuple(coords)


class SubquotientProjection:
    """Coordinates on L / R for a sublattice L of Z^n."""

    def __init__(self, sub: Lattice, inner: Callable):
        self.sub = sub
        self.index = {p: i for i, p in enumerate(sub.pivots)}
        self.inner = inner

    def __call__(self, vec: Union[Mapping[int, int], Sequence[int]]) -> Tuple[int, ...]:
        coords = self.sub.coordinates(vec)
        if coords is None:
            raise LinAlgError("vector lies outside the sublattice")
        return self.inner({self.index[p]: x for p, x in coords.items()})


@dataclass(frozen=True)
class AbGroup:
    """Finitely generated abelian group as an invariant factor chain.

    A factor of 0 is a free summand; zeros come last. ``projection`` maps
    vectors of the presentation this group was computed from to canonical
    coordinates, one per factor.
    """
    invariants: Tuple[int, ...] = ()
    projection: Optional[Callable] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        inv = tuple(int(d) for d in self.invariants)
        object.__setattr__(self, 'invariants', inv)
        for d, e in zip(inv, inv[1:]):
            if d < 0 or d == 1 or (d == 0 and e != 0) or (e and e % d):
                raise ValueError(f"not an invariant factor chain: {inv}")
        if inv and (inv[-1] < 0 or inv[-1] == 1):
            raise ValueError(f"not an invariant factor chain: {inv}")

    @classmethod
    def trivial(cls) -> 'AbGroup':
        return cls(())

    @classmethod
    def free(cls, rank: int) -> 'AbGroup':
        return cls((0,) * rank)

    @classmethod
    def cyclic(cls, n: int) -> 'AbGroup':
        return cls.from_orders([n])

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> 'AbGroup':
        """Normalize a direct sum of cyclic groups Z/n (n=0 for Z)."""
        orders = [abs(int(n)) for n in orders]
        free = sum(1 for n in orders if n == 0)
        by_prime: Dict[int, List[int]] = {}
        for n in orders:
            if n > 1:
                for p, e in factorint(n).items():
                    by_prime.setdefault(p, []).append(p ** e)
        length = max((len(v) for v in by_prime.values()), default=0)
        factors = [1] * length
        for powers in by_prime.values():
            powers.sort()
            for k, q in enumerate(powers):
                factors[length - len(powers) + k] *= q
        return cls(tuple(factors) + (0,) * free)

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariants if d == 0)

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(d for d in self.invariants if d)

    @property
    def is_trivial(self) -> bool:
        return not self.invariants

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    def order(self) -> Optional[int]:
        return prod(self.invariants) if self.is_finite else None

    def elementary_divisors(self) -> List[int]:
        out = []
        for d in self.torsion:
            out.extend(p ** e for p, e in sorted(factorint(d).items()))
        return sorted(out)

    def direct_sum(self, other: 'AbGroup') -> 'AbGroup':
        return AbGroup.from_orders(self.invariants + other.invariants)

    def isomorphic(self, other: 'AbGroup') -> bool:
        return self.invariants == other.invariants

    def project(self, vec) -> Tuple[int, ...]:
        if self.projection is None:
            raise LinAlgError("group carries no projection")
        return self.projection(vec)

    def normalize(self, coords: Sequence[int]) -> Tuple[int, ...]:
        return tuple(x % d if d else x for x, d in zip(coords, self.invariants))

    def add(self, x: Sequence[int], y: Sequence[int]) -> Tuple[int, ...]:
        return self.normalize([a + b for a, b in zip(x, y)])

    def scale(self, x: Sequence[int], k: int) -> Tuple[int, ...]:
        return self.normalize([k * a for a in x])

    def zero(self) -> Tuple[int, ...]:
        return (0,) * len(self.invariants)

    def is_zero(self, x: Sequence[int]) -> bool:
        return not any(self.normalize(x))

    def to_json(self) -> List[int]:
        return list(self.invariants)

    def __str__(self) -> str:
        if not self.invariants:
            return "0"
        return " + ".join("Z" if d == 0 else f"Z/{d}" for d in self.invariants)


def _quotient_of_lattice(lattice: Lattice) -> AbGroup:
    units: Dict[int, Vector] = {}
    others: List[Vector] = []
    for p in lattice.pivots:
        row = lattice.row(p)
        if row[p] == 1:
            units[p] = row
        else:
            others.append(row)

    reducer = QuotientProjection(units, [], (), [])
    core_rows = [r for r in (reducer.reduce(o) for o in others) if r]
    support = sorted({k for r in core_rows for k in r})
    position = {k: i for i, k in enumerate(support)}
    core = IntMatrix.zeros(len(support), len(core_rows))
    for j, r in enumerate(core_rows):
        for k, x in r.items():
            core.rows[position[k]][j] = x
    smith = smith_normal_form(core)

    transform: List[Vector] = []
    moduli: List[int] = []
    diag = list(smith.invariant_factors) + [0] * (len(support) - len(smith.invariant_factors))
    for i, d in enumerate(diag):
        if d != 1:
            transform.append({support[k]: x for k, x in enumerate(smith.U.rows[i]) if x})
            moduli.append(d)
    used = set(units) | set(support)
    free_columns = [k for k in range(lattice.dim) if k not in used]

    # SNF diagonals already form a chain with zeros last
    invariants = tuple(moduli) + (0,) * len(free_columns)
    projection = QuotientProjection(units, transform, tuple(moduli), free_columns)
    logger.debug(f"quotient of Z^{lattice.dim}: {len(units)} unit pivots, core "
                 f"{len(support)}x{len(core_rows)}, invariants {invariants}")
    return AbGroup(invariants, projection)


def quotient_structure(ambient_rank: int, relations: Union[Relations, Lattice]) -> AbGroup:
    """Z^ambient_rank modulo the span of the relation vectors (columns)."""
    if isinstance(relations, Lattice):
        if relations.dim != ambient_rank:
            raise ValueError("lattice dimension differs from ambient rank")
        return _quotient_of_lattice(relations)
    if isinstance(relations, (IntMatrix, SparseMatrix)) and relations.nrows != ambient_rank:
        raise ValueError("relations must have ambient_rank rows")
    lattice = Lattice(ambient_rank)
    for v in _relation_vectors(relations):
        if any(k < 0 or k >= ambient_rank for k in v):
            raise ValueError("relation vector outside the ambient rank")
        lattice.add_vector(v)
    return _quotient_of_lattice(lattice)


def subquotient(sub: Lattice, relations: Iterable[Union[Mapping[int, int], Sequence[int]]]) -> AbGroup:
    """sub / span(relations); every relation must lie in sub."""
    index = {p: i for i, p in enumerate(sub.pivots)}
    rel_coords = []
    for r in relations:
        coords = sub.coordinates(r)
        if coords is None:
            raise LinAlgError("relation lies outside the sublattice")
        rel_coords.append({index[p]: x for p, x in coords.items()})
    inner = quotient_structure(sub.rank, rel_coords)
    return AbGroup(inner.invariants, SubquotientProjection(sub, inner.projection))


def _coordinate_vectors(elements: Iterable[Sequence[int]]) -> List[Vector]:
    return [{i: x for i, x in enumerate(e) if x} for e in elements]


def subgroup_structure(group: AbGroup, elements: Sequence[Sequence[int]]) -> AbGroup:
    """Isomorphism type of the subgroup generated by coordinate tuples.

    The projection of the result maps generator-coefficient vectors.
    """
    gens = _coordinate_vectors(elements)
    relations = preimage_lattice(gens, len(group.invariants), group.invariants)
    return quotient_structure(len(gens), relations)


def quotient_by(group: AbGroup, elements: Sequence[Sequence[int]]) -> AbGroup:
    """group / <elements>; the projection maps coordinate vectors of group."""
    k = len(group.invariants)
    relations = [{i: d} for i, d in enumerate(group.invariants) if d]
    relations += _coordinate_vectors(elements)
    return quotient_structure(k, relations)


def in_subgroup(group: AbGroup, elements: Sequence[Sequence[int]], target: Sequence[int]) -> bool:
    """Whether target lies in the subgroup generated by elements."""
    k = len(group.invariants)
    gens = _coordinate_vectors(elements)
    gens += [{i: d} for i, d in enumerate(group.invariants) if d]
    return LinearSolver(gens, k).solve(list(target)) is not None


def abelian_group_from_generators(identity, generators: Sequence, multiply: Callable,
                                  key: Callable = lambda x: x) -> Tuple[AbGroup, Dict]:
    """Structure of a finite abelian group given by generators.

    Elements are enumerated breadth-first; every (element, generator) edge
    off the spanning tree yields one relation on Z^generators. Returns the
    group (projection on generator-exponent vectors) and a map from element
    keys to their canonical coordinates.
    """
    n = len(generators)
    words: Dict = {key(identity): {}}
    elements = [identity]
    relations: List[Vector] = []
    frontier = 0
    while frontier < len(elements):
        x = elements[frontier]
        wx = words[key(x)]
        frontier += 1
        for i, g in enumerate(generators):
            y = multiply(x, g)
            ky = key(y)
            step = dict(wx)
            step[i] = step.get(i, 0) + 1
            if ky in words:
                rel = step
                _axpy(rel, words[ky], -1)
                if rel:
                    relations.append(rel)
            else:
                words[ky] = {k: v for k, v in step.items() if v}
                elements.append(y)
    group = quotient_structure(n, relations)
    coordinates = {k: group.project(w) for k, w in words.items()}
    if group.order() != len(elements):
        raise LinAlgError(f"abelian structure of order {group.order()} "
                          f"but {len(elements)} elements enumerated")
    return group, coordinates


def relative_quotient(group: AbGroup, outer: Sequence[Sequence[int]],
                      inner: Sequence[Sequence[int]]) -> AbGroup:
    """<outer> / <inner> inside group; the projection maps coefficient vectors over outer."""
    k = len(group.invariants)
    gens = _coordinate_vectors(outer)
    relations = preimage_lattice(gens, k, group.invariants)
    torsion = [{i: d} for i, d in enumerate(group.invariants) if d]
    solver = LinearSolver(gens + torsion, k)
    for element in inner:
        coeffs = solver.solve(list(element))
        if coeffs is None:
            raise LinAlgError("inner element lies outside the outer subgroup")
        relations.add_vector(coeffs[:len(gens)])
    return quotient_structure(len(gens), relations)


def generates(group: AbGroup, elements: Sequence[Sequence[int]]) -> bool:
    """Whether the elements generate the whole group."""
    k = len(group.invariants)
    gens = _coordinate_vectors(elements) + [{i: d} for i, d in enumerate(group.invariants) if d]
    solver = LinearSolver(gens, k)
    return all(solver.solve({i: 1}) is not None for i in range(k))
