"""
Finite commutative rings.

Parses ring specifications, builds rings with dense element identifiers and
row-major operation tables, and computes the unit-group data the homology
modules depend on.
"""

import logging
from array import array
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product as cartesian
from math import gcd
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import Poly, factorint, isprime, symbols

from algebra.zlinalg import AbGroup, abelian_group_from_generators, quotient_by
from config.dynamic_config import get_config
from utils.errors import CapExceededError, RingSpecError

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Ring specification DSL
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModularAtom:
    n: int

    @property
    def size(self) -> int:
        return self.n

    def __str__(self) -> str:
        return f"Z/{self.n}"


@dataclass(frozen=True)
class FieldAtom:
    q: int
    p: int
    d: int

    @property
    def size(self) -> int:
        return self.q

    def __str__(self) -> str:
        return f"GF({self.q})"


@dataclass(frozen=True)
class TruncatedAtom:
    p: int
    k: int

    @property
    def size(self) -> int:
        return self.p ** self.k

    def __str__(self) -> str:
        return f"F{self.p}[t]/t^{self.k}"


Atom = Union[ModularAtom, FieldAtom, TruncatedAtom]


@dataclass(frozen=True)
class RingSpec:
    """Product of atoms, in the order written."""
    atoms: Tuple[Atom, ...]

    @property
    def size(self) -> int:
        n = 1
        for atom in self.atoms:
            n *= atom.size
        return n

    def __str__(self) -> str:
        return " x ".join(str(a) for a in self.atoms)


class _SpecParser:
    """Cursor over the spec text; errors carry byte offsets."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def offset(self, pos: Optional[int] = None) -> int:
        pos = self.pos if pos is None else pos
        return len(self.text[:pos].encode('utf-8'))

    def fail(self, message: str, pos: Optional[int] = None):
        raise RingSpecError(message, self.offset(pos))

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def accept(self, literal: str) -> bool:
        self.skip_ws()
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def expect(self, literal: str):
        if not self.accept(literal):
            found = self.text[self.pos:self.pos + 1] or 'end of input'
            self.fail(f"expected {literal!r}, found {found!r}")

    def uint(self) -> Tuple[int, int]:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in '0123456789':
            self.pos += 1
        if start == self.pos:
            self.fail("expected an unsigned integer")
        return int(self.text[start:self.pos]), start

    def atom(self) -> Atom:
        self.skip_ws()
        if self.accept('Z/'):
            n, at = self.uint()
            if n < 2:
                self.fail(f"modulus must be at least 2, got {n}", at)
            return ModularAtom(n)
        if self.accept('GF('):
            q, at = self.uint()
            self.expect(')')
            factors = factorint(q) if q > 1 else {}
            if len(factors) != 1:
                self.fail(f"{q} is not a prime power", at)
            (p, d), = factors.items()
            return FieldAtom(q, p, d)
        if self.accept('F'):
            p, at = self.uint()
            if not isprime(p):
                self.fail(f"{p} is not a prime", at)
            self.expect('[t]/t^')
            k, at = self.uint()
            if k < 1:
                self.fail("nilpotency degree must be at least 1", at)
            return TruncatedAtom(p, k)
        found = self.text[self.pos:self.pos + 1] or 'end of input'
        self.fail(f"expected 'Z/', 'GF(' or 'F', found {found!r}")

    def spec(self) -> RingSpec:
        atoms = [self.atom()]
        while self.accept('x'):
            atoms.append(self.atom())
        if not self.at_end():
            self.fail(f"unexpected {self.text[self.pos]!r}")
        return RingSpec(tuple(atoms))


def parse_ring_spec(text: str) -> RingSpec:
    """Parse ``atom { "x" atom }``; raises RingSpecError with a byte offset."""
    if not text or not text.strip():
        raise RingSpecError("empty ring specification", 0)
    return _SpecParser(text).spec()


# ---------------------------------------------------------------------------
# Components
# ---------------------------------------------------------------------------

def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _poly_mod(a: List[int], modulus: Sequence[int], p: int) -> List[int]:
    """Remainder by a monic polynomial (coefficients low to high)."""
    d = len(modulus) - 1
    a = list(a)
    for top in range(len(a) - 1, d - 1, -1):
        c = a[top]
        if c:
            for k in range(d + 1):
                a[top - d + k] = (a[top - d + k] - c * modulus[k]) % p
    return (a + [0] * d)[:d]


def _to_code(coeffs: Sequence[int], p: int) -> int:
    return sum(c * p ** k for k, c in enumerate(coeffs))


def _from_code(code: int, p: int, d: int) -> List[int]:
    out = []
    for _ in range(d):
        code, c = divmod(code, p)
        out.append(c)
    return out


def least_irreducible(p: int, d: int) -> Tuple[int, ...]:
    """Lexicographically least monic irreducible of degree d over F_p.

    Candidates run in increasing code order of their lower coefficients.
    Coefficients are returned low to high, leading 1 included.
    """
    x = symbols('x')
    for code in range(p ** d):
        coeffs = _from_code(code, p, d) + [1]
        if Poly(list(reversed(coeffs)), x, modulus=p).is_irreducible:
            return tuple(coeffs)
    raise ValueError(f"no irreducible polynomial of degree {d} over F_{p}")


def _poly_label(coeffs: Sequence[int], var: str) -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        if k == 0:
            terms.append(str(c))
        else:
            mono = var if k == 1 else f"{var}^{k}"
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms) if terms else "0"


class _Component:
    """One atom with its own add/mul tables over codes 0..size-1."""

    def __init__(self, atom: Atom):
        self.atom = atom
        if isinstance(atom, ModularAtom):
            n = atom.n
            self.size = n
            self.add = [[(a + b) % n for b in range(n)] for a in range(n)]
            self.mul = [[(a * b) % n for b in range(n)] for a in range(n)]
            self.labels = [str(a) for a in range(n)]
            self.modulus = None
        elif isinstance(atom, FieldAtom):
            self._build_field(atom.p, atom.d)
        else:
            self._build_truncated(atom.p, atom.k)

    def _digit_add(self, p: int, d: int):
        digits = [_from_code(c, p, d) for c in range(self.size)]
        self.add = [[_to_code([(x + y) % p for x, y in zip(da, db)], p) for db in digits]
                    for da in digits]
        return digits

    def _build_field(self, p: int, d: int):
        q = p ** d
        self.size = q
        digits = self._digit_add(p, d)
        self.modulus = least_irreducible(p, d) if d > 1 else None
        if d == 1:
            self.mul = [[(a * b) % p for b in range(p)] for a in range(p)]
            self.labels = [str(a) for a in range(p)]
            return
        mulmod = lambda a, b: _to_code(_poly_mod(_poly_mul(a, b, p), self.modulus, p), p)
        # log/exp tables from a primitive element
        primes = list(factorint(q - 1))
        for g in range(2, q):
            power = [1] + [0] * (d - 1)
            exp = []
            for _ in range(q - 1):
                exp.append(_to_code(power, p))
                power = _from_code(mulmod(power, digits[g]), p, d)
            if len(set(exp)) == q - 1 and all(exp[(q - 1) // r] != 1 for r in primes):
                break
        log = {e: k for k, e in enumerate(exp)}
        self.mul = [[0 if a == 0 or b == 0 else exp[(log[a] + log[b]) % (q - 1)]
                     for b in range(q)] for a in range(q)]
        self.labels = [_poly_label(dg, 'x') for dg in digits]

    def _build_truncated(self, p: int, k: int):
        self.size = p ** k
        digits = self._digit_add(p, k)
        self.modulus = None
        self.mul = [[_to_code(_poly_mul(da, db, p)[:k], p) for db in digits] for da in digits]
        self.labels = [_poly_label(dg, 't') for dg in digits]


# ---------------------------------------------------------------------------
# Rings
# ---------------------------------------------------------------------------

class FiniteRing:
    """Finite commutative ring on identifiers 0..size-1.

    Tables are flat and row-major: ``add_table[a * size + b]``.
    """

    def __init__(self, name: str, size: int, add_table: Sequence[int], mul_table: Sequence[int],
                 zero: int, one: int, labels: Sequence[str], spec: Optional[RingSpec] = None):
        if zero == one:
            raise ValueError("zero and one must differ")
        typecode = 'H' if size <= 0xFFFF else 'L'
        self.name = name
        self.size = size
        self.add_table = array(typecode, add_table)
        self.mul_table = array(typecode, mul_table)
        self.zero = zero
        self.one = one
        self.labels = list(labels)
        self.spec = spec
        self.neg_table = array(typecode, [0] * size)
        for a in range(size):
            row = a * size
            for b in range(size):
                if self.add_table[row + b] == zero:
                    self.neg_table[a] = b
                    break
        self._label_index = {label: i for i, label in enumerate(self.labels)}

    def __repr__(self) -> str:
        return f"FiniteRing({self.name!r}, size={self.size})"

    def __str__(self) -> str:
        return self.name

    @property
    def elements(self) -> range:
        return range(self.size)

    def add(self, a: int, b: int) -> int:
        return self.add_table[a * self.size + b]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a * self.size + b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a * self.size + self.neg_table[b]]

    def power(self, a: int, e: int) -> int:
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def integer(self, k: int) -> int:
        """Image of the integer k."""
        result, base = self.zero, self.one
        if k < 0:
            k, base = -k, self.neg(self.one)
        while k:
            if k & 1:
                result = self.add(result, base)
            base = self.add(base, base)
            k >>= 1
        return result

    def scale(self, k: int, a: int) -> int:
        return self.mul(self.integer(k), a)

    @cached_property
    def inverse_table(self) -> Dict[int, int]:
        inv = {}
        for a in self.elements:
            row = a * self.size
            for b in self.elements:
                if self.mul_table[row + b] == self.one:
                    inv[a] = b
                    break
        return inv

    def is_unit(self, a: int) -> bool:
        return a in self.inverse_table

    def inverse(self, a: int) -> int:
        try:
            return self.inverse_table[a]
        except KeyError:
            raise ValueError(f"{self.label(a)} is not a unit in {self.name}") from None

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inverse(b))

    @cached_property
    def units(self) -> Tuple[int, ...]:
        return tuple(sorted(self.inverse_table))

    def label(self, a: int) -> str:
        return self.labels[a]

    def parse_element(self, text: str) -> int:
        """Identifier for an element label such as ``3``, ``x^2+2`` or ``(1,4)``."""
        key = "".join(text.split())
        if key in self._label_index:
            return self._label_index[key]
        if key.lstrip('-').isdigit():
            return self.integer(int(key))
        raise ValueError(f"{text!r} is not an element of {self.name}")

    def restrict(self, name: str, members: Sequence[int], one: int) -> 'FiniteRing':
        """Subset closed under both operations, with its own identity, as a ring."""
        members = sorted(members)
        index = {x: i for i, x in enumerate(members)}
        n = len(members)
        add = [index[self.add(a, b)] for a in members for b in members]
        mul = [index[self.mul(a, b)] for a in members for b in members]
        return FiniteRing(name, n, add, mul, index[self.zero], index[one],
                          [self.label(a) for a in members])


def build_ring(spec: Union[RingSpec, str], cap: Optional[int] = None) -> FiniteRing:
    """Construct the ring of a spec; product ids are mixed radix, first atom fastest."""
    if isinstance(spec, str):
        spec = parse_ring_spec(spec)
    cap = get_config().RING_SIZE_CAP if cap is None else cap
    size = spec.size
    if size > cap:
        raise CapExceededError('ring', size, cap)

    components = [_Component(atom) for atom in spec.atoms]
    strides, stride = [], 1
    for comp in components:
        strides.append(stride)
        stride *= comp.size

    parts = [tuple((x // s) % c.size for s, c in zip(strides, components)) for x in range(size)]
    add, mul = [], []
    for pa in parts:
        for pb in parts:
            add.append(sum(s * c.add[a][b] for s, c, a, b in zip(strides, components, pa, pb)))
            mul.append(sum(s * c.mul[a][b] for s, c, a, b in zip(strides, components, pa, pb)))
    if len(components) == 1:
        labels = components[0].labels
    else:
        labels = ["(" + ",".join(c.labels[a] for c, a in zip(components, pa)) + ")" for pa in parts]
    one = sum(strides)
    ring = FiniteRing(str(spec), size, add, mul, 0, one, labels, spec)
    logger.info(f"Built ring {ring.name} with {size} elements")
    return ring


def check_axioms(ring: FiniteRing) -> List[str]:
    """Exhaustive commutative ring axiom check; returns failure descriptions."""
    failures = []
    els = ring.elements
    for a in els:
        if ring.add(a, ring.zero) != a:
            failures.append(f"additive identity fails at {ring.label(a)}")
        if ring.mul(a, ring.one) != a:
            failures.append(f"multiplicative identity fails at {ring.label(a)}")
        if ring.add(a, ring.neg(a)) != ring.zero:
            failures.append(f"negation fails at {ring.label(a)}")
        for b in els:
            if ring.add(a, b) != ring.add(b, a) or ring.mul(a, b) != ring.mul(b, a):
                failures.append(f"commutativity fails at ({ring.label(a)}, {ring.label(b)})")
            ab_add, ab_mul = ring.add(a, b), ring.mul(a, b)
            for c in els:
                if ring.add(ab_add, c) != ring.add(a, ring.add(b, c)):
                    failures.append(f"additive associativity fails at {(a, b, c)}")
                if ring.mul(ab_mul, c) != ring.mul(a, ring.mul(b, c)):
                    failures.append(f"multiplicative associativity fails at {(a, b, c)}")
                if ring.mul(a, ring.add(b, c)) != ring.add(ab_mul, ring.mul(a, c)):
                    failures.append(f"distributivity fails at {(a, b, c)}")
            if len(failures) > 20:
                return failures
    return failures


# ---------------------------------------------------------------------------
# Additive structure
# ---------------------------------------------------------------------------

def additive_span(ring: FiniteRing, generators: Iterable[int]) -> Tuple[FrozenSet[int], Tuple[int, ...]]:
    """Additive subgroup generated by elements, and the generators actually used."""
    members = {ring.zero}
    used = []
    for g in generators:
        if g in members:
            continue
        used.append(g)
        grown = set(members)
        shift = g
        while shift not in members:
            grown.update(ring.add(s, shift) for s in members)
            shift = ring.add(shift, g)
        members = grown
    return frozenset(members), tuple(used)


@dataclass(frozen=True)
class AdditiveGroup:
    """(A, +) as an AbGroup with canonical coordinates for every element."""
    group: AbGroup
    generators: Tuple[int, ...]
    coordinates: Dict[int, Tuple[int, ...]] = field(repr=False)

    def coords(self, x: int) -> Tuple[int, ...]:
        return self.coordinates[x]


@lru_cache(maxsize=32)
def additive_group(ring: FiniteRing) -> AdditiveGroup:
    _, gens = additive_span(ring, ring.elements)
    group, coords = abelian_group_from_generators(ring.zero, gens, ring.add)
    return AdditiveGroup(group, gens, coords)


@dataclass(frozen=True)
class AddSubgroup:
    elements: FrozenSet[int]
    generators: Tuple[int, ...]

    def __contains__(self, x: int) -> bool:
        return x in self.elements

    def __len__(self) -> int:
        return len(self.elements)


def quotient_of_ring(ring: FiniteRing, sub: AddSubgroup) -> AbGroup:
    """(A, +) / sub; the projection maps additive coordinates of A."""
    additive = additive_group(ring)
    return quotient_by(additive.group, [additive.coords(g) for g in sub.generators])


# ---------------------------------------------------------------------------
# Unit data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnitData:
    """Units, squares and square classes of a finite ring.

    ``class_rep`` maps every unit to the least identifier of its coset of
    (A×)²; ``sqrt`` maps every square unit to its least square root.
    """
    units: Tuple[int, ...]
    inverse: Dict[int, int] = field(repr=False)
    squares: FrozenSet[int] = field(repr=False)
    sqrt: Dict[int, int] = field(repr=False)
    class_rep: Dict[int, int] = field(repr=False)
    class_reps: Tuple[int, ...] = ()
    mu2: Tuple[int, ...] = ()

    @property
    def square_class_count(self) -> int:
        return len(self.class_reps)

    @property
    def mu(self) -> Tuple[int, ...]:
        # A is finite, so every unit is a root of unity
        return self.units

    def class_of(self, a: int) -> int:
        return self.class_rep[a]

    def class_index(self, a: int) -> int:
        return self.class_reps.index(self.class_rep[a])


@lru_cache(maxsize=32)
def unit_data(ring: FiniteRing) -> UnitData:
    units = ring.units
    inverse = {u: ring.inverse(u) for u in units}
    sqrt: Dict[int, int] = {}
    for u in units:
        s = ring.mul(u, u)
        if s not in sqrt:
            sqrt[s] = u
    squares = frozenset(sqrt)
    class_rep: Dict[int, int] = {}
    for u in units:
        if u in class_rep:
            continue
        for s in squares:
            class_rep.setdefault(ring.mul(u, s), u)
    reps = tuple(sorted(set(class_rep.values())))
    mu2 = tuple(u for u in units if ring.mul(u, u) == ring.one)
    logger.debug(f"{ring.name}: {len(units)} units, {len(squares)} squares, |G_A| = {len(reps)}")
    return UnitData(units, inverse, squares, sqrt, class_rep, reps, mu2)


def mu_n(ring: FiniteRing, n: int) -> Tuple[int, ...]:
    """n-th roots of unity."""
    return tuple(u for u in ring.units if ring.power(u, n) == ring.one)


def square_class_group(ring: FiniteRing, data: Optional[UnitData] = None) -> Tuple[AbGroup, Dict[int, Tuple[int, ...]]]:
    """G_A as an AbGroup with coordinates keyed by class representative."""
    data = data or unit_data(ring)
    mult = lambda r, s: data.class_of(ring.mul(r, s))
    gens = []
    span = {ring.one}
    for r in data.class_reps:
        if r not in span:
            gens.append(r)
            span |= {mult(s, r) for s in span}
    return abelian_group_from_generators(data.class_of(ring.one), gens, mult)


def units_group(ring: FiniteRing) -> Tuple[AbGroup, Dict[int, Tuple[int, ...]]]:
    """A× with discrete-log coordinates keyed by unit identifier."""
    gens = []
    span = {ring.one}
    for u in ring.units:
        if u in span:
            continue
        gens.append(u)
        grown = set(span)
        power = u
        while power not in span:
            grown.update(ring.mul(s, power) for s in span)
            power = ring.mul(power, u)
        span = grown
    return abelian_group_from_generators(ring.one, gens, ring.mul)


@dataclass(frozen=True)
class WSet:
    """W_A = {a : a(1 - a) is a unit}."""
    elements: Tuple[int, ...]

    def __contains__(self, a: int) -> bool:
        return a in self.elements

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)


def w_set(ring: FiniteRing) -> WSet:
    return WSet(tuple(a for a in ring.elements
                      if ring.is_unit(ring.mul(a, ring.sub(ring.one, a)))))


# ---------------------------------------------------------------------------
# Local structure
# ---------------------------------------------------------------------------

def jacobson_radical(ring: FiniteRing) -> FrozenSet[int]:
    units = ring.inverse_table
    return frozenset(x for x in ring.elements
                     if all(ring.add(ring.one, ring.mul(x, y)) in units for y in ring.elements))


@dataclass(frozen=True)
class LocalFactor:
    idempotent: int
    ring: FiniteRing
    members: Tuple[int, ...]
    residue_size: int


@dataclass(frozen=True)
class LocalDecomposition:
    factors: Tuple[LocalFactor, ...]
    radical: FrozenSet[int]
    universal: bool

    @property
    def residue_sizes(self) -> List[int]:
        return [f.residue_size for f in self.factors]

    def components(self, ring: FiniteRing, x: int) -> Tuple[int, ...]:
        """Image of x in the product of the factors (factor-local ids)."""
        return tuple(f.members.index(ring.mul(f.idempotent, x)) for f in self.factors)

    def recombine(self, ring: FiniteRing, parts: Sequence[int]) -> int:
        x = ring.zero
        for f, part in zip(self.factors, parts):
            x = ring.add(x, f.members[part])
        return x


def is_universal(residue_sizes: Sequence[int]) -> bool:
    """Two residue fields of size 2, or one of size 2 with one of size 3, break universality."""
    twos = sum(1 for q in residue_sizes if q == 2)
    return not (twos >= 2 or (twos >= 1 and 3 in residue_sizes))


@lru_cache(maxsize=32)
def local_decomposition(ring: FiniteRing) -> LocalDecomposition:
    idempotents = [e for e in ring.elements if e != ring.zero and ring.mul(e, e) == e]
    primitive = [e for e in idempotents
                 if not any(f != e and ring.mul(f, e) == f for f in idempotents)]
    radical = jacobson_radical(ring)
    factors = []
    for e in primitive:
        members = tuple(sorted({ring.mul(e, x) for x in ring.elements}))
        local = ring.restrict(f"{ring.name}*e{e}", members, e)
        residue = len(members) // (len(members) - len(local.units))
        factors.append(LocalFactor(e, local, members, residue))
    factors.sort(key=lambda f: (f.residue_size, f.idempotent))
    total = 1
    for f in factors:
        total *= len(f.members)
    if total != ring.size:
        raise ValueError(f"idempotent splitting of {ring.name} does not cover the ring")
    universal = is_universal([f.residue_size for f in factors])
    logger.debug(f"{ring.name}: local factors of sizes {[len(f.members) for f in factors]}, "
                 f"residue fields {[f.residue_size for f in factors]}, universal={universal}")
    return LocalDecomposition(tuple(factors), radical, universal)


# ---------------------------------------------------------------------------
# M, A_{A×} and the tilde extension
# ---------------------------------------------------------------------------

def _square_minus_one(ring: FiniteRing) -> List[int]:
    return sorted({ring.sub(ring.mul(a, a), ring.one) for a in ring.units})


def m_subgroup(ring: FiniteRing) -> Tuple[AddSubgroup, AbGroup]:
    """M = <x(a²-1), 3(b+1)(c+1)> and the quotient A/M."""
    gens = {ring.mul(x, s) for s in _square_minus_one(ring) for x in ring.elements}
    three = ring.integer(3)
    shifted = [ring.add(b, ring.one) for b in ring.units]
    gens |= {ring.mul(three, ring.mul(b, c)) for b in shifted for c in shifted}
    members, used = additive_span(ring, sorted(gens))
    sub = AddSubgroup(members, used)
    quotient = quotient_of_ring(ring, sub)
    logger.debug(f"{ring.name}: |M| = {len(members)}, A/M = {quotient}")
    return sub, quotient


def a_lower_subgroup(ring: FiniteRing, reading: str = 'ideal') -> AddSubgroup:
    if reading == 'ideal':
        gens = {ring.mul(x, s) for s in _square_minus_one(ring) for x in ring.elements}
    elif reading == 'elements':
        gens = set(_square_minus_one(ring))
    else:
        raise ValueError(f"unknown reading {reading!r}")
    members, used = additive_span(ring, sorted(gens))
    return AddSubgroup(members, used)


def a_lower(ring: FiniteRing, reading: str = 'ideal') -> AbGroup:
    """A_{A×}: coinvariants of x -> a²x; ``reading='elements'`` uses <a²-1> only."""
    return quotient_of_ring(ring, a_lower_subgroup(ring, reading))


def tilde_extension(n: int) -> AbGroup:
    if n < 1:
        raise ValueError("n must be positive")
    return AbGroup.cyclic(gcd(n * n, 2 * n))


# ---------------------------------------------------------------------------
# Isomorphism search
# ---------------------------------------------------------------------------

def _additive_order(ring: FiniteRing, x: int) -> int:
    k, y = 1, x
    while y != ring.zero:
        y = ring.add(y, x)
        k += 1
    return k


def _element_type(ring: FiniteRing, x: int) -> Tuple:
    square = ring.mul(x, x)
    nilpotent = ring.power(x, ring.size) == ring.zero
    return (_additive_order(ring, x), ring.is_unit(x), square == x, nilpotent)


def find_isomorphism(r1: FiniteRing, r2: FiniteRing) -> Optional[List[int]]:
    """Ring isomorphism r1 -> r2 as an image list, or None.

    Searches over images of additive generators, pruned by element type.
    """
    if r1.size != r2.size or len(r1.units) != len(r2.units):
        return None
    members, gens = additive_span(r1, r1.elements)
    # words over the generators, breadth first
    word = {r1.zero: (0,) * len(gens)}
    queue = [r1.zero]
    for x in queue:
        for i, g in enumerate(gens):
            y = r1.add(x, g)
            if y not in word:
                w = list(word[x])
                w[i] += 1
                word[y] = tuple(w)
                queue.append(y)

    types2: Dict[Tuple, List[int]] = {}
    for y in r2.elements:
        types2.setdefault(_element_type(r2, y), []).append(y)
    candidates = [types2.get(_element_type(r1, g), []) for g in gens]

    for images in cartesian(*candidates):
        f = [0] * r1.size
        for x, w in word.items():
            y = r2.zero
            for k, h in zip(w, images):
                for _ in range(k):
                    y = r2.add(y, h)
            f[x] = y
        if f[r1.one] != r2.one or len(set(f)) != r2.size:
            continue
        if any(f[r1.add(x, g)] != r2.add(f[x], h)
               for x in r1.elements for g, h in zip(gens, images)):
            continue
        if all(f[r1.mul(a, b)] == r2.mul(f[a], f[b]) for a in r1.elements for b in r1.elements):
            return f
    return None
