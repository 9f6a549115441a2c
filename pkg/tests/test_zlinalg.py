import random

import pytest
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from algebra.zlinalg import (AbGroup, IntMatrix, Lattice, SparseMatrix, generates, in_subgroup,
                             kernel_basis, kernel_lattice, preimage_lattice, quotient_by,
                             quotient_structure, relative_quotient, smith_normal_form,
                             solve_in_lattice, subgroup_structure, subquotient, xgcd)
from utils.errors import LinAlgError


def _sympy_factors(rows):
    diag = sympy_snf(Matrix(rows), domain=ZZ)
    return sorted(abs(int(diag[i, i])) for i in range(min(diag.shape)) if diag[i, i] != 0)


def test_xgcd_bezout():
    for a, b in [(12, 18), (-4, 6), (0, 5), (7, 0), (35, -14)]:
        x, y, g = xgcd(a, b)
        assert x * a + y * b == g
        assert g >= 0


def test_smith_small_matrices():
    assert smith_normal_form(IntMatrix([[2, 4], [6, 8]])).invariant_factors == (2, 4)
    assert smith_normal_form(IntMatrix.identity(3)).invariant_factors == (1, 1, 1)
    zero = smith_normal_form(IntMatrix.zeros(2, 3))
    assert zero.invariant_factors == (0, 0)
    assert zero.rank == 0


def test_smith_transforms_reproduce_diagonal():
    m = IntMatrix([[4, 6, 0], [2, 8, 10], [0, 12, 14]])
    form = smith_normal_form(m)
    assert (form.U @ m) @ form.V == form.D
    factors = [d for d in form.invariant_factors if d]
    assert all(b % a == 0 for a, b in zip(factors, factors[1:]))


def test_smith_against_sympy_on_random_matrices():
    rng = random.Random(7)
    for _ in range(25):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        rows = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
        rows[0][0] = rng.randint(1, 9)
        ours = sorted(d for d in smith_normal_form(IntMatrix(rows)).invariant_factors if d)
        assert ours == _sympy_factors(rows)


def test_kernel_of_augmentation_row():
    basis = kernel_basis(IntMatrix([[1, 1, 1]]))
    assert basis.ncols == 2
    assert (IntMatrix([[1, 1, 1]]) @ basis).is_zero()


def test_kernel_of_invertible_matrix_is_empty():
    assert kernel_lattice(IntMatrix([[2, 1], [1, 1]])).rank == 0


def test_kernel_accepts_sparse_matrix():
    m = SparseMatrix(2, [{0: 1}, {0: -1, 1: 2}, {1: 4}])
    kernel = kernel_lattice(m)
    assert kernel.rank == 1
    (row,) = kernel.rows()
    assert not m.apply(row)


def test_solve_in_lattice():
    basis = IntMatrix.from_columns([[2, 0], [0, 3]], 2)
    assert solve_in_lattice(basis, [4, 3]) == [2, 1]
    assert solve_in_lattice(IntMatrix.from_columns([[1, 1]], 2), [1, 0]) is None


def test_lattice_membership_and_coordinates():
    lattice = Lattice(3, [[2, 0, 0], [0, 3, 3]])
    assert [4, 6, 6] in lattice
    assert [1, 0, 0] not in lattice
    assert lattice.coordinates([2, 3, 3]) is not None
    assert not lattice.add_vector([4, 0, 0])
    assert lattice.add_vector([1, 0, 0])
    assert lattice.rank == 2


def test_quotient_structure_cases():
    assert quotient_structure(1, [[3]]).invariants == (3,)
    z2_plus_z = quotient_structure(2, [[2, 0], [0, 0]])
    assert z2_plus_z.invariants == (2, 0)
    assert z2_plus_z.rank == 1
    assert z2_plus_z.torsion == (2,)


def test_quotient_projection_is_additive():
    group = quotient_structure(3, [[2, 2, 0], [0, 4, 4], [6, 0, 0]])
    x, y = {0: 1, 2: 5}, {1: 3}
    total = {0: 1, 1: 3, 2: 5}
    assert group.add(group.project(x), group.project(y)) == group.normalize(group.project(total))
    assert group.is_zero(group.project({0: 2, 1: 2}))


def test_quotient_rejects_bad_relations():
    with pytest.raises(ValueError):
        quotient_structure(2, [{5: 1}])
    with pytest.raises(ValueError):
        quotient_structure(3, IntMatrix([[1, 0]]))


def test_abgroup_from_orders_normalizes():
    assert AbGroup.from_orders([2, 3]).invariants == (6,)
    assert AbGroup.from_orders([4, 2, 0]).invariants == (2, 4, 0)
    assert AbGroup.from_orders([1, 1]).is_trivial
    assert AbGroup.cyclic(12).elementary_divisors() == [3, 4]
    assert AbGroup.from_orders([2, 2]).order() == 4
    assert AbGroup.free(2).order() is None


def test_abgroup_rejects_non_chain():
    with pytest.raises(ValueError):
        AbGroup((4, 2))
    with pytest.raises(ValueError):
        AbGroup((0, 2))
    with pytest.raises(ValueError):
        AbGroup((1,))


def test_abgroup_str():
    assert str(AbGroup.trivial()) == "0"
    assert str(AbGroup((2, 0))) == "Z/2 + Z"


def test_subgroup_and_quotient_of_finite_group():
    group = AbGroup((2, 4))
    assert subgroup_structure(group, [(0, 2)]).invariants == (2,)
    assert quotient_by(group, [(0, 2)]).invariants == (2, 2)
    assert quotient_by(group, [(1, 0), (0, 1)]).is_trivial
    assert in_subgroup(group, [(0, 2)], (0, 6))
    assert not in_subgroup(group, [(0, 2)], (1, 0))
    assert generates(group, [(1, 0), (0, 1)])
    assert not generates(group, [(1, 2)])


def test_relative_quotient():
    group = AbGroup((4,))
    assert relative_quotient(group, [(1,)], [(2,)]).invariants == (2,)
    with pytest.raises(LinAlgError):
        relative_quotient(group, [(2,)], [(1,)])


def test_preimage_lattice_with_free_coordinate():
    # c0*2 + c1*3 == 0 mod 6 in the first slot, second slot free
    lattice = preimage_lattice([{0: 2}, {0: 3}], 2, [6, 0])
    assert [3, 0] in lattice
    assert [0, 2] in lattice
    assert [1, 0] not in lattice


def test_subquotient_requires_containment():
    sub = Lattice(2, [[2, 0], [0, 1]])
    assert subquotient(sub, [[4, 0]]).invariants == (2, 0)
    with pytest.raises(LinAlgError):
        subquotient(sub, [[1, 0]])
