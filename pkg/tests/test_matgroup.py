import pytest

from algebra.matgroup import (abelianization, abelianization_map, borel_group, central_quotient,
                              commutator_subgroup, commutator_subgroup_all_pairs, diag, e12, e21,
                              e2_group, g_mat, generate_closure, generator_label, h_mat, identity,
                              mat_inv, mat_label, mat_mul, minus_identity, product_orders,
                              sl2_and_e2, standard_subgroups, torus_group, verify_cycle_identities,
                              weyl)
from utils.errors import CapExceededError, DomainError


def test_matrix_arithmetic(gf5):
    g = g_mat(gf5, 2)
    assert mat_mul(gf5, g, mat_inv(gf5, g)) == identity(gf5)
    assert h_mat(gf5, 2) == e12(gf5, 3)
    assert mat_mul(gf5, e12(gf5, 1), e12(gf5, 4)) == identity(gf5)
    assert mat_mul(gf5, weyl(gf5), weyl(gf5)) == minus_identity(gf5)
    assert mat_mul(gf5, diag(gf5, 2), diag(gf5, 3)) == identity(gf5)


def test_h_mat_needs_unit(z4):
    with pytest.raises(ValueError):
        h_mat(z4, 2)


@pytest.mark.parametrize("spec, order", [("GF(2)", 6), ("GF(5)", 120), ("Z/4", 48)])
def test_e2_orders(ring, spec, order):
    assert e2_group(ring(spec)).order == order


@pytest.mark.parametrize("spec, order", [("GF(7)", 336), ("Z/9", 648), ("Z/8", 384)])
def test_e2_equals_sl2(ring, spec, order):
    sl2, e2, equal = sl2_and_e2(ring(spec))
    assert equal
    assert sl2.order == e2.order == order


def test_words_replay_elements(gf3):
    group = e2_group(gf3)
    for i in range(group.order):
        assert group.evaluate(group.word(i)) == group.elements[i]


def test_spelled_words(gf3):
    group = e2_group(gf3)
    assert group.spell(identity(gf3)) == '1'
    assert group.spell(e12(gf3, 1)) == 'E12(1)'
    assert group.spell(e21(gf3, 2)) == 'E21(2)'
    for i, m in enumerate(group.elements):
        if i != group.identity:
            assert len(group.spell(m).split('·')) == len(group.word(i))


def test_matrix_labels(gf5):
    assert generator_label(gf5, e21(gf5, 3)) == 'E21(3)'
    assert generator_label(gf5, diag(gf5, 2)) == mat_label(gf5, diag(gf5, 2)) == '[[2,0],[0,3]]'


def test_closure_cap(gf5):
    with pytest.raises(CapExceededError):
        e2_group(gf5, cap=50)


def test_closure_rejects_singular_generator(z4):
    with pytest.raises(DomainError):
        generate_closure(z4, [(2, 0, 0, 1)])


def test_standard_subgroups_of_gf5(gf5):
    subs = standard_subgroups(gf5, e2_group(gf5))
    assert subs.torus.order == 4
    assert subs.unipotent.order == 5
    assert subs.borel.order == 20
    assert set(subs.torus.elements) <= set(subs.borel.elements)


def test_standard_subgroups_of_z4(z4):
    subs = standard_subgroups(z4, e2_group(z4))
    assert subs.torus.order == 2
    assert subs.borel.order == 8


def test_borel_and_torus_closures(gf5):
    assert borel_group(gf5).order == 20
    assert torus_group(gf5).order == 4


@pytest.mark.parametrize("spec, invariants", [("GF(2)", (2,)), ("GF(3)", (3,)), ("GF(4)", ())])
def test_abelianization_of_small_fields(ring, spec, invariants):
    assert abelianization(e2_group(ring(spec))).invariants == invariants


@pytest.mark.parametrize("spec, invariants", [("GF(5)", (4,)), ("Z/4", (2, 4))])
def test_borel_abelianization(ring, spec, invariants):
    assert abelianization(borel_group(ring(spec))).invariants == invariants


def test_abelianization_map_is_a_homomorphism(gf3):
    group = e2_group(gf3)
    ab, project = abelianization_map(group)
    x, y = e12(gf3, 1), e21(gf3, 2)
    assert project(mat_mul(gf3, x, y)) == ab.add(project(x), project(y))


def test_commutator_subgroup_matches_all_pairs(gf3):
    group = e2_group(gf3)
    assert commutator_subgroup(group) == commutator_subgroup_all_pairs(group)


@pytest.mark.parametrize("spec, order", [("GF(5)", 60), ("Z/4", 24), ("GF(2)", 6)])
def test_central_quotient_orders(ring, spec, order):
    assert central_quotient(e2_group(ring(spec))).order == order


def test_projective_e2_of_gf5_is_perfect(gf5):
    assert abelianization(central_quotient(e2_group(gf5))).is_trivial


@pytest.mark.parametrize("spec", ["GF(5)", "GF(7)", "Z/9", "Z/4"])
def test_cycle_identities(ring, spec):
    assert verify_cycle_identities(ring(spec)) == []


def test_product_orders(ring, gf5):
    assert product_orders(ring("Z/2 x Z/3")) == (144, 144)
    assert product_orders(gf5) is None
