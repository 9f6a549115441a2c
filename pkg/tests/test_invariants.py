import pytest

from homology.invariants import (bar_witt_suite, borel_abelian_check, class_sum,
                                 d1_differentials, d2_differential, d2_well_defined,
                                 grothendieck_witt, h1_coinvariants, h1_compare, h1_exact_sequence,
                                 i_squared, pfister_product, pontryagin, replay_d2_proof, w_relations)
from utils.errors import DomainError


@pytest.fixture(scope='module')
def gw_gf5(gf5):
    return grothendieck_witt(gf5)


class TestGrothendieckWitt:
    def test_augmentation_is_onto(self, gw_gf5):
        assert gw_gf5.epsilon_surjective
        assert gw_gf5.group.rank == 1

    def test_brackets(self, gf5, gw_gf5):
        assert gw_gf5.epsilon(gw_gf5.bracket_vector(2)) == 1
        assert gw_gf5.epsilon(gw_gf5.pfister_vector(2)) == 0
        assert gw_gf5.group.is_zero(gw_gf5.pfister(1))
        assert not gw_gf5.group.is_zero(gw_gf5.pfister(2))
        # 4 is a square
        assert gw_gf5.bracket(4) == gw_gf5.bracket(1)

    def test_augmentation_ideal_of_gf4_vanishes(self, gf4):
        assert grothendieck_witt(gf4).i_group.is_trivial

    def test_h1_coinvariants_of_a_field(self, gw_gf5):
        assert h1_coinvariants(gw_gf5).is_trivial

    def test_h1_coinvariants_needs_degree_two(self, gf5):
        from homology.unimod import build_y_complex
        gw = grothendieck_witt(gf5, build_y_complex(gf5, 1))
        with pytest.raises(ValueError):
            h1_coinvariants(gw)


class TestFirstDifferentials:
    @pytest.mark.parametrize("spec, kernel_size", [("GF(5)", 2), ("Z/8", 4), ("GF(4)", 1)])
    def test_kernel_is_mu2(self, ring, spec, kernel_size):
        report = d1_differentials(ring(spec))
        assert report.kernel_is_mu2
        assert len(report.kernel) == kernel_size
        assert report.cokernel_ok

    def test_gf5_kernel(self, gf5):
        assert d1_differentials(gf5).kernel == (1, 4)

    @pytest.mark.parametrize("spec", ["GF(5)", "Z/4", "Z/9", "F2[t]/t^2"])
    def test_borel_abelianization(self, ring, spec):
        check = borel_abelian_check(ring(spec))
        assert check.isomorphic
        assert check.torus_iso is not False

    def test_torus_iso_only_when_lower_vanishes(self, z4, gf5):
        assert borel_abelian_check(z4).torus_iso is None
        assert borel_abelian_check(gf5).torus_iso is True

    def test_class_sum_structure(self, z8):
        target = class_sum(z8)
        assert target.moduli == (2, 2, 8)
        assert target.element(1) == (0, 0, 0)


class TestSecondDifferential:
    def test_closed_formula(self, gf7, z8):
        value = d2_differential(gf7, 3)
        assert value.class_rep == 3
        assert value.lower == ()
        assert d2_differential(z8, 3).lower == (2,)

    def test_unit_one_maps_to_zero(self, gf5, z8):
        for r in (gf5, z8):
            assert not any(d2_differential(r, r.one).vector)

    @pytest.mark.parametrize("spec", ["GF(5)", "Z/8", "Z/12", "F2[t]/t^2"])
    def test_depends_on_square_class_only(self, ring, spec):
        assert d2_well_defined(ring(spec))

    def test_rejects_non_units(self, z4):
        with pytest.raises(DomainError):
            d2_differential(z4, 2)

    @pytest.mark.parametrize("spec, a", [("GF(5)", 2), ("GF(7)", 1), ("Z/9", 2), ("Z/4", 3)])
    def test_replay(self, ring, spec, a):
        replay = replay_d2_proof(ring(spec), a)
        assert replay.passed
        assert replay.value == replay.expected
        assert len(replay.steps) >= 3

    def test_replay_over_all_units(self, z8):
        assert all(replay_d2_proof(z8, u).passed for u in z8.units)


class TestISquared:
    def test_fields(self, gf4, gf5, gw_gf5):
        assert i_squared(gf5, gw_gf5).group.is_trivial
        assert i_squared(gf4).group.is_trivial

    def test_z8(self, z8):
        result = i_squared(z8)
        assert result.generated_by_pfister
        assert result.quotient.order() is not None

    def test_refuses_non_universal(self, ring):
        with pytest.raises(DomainError):
            i_squared(ring("Z/6"))

    def test_pontryagin_classes(self, gf5, gw_gf5):
        i2 = i_squared(gf5, gw_gf5)
        for a in gf5.units:
            for b in gf5.units:
                assert gw_gf5.group.is_zero(pontryagin(gf5, a, b, gw_gf5, i2))

    def test_pontryagin_with_unit_one(self, gf7):
        gw = grothendieck_witt(gf7)
        assert gw.group.is_zero(pontryagin(gf7, 1, 3, gw))


class TestFirstHomology:
    @pytest.mark.parametrize("spec, invariants", [("Z/4", (4,)), ("GF(9)", ()), ("GF(3)", (3,))])
    def test_universal_rings(self, ring, spec, invariants):
        report = h1_compare(ring(spec))
        assert report.universal
        assert report.a_mod_m.invariants == invariants
        assert report.verdict == 'isomorphic'
        assert report.passed

    def test_non_universal_ring_is_reported(self, ring):
        report = h1_compare(ring("Z/6"))
        assert not report.universal
        assert report.surjection_ok

    @pytest.mark.parametrize("spec", ["Z/4", "GF(5)", "Z/8", "F2[t]/t^2"])
    def test_exact_sequence(self, ring, spec):
        sequence = h1_exact_sequence(ring(spec))
        assert sequence.passed, sequence.checks
        assert sequence.cokernel.isomorphic(sequence.a_mod_m)


class TestBarSide:
    def test_pfister_product(self, gf5):
        assert pfister_product(gf5, 1, 3) == {}
        assert pfister_product(gf5, 2, 2) == {0: 2, 1: -2}

    def test_w_relations_of_gf2_are_empty(self, gf2):
        assert w_relations(gf2) == []

    def test_gf5(self, gf5, gw_gf5):
        bar = bar_witt_suite(gf5, gw_gf5)
        assert bar.bijective
        assert bar.quotient_ok
        assert bar.comparison_well_defined
        assert bar.exact

    def test_gf4_bar_group_is_free(self, gf4):
        bar = bar_witt_suite(gf4)
        assert bar.gw_bar.invariants == (0,)
        assert bar.quotient.is_trivial

    def test_gf7_sides_agree(self, gf7):
        gw = grothendieck_witt(gf7)
        assert bar_witt_suite(gf7, gw).gw_bar.isomorphic(gw.group)

    def test_quotient_matches_square_classes(self, ring):
        bar = bar_witt_suite(ring("Z/12"))
        assert bar.quotient.invariants == (2, 2)
        assert bar.quotient_ok
