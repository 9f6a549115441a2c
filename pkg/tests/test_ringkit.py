import pytest

from algebra.ringkit import (FieldAtom, ModularAtom, TruncatedAtom, a_lower, a_lower_subgroup,
                             build_ring, check_axioms, find_isomorphism, is_universal,
                             local_decomposition, m_subgroup, mu_n, parse_ring_spec,
                             square_class_group, tilde_extension, unit_data, units_group, w_set)
from utils.errors import CapExceededError, RingSpecError


class TestParse:
    def test_single_atom(self):
        assert parse_ring_spec("Z/12").atoms == (ModularAtom(12),)

    def test_product(self):
        spec = parse_ring_spec("GF(9) x Z/4")
        assert spec.atoms == (FieldAtom(9, 3, 2), ModularAtom(4))
        assert spec.size == 36
        assert str(spec) == "GF(9) x Z/4"

    def test_truncated_and_whitespace(self):
        spec = parse_ring_spec("  F2[t]/t^3 x  GF(2) ")
        assert spec.atoms == (TruncatedAtom(2, 3), FieldAtom(2, 2, 1))

    @pytest.mark.parametrize("text, offset", [
        ("GF(6)", 3),
        ("Z/1", 2),
        ("Q/5", 0),
        ("Z/4 y", 4),
        ("F4[t]/t^2", 1),
        ("GF(5", 4),
    ])
    def test_errors_carry_byte_offsets(self, text, offset):
        with pytest.raises(RingSpecError) as info:
            parse_ring_spec(text)
        assert info.value.offset == offset
        assert info.value.exit_code == 2

    def test_empty_spec(self):
        with pytest.raises(RingSpecError):
            parse_ring_spec("   ")


class TestBuild:
    def test_modular_arithmetic(self, z4):
        assert z4.size == 4
        assert z4.add(2, 3) == 1
        assert z4.mul(2, 2) == 0
        assert z4.integer(-1) == 3

    def test_truncated_arithmetic(self, ring):
        r = ring("F2[t]/t^2")
        t = r.parse_element("t")
        one_plus_t = r.parse_element("t+1")
        assert r.size == 4
        assert r.mul(t, t) == r.zero
        assert r.mul(one_plus_t, one_plus_t) == r.one

    def test_field_of_order_nine_has_cyclic_units(self, ring):
        r = ring("GF(9)")
        group, _ = units_group(r)
        assert group.invariants == (8,)

    def test_axioms_hold(self, ring):
        for spec in ["Z/6", "GF(4)", "F3[t]/t^2", "Z/2 x GF(3)"]:
            assert check_axioms(ring(spec)) == []

    def test_product_matches_cyclic_ring(self, ring):
        assert find_isomorphism(ring("Z/2 x Z/3"), ring("Z/6")) is not None
        assert find_isomorphism(ring("GF(4)"), ring("Z/4")) is None
        assert find_isomorphism(ring("F2[t]/t^2"), ring("Z/4")) is None

    def test_product_labels(self, ring):
        r = ring("Z/2 x Z/3")
        assert r.label(r.one) == "(1,1)"
        assert r.parse_element("(1,2)") != r.parse_element("(0,2)")

    def test_cap(self):
        with pytest.raises(CapExceededError) as info:
            build_ring("GF(5)", cap=4)
        assert info.value.exit_code == 3

    def test_unknown_element_label(self, gf5):
        with pytest.raises(ValueError):
            gf5.parse_element("x")

    def test_inverse_of_non_unit(self, z4):
        with pytest.raises(ValueError):
            z4.inverse(2)


class TestUnits:
    def test_z12_units_and_classes(self, ring):
        data = unit_data(ring("Z/12"))
        assert data.units == (1, 5, 7, 11)
        assert data.squares == frozenset({1})
        assert data.square_class_count == 4

    def test_z8_square_roots_of_one(self, z8):
        assert unit_data(z8).mu2 == (1, 3, 5, 7)

    def test_class_reps_are_least(self, gf5):
        data = unit_data(gf5)
        assert data.class_reps == (1, 2)
        assert data.class_of(4) == 1
        assert data.class_of(3) == 2
        assert data.class_index(3) == 1

    def test_square_class_group(self, gf5, z8):
        assert square_class_group(gf5)[0].invariants == (2,)
        assert square_class_group(z8)[0].invariants == (2, 2)

    def test_roots_of_unity(self, gf7):
        assert mu_n(gf7, 3) == (1, 2, 4)
        assert gf7.power(3, 2) == 2

    def test_w_sets(self, gf2, gf5, ring):
        assert tuple(w_set(gf5)) == (2, 3, 4)
        assert tuple(w_set(ring("Z/9"))) == (2, 5, 8)
        assert len(w_set(gf2)) == 0
        assert len(w_set(ring("Z/6"))) == 0


class TestLocal:
    def test_z12_is_not_universal(self, ring):
        decomposition = local_decomposition(ring("Z/12"))
        assert [len(f.members) for f in decomposition.factors] == [4, 3]
        assert decomposition.residue_sizes == [2, 3]
        assert not decomposition.universal

    def test_field_and_local_ring(self, ring, z8):
        field_decomposition = local_decomposition(ring("GF(25)"))
        assert field_decomposition.residue_sizes == [25]
        assert field_decomposition.universal
        assert field_decomposition.radical == frozenset({0})

        local = local_decomposition(z8)
        assert local.residue_sizes == [2]
        assert local.universal
        assert local.radical == frozenset({0, 2, 4, 6})

    def test_components_recombine(self, ring):
        r = ring("Z/6")
        decomposition = local_decomposition(r)
        for x in r.elements:
            assert decomposition.recombine(r, decomposition.components(r, x)) == x

    @pytest.mark.parametrize("sizes, expected", [
        ([2, 2], False),
        ([2, 3], False),
        ([2, 4], True),
        ([3, 3], True),
        ([2], True),
    ])
    def test_universality_rule(self, sizes, expected):
        assert is_universal(sizes) == expected


class TestQuotients:
    def test_m_subgroup(self, z4, gf3, gf4):
        members, quotient = m_subgroup(z4)
        assert members.elements == frozenset({0})
        assert quotient.invariants == (4,)
        assert m_subgroup(gf3)[1].invariants == (3,)
        members, quotient = m_subgroup(gf4)
        assert len(members) == 4
        assert quotient.is_trivial

    def test_a_lower(self, gf2, gf5, z8):
        assert a_lower(gf5).is_trivial
        assert a_lower(z8).invariants == (8,)
        assert a_lower(gf2).invariants == (2,)

    def test_a_lower_is_contained_in_m(self, ring):
        for spec in ["Z/4", "Z/9", "F2[t]/t^2", "GF(7)", "Z/6"]:
            r = ring(spec)
            members, _ = m_subgroup(r)
            assert a_lower_subgroup(r).elements <= members.elements

    def test_a_lower_readings(self, z4):
        assert a_lower_subgroup(z4, 'elements').elements <= a_lower_subgroup(z4).elements
        with pytest.raises(ValueError):
            a_lower(z4, 'both')

    def test_tilde_extension(self):
        assert tilde_extension(6).invariants == (12,)
        assert tilde_extension(5).invariants == (5,)
        assert tilde_extension(1).is_trivial
        with pytest.raises(ValueError):
            tilde_extension(0)
