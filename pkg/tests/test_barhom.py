import pytest

from algebra.matgroup import (diag, e12, e21, e2_group, identity, mat_inv, minus_identity,
                              weyl)
from homology.barhom import (BarChain, augmentation_free, b_relation_witness, bar_boundary,
                             connecting_replay, f_cycle, g_cycle, h_cycle, normalize, r_chain,
                             random_chain, random_tensor_chain, shuffle_product, standard_cycles,
                             total_boundary, u_chain, verify_cycle)
from homology.unimod import build_y_complex
from utils.errors import DomainError


@pytest.fixture(scope='module')
def e2_gf5(gf5):
    return e2_group(gf5)


@pytest.fixture(scope='module')
def y2_gf5(gf5):
    return build_y_complex(gf5, 2)


class TestBarChain:
    def test_boundary_of_inverse_pair(self, gf5):
        g = e12(gf5, 2)
        g_inv = mat_inv(gf5, g)
        expected = BarChain(gf5, 1, {(g_inv,): 1, (identity(gf5),): -1, (g,): 1})
        assert bar_boundary(BarChain.bar(gf5, g, g_inv)) == expected

    def test_degenerate_bar_keeps_identity(self, gf5):
        one = identity(gf5)
        boundary = bar_boundary(BarChain.bar(gf5, one, one))
        assert boundary == BarChain.bar(gf5, one)
        assert normalize(boundary).is_zero()

    def test_boundary_needs_positive_degree(self, gf5):
        with pytest.raises(ValueError):
            bar_boundary(BarChain(gf5, 0))

    def test_mixed_degrees_are_rejected(self, gf5):
        with pytest.raises(ValueError):
            BarChain(gf5, 2).add((identity(gf5),))
        with pytest.raises(ValueError):
            BarChain.bar(gf5, weyl(gf5)) + BarChain(gf5, 2)

    def test_zero_coefficients_are_dropped(self, gf5):
        chain = BarChain.bar(gf5, weyl(gf5)) - BarChain.bar(gf5, weyl(gf5))
        assert chain.is_zero()
        assert len(chain) == 0

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_boundary_squares_to_zero(self, e2_gf5, seed):
        chain = random_chain(e2_gf5, 3, terms=6, seed=seed)
        assert bar_boundary(bar_boundary(chain)).is_zero()

    def test_random_chain_is_seeded(self, e2_gf5):
        assert random_chain(e2_gf5, 2, seed=11) == random_chain(e2_gf5, 2, seed=11)


class TestStandardCycles:
    def test_r_chain_shape(self, gf5, e2_gf5):
        chain = r_chain(gf5, 1)
        assert chain.degree == 2
        assert 0 < len(chain) <= 11
        assert chain.outside(e2_gf5) == []

    @pytest.mark.parametrize("spec, z", [("GF(7)", 3), ("Z/9", 2)])
    def test_r_chain_entries_lie_in_e2(self, ring, spec, z):
        r = ring(spec)
        assert r_chain(r, z).outside(e2_group(r)) == []

    @pytest.mark.parametrize("spec", ["GF(4)", "Z/4"])
    def test_r_chain_needs_two_invertible(self, ring, spec):
        r = ring(spec)
        with pytest.raises(DomainError):
            r_chain(r, r.one)

    def test_f_cycles_over_gf5(self, gf5):
        for a in gf5.units:
            for b in gf5.units:
                assert verify_cycle(f_cycle(gf5, a, b)), (a, b)

    def test_g_and_h_cycles_over_gf5(self, gf5):
        for x in gf5.elements:
            for y in gf5.elements:
                assert verify_cycle(g_cycle(gf5, x, y), normalized=False)
        for a in gf5.units:
            for b in gf5.units:
                assert verify_cycle(h_cycle(gf5, a, b), normalized=False)

    def test_h_cycle_needs_units(self, z4):
        with pytest.raises(DomainError):
            h_cycle(z4, 2, 1)

    def test_standard_cycles_triple(self, gf7):
        f, g, h = standard_cycles(gf7, 3, 5, 1, 4)
        assert all(verify_cycle(c) for c in (f, g, h))

    def test_generic_bar_is_not_a_cycle(self, gf5):
        assert not verify_cycle(BarChain.bar(gf5, e12(gf5, 1), e21(gf5, 1)))

    def test_one_bars_are_cycles(self, gf5):
        assert verify_cycle(BarChain.bar(gf5, weyl(gf5)))


class TestShuffle:
    def test_central_element_with_f_cycle(self, gf5):
        product = shuffle_product(minus_identity(gf5), f_cycle(gf5, 2, 2))
        assert product.degree == 3
        assert verify_cycle(product)

    def test_central_element_with_h_cycle(self, gf7):
        assert verify_cycle(shuffle_product(minus_identity(gf7), h_cycle(gf7, 3, 5)))

    def test_diagonal_commutes_with_h_cycle(self, gf7):
        assert verify_cycle(shuffle_product(diag(gf7, 2), h_cycle(gf7, 3, 5)))

    def test_non_commuting_element(self, gf5):
        with pytest.raises(DomainError):
            shuffle_product(e21(gf5, 1), g_cycle(gf5, 1, 2))

    def test_group_generators_must_commute(self, gf5, e2_gf5):
        with pytest.raises(DomainError):
            shuffle_product(diag(gf5, 2), h_cycle(gf5, 2, 3), e2_gf5)

    def test_rejects_non_cycles(self, gf5):
        with pytest.raises(DomainError):
            shuffle_product(minus_identity(gf5), BarChain.bar(gf5, e12(gf5, 1), e21(gf5, 1)))
        with pytest.raises(ValueError):
            shuffle_product(minus_identity(gf5), BarChain.bar(gf5, weyl(gf5)))


class TestTensorChains:
    def test_total_boundary_squares_to_zero(self, y2_gf5, e2_gf5):
        for seed in range(3):
            chain = random_tensor_chain(y2_gf5, e2_gf5, 2, 2, terms=5, seed=seed)
            assert total_boundary(total_boundary(chain)).is_zero()

    def test_u_chains_have_augmentation_zero(self, gf5, y2_gf5):
        for z in gf5.units:
            assert augmentation_free(u_chain(y2_gf5, z))

    def test_b_relation_witness(self, gf5, y2_gf5):
        witness = b_relation_witness(y2_gf5, diag(gf5, 2), e12(gf5, 1))
        assert len(witness) == 1
        assert witness.bidegrees == [(2, 0)]

    def test_b_relation_needs_stabilizer(self, gf5, y2_gf5):
        with pytest.raises(DomainError):
            b_relation_witness(y2_gf5, weyl(gf5), e12(gf5, 1))


class TestConnectingReplay:
    def test_gf5_square(self, gf5, y2_gf5):
        replay = connecting_replay(gf5, 2, 2, y2_gf5)
        assert replay.passed, [s.to_json() for s in replay.steps]
        assert replay.value == replay.expected

    def test_unit_one(self, gf5, y2_gf5):
        assert connecting_replay(gf5, 1, 3, y2_gf5).passed

    def test_gf7(self, gf7):
        replay = connecting_replay(gf7, 3, 5)
        assert replay.passed
        assert all(step.passed for step in replay.steps)

    def test_needs_two_invertible(self, gf4):
        with pytest.raises(DomainError):
            connecting_replay(gf4, gf4.one, gf4.one)

    def test_step_json(self, gf5, y2_gf5):
        step = connecting_replay(gf5, 2, 3, y2_gf5).steps[0]
        assert set(step.to_json()) >= {'name', 'passed'}
