import pytest

from algebra.matgroup import e2_group
from algebra.zlinalg import kernel_lattice
from homology.unimod import (augmentation_exact, build_y_complex, canonical_simplex,
                             canonicalize_tuple, check_boundaries, check_equivariance,
                             is_unimodular, proj_points, y_coinvariants, y_homology)
from utils.errors import CapExceededError, DomainError


@pytest.fixture(scope='module')
def y_gf3(gf3):
    return build_y_complex(gf3, 3)


@pytest.fixture(scope='module')
def y_gf5(gf5):
    return build_y_complex(gf5, 3)


def test_unimodular_pairs(z4):
    assert is_unimodular(z4, 2, 1)
    assert not is_unimodular(z4, 2, 2)
    assert not is_unimodular(z4, 0, 0)


@pytest.mark.parametrize("spec, count", [("GF(3)", 4), ("Z/4", 6), ("Z/8", 12), ("Z/6", 12)])
def test_projective_line_sizes(ring, spec, count):
    points, index = proj_points(ring(spec))
    assert len(points) == count
    assert set(index.values()) == set(range(count))


def test_basis_sizes(gf3, y_gf3):
    low = build_y_complex(gf3, 1)
    assert low.max_degree == 1
    assert [low.rank(0), low.rank(1)] == [4, 12]
    assert y_gf3.rank(3) == 24


@pytest.mark.slow
def test_top_degree_over_gf5(gf5):
    assert build_y_complex(gf5, 4).rank(4) == 720


def test_degree_out_of_range(gf3):
    with pytest.raises(ValueError):
        build_y_complex(gf3, 5)


def test_basis_cap_and_truncation(gf5):
    with pytest.raises(CapExceededError):
        build_y_complex(gf5, 3, cap=200)
    truncated = build_y_complex(gf5, 3, cap=200, truncate=True)
    assert truncated.max_degree == 2


def test_general_position_pairs_lie_in_e2(gf5):
    build_y_complex(gf5, 1, verify_ge2=e2_group(gf5))


def test_boundary_squares_to_zero(y_gf3, y_gf5):
    assert check_boundaries(y_gf3) == []
    assert check_boundaries(y_gf5) == []


def test_boundaries_are_equivariant(y_gf3):
    assert check_equivariance(y_gf3) == []


def test_kernel_rank_of_first_boundary(y_gf3):
    assert kernel_lattice(y_gf3.boundary_matrix(1)).rank == 9


def test_homology(y_gf3, y_gf5, ring):
    assert y_homology(y_gf3, 0).invariants == (0,)
    assert y_homology(y_gf5, 1).is_trivial
    assert y_homology(build_y_complex(ring("Z/6"), 1), 0).invariants == (0,)
    assert augmentation_exact(y_gf3)
    with pytest.raises(ValueError):
        y_homology(y_gf3, 3)


def test_canonical_form_of_standard_triple(gf5, y_gf5):
    simplex = (y_gf5.infinity, y_gf5.origin, y_gf5.point(2))
    form = canonicalize_tuple(y_gf5, simplex)
    assert form.class_rep == 2
    assert form.params == ()
    assert form.transporter == (1, 0, 0, 1)
    assert form.canonical == simplex


def test_canonical_form_of_degree_three(gf5, y_gf5):
    form = canonicalize_tuple(y_gf5, canonical_simplex(y_gf5, 1, 2))
    assert form.key == (1, 2)


def test_canonical_class_is_orbit_invariant(gf5, y_gf5):
    group = e2_group(gf5)
    simplex = (y_gf5.infinity, y_gf5.origin, y_gf5.point(2))
    for g in group:
        assert canonicalize_tuple(y_gf5, y_gf5.act(g, simplex), group).class_rep == 2


def test_canonical_form_rejects_bad_simplices(y_gf5):
    with pytest.raises(DomainError):
        canonicalize_tuple(y_gf5, (y_gf5.infinity, y_gf5.infinity, y_gf5.origin))
    with pytest.raises(ValueError):
        canonicalize_tuple(y_gf5, (y_gf5.infinity, y_gf5.origin))


@pytest.mark.parametrize("n, rank", [(2, 2), (3, 6)])
def test_coinvariant_ranks_over_gf5(y_gf5, n, rank):
    group, labels = y_coinvariants(y_gf5, n)
    assert group.rank == rank
    assert len(labels) == rank


def test_coinvariant_labels(y_gf5, ring):
    _, labels = y_coinvariants(y_gf5, 2)
    assert labels == ['<1>[]', '<2>[]']
    assert y_coinvariants(build_y_complex(ring("GF(7)"), 2), 2)[0].rank == 2


def test_coinvariant_projection_sums_orbits(y_gf5):
    group, _ = y_coinvariants(y_gf5, 2)
    simplex = canonical_simplex(y_gf5, 2)
    vec = y_gf5.chain({simplex: 3})
    assert group.project(vec) == (0, 3)
