
import pytest
from hypothesis import given, strategies as st

from lfkirby.surface import (
    InvalidParameter,
    build_surface,
    homology_vector,
    linked_pairs,
    pairing,
    self_intersection,
)
from lfkirby.words import (
    canonical,
    commutator_product,
    cyclic_reduce,
    free_reduce,
    inverse,
    parse_word,
    to_string,
)


@pytest.mark.parametrize("g", [1, 2, 3, 5])
def test_one_boundary_and_euler_count(g):
    S = build_surface(g)
    assert S.handle_count == 2 * g
    assert S.euler_characteristic() == 1 - 2 * g
    assert len(S.boundary_cycles()) == 1


def test_genus_one_counts():
    S = build_surface(1)
    assert (S.handle_count, S.euler_characteristic(), len(S.boundary_cycles())) == (2, -1, 1)


def test_dual_arc_labels():
    S = build_surface(2)
    assert [S.dual_arc_labels[b] for b in range(1, 5)] == ["alpha*1", "beta*1", "alpha*2", "beta*2"]
    assert len(set(S.dual_arc_labels.values())) == S.handle_count


def test_parameters_of_the_largest_worked_case():
    h, n = 3, 2
    S = build_surface(2 * h + n - 1)
    assert (S.genus, S.handle_count) == (7, 14)


@pytest.mark.parametrize("g", [0, -1, 1.5])
def test_bad_genus(g):
    with pytest.raises(InvalidParameter):
        build_surface(g)


@pytest.mark.parametrize("g", [1, 2, 4])
def test_boundary_word_is_product_of_commutators(g):
    S = build_surface(g)
    assert canonical(S.boundary_word()) == canonical(commutator_product(g))
    assert parse_word(to_string(commutator_product(g))) == commutator_product(g)
    assert to_string(commutator_product(2)) == "x1 y1 X1 Y1 x2 y2 X2 Y2"


def test_basis_pairing():
    g = 3
    basis = [tuple(int(i == j) for j in range(2 * g)) for i in range(2 * g)]
    for i, u in enumerate(basis):
        for j, v in enumerate(basis):
            want = 0
            if i % 2 == 0 and j == i + 1:
                want = 1
            if j % 2 == 0 and i == j + 1:
                want = -1
            assert pairing(u, v) == want


letters = st.integers(1, 6).flatmap(lambda h: st.sampled_from([h, -h]))


@given(st.lists(letters, max_size=12))
def test_free_reduction_is_idempotent_and_inverse_cancels(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert free_reduce(tuple(w) + inverse(w)) == ()
    assert cyclic_reduce(cyclic_reduce(w)) == cyclic_reduce(w)


@given(st.lists(letters, min_size=1, max_size=10), st.integers(0, 9))
def test_canonical_ignores_rotation_and_reversal(w, k):
    w = cyclic_reduce(w)
    if not w:
        return
    k %= len(w)
    rot = w[k:] + w[:k]
    assert canonical(rot) == canonical(w) == canonical(inverse(w))


@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_pairing_is_alternating(u, v):
    assert pairing(u, u) == 0
    assert pairing(u, v) == -pairing(v, u)


def test_alpha_beta_meet_once():
    S = build_surface(1)
    alpha, beta = (1,), (-2,)
    assert linked_pairs(S, alpha, beta) == 1
    assert homology_vector(S, alpha) == (1, 0)
    assert homology_vector(S, beta) == (0, 1)
    assert pairing(homology_vector(S, alpha), homology_vector(S, beta)) == 1


def test_genus_one_simple_curves_are_slopes():
    # on the torus with a hole, primitive words of x, y with one self-crossing count of zero
    S = build_surface(1)
    assert self_intersection(S, (1, -2)) == 0  # x y
    assert self_intersection(S, (1, 1, -2)) == 0  # x^2 y
    assert self_intersection(S, (1, -2, -1, 2)) == 0  # boundary
    assert self_intersection(S, (1, 1, 2, 2)) > 0  # x^2 Y^2
