import itertools

import pytest
from hypothesis import given, settings, strategies as st

from conftest import GRID, curve_pool, dataset
from lfkirby import arrangement as am
from lfkirby.arrangement import (
    Arrangement,
    DatasetFormatError,
    UnknownCurve,
    crossing_word,
    curves_equal,
    from_words,
    geometric_intersection,
    homology_class,
    reduce,
    total_crossings,
    validate,
)
from lfkirby.mcg import twist_curve
from lfkirby.surface import build_surface, linked_pairs
from lfkirby.words import canonical, commutator_product, parse_word


def brute_min_crossings(surface, words):
    """Least total crossing over every choice of strand orders keeping each curve embedded."""
    names = [f"w{i}" for i in range(len(words))]
    per_band = {}
    for h in range(1, surface.handle_count + 1):
        per_band[h] = [(names[c], i) for c, w in enumerate(words) for i, a in enumerate(w) if abs(a) == h]
    best = None
    bands = sorted(per_band)
    for choice in itertools.product(*(itertools.permutations(per_band[h]) for h in bands)):
        arr = Arrangement(surface, tuple(zip(names, map(tuple, words))), tuple(zip(bands, choice)))
        if not validate(arr).ok:
            continue
        t = total_crossings(arr)
        best = t if best is None else min(best, t)
    return best


# ---------------------------------------------------------------------------
# validate


def test_empty_arrangement_is_valid():
    assert validate(Arrangement(build_surface(2))).ok


def test_self_crossing_curve_is_flagged():
    S = build_surface(1)
    arr = reduce(Arrangement(S, (("bad", (1, 1, 2, 2)),)))
    v = validate(arr)
    assert not v.ok
    assert v.failures[0][0] == "embedded"
    assert "bad" in v.failures[0][1]


def test_missing_strand_is_flagged():
    S = build_surface(1)
    arr = Arrangement(S, (("x", (1,)),), ((1, ()), (2, ())))
    v = validate(arr)
    assert not v.ok and v.failures[0][0] == "strand-order"


@pytest.mark.parametrize("h,n", GRID)
def test_shipped_datasets_are_valid(h, n):
    assert validate(dataset(h, n)).ok


# ---------------------------------------------------------------------------
# reduce


def test_bigon_is_removed():
    S = build_surface(1)
    arr = reduce(Arrangement(S, (("c", (1, -1, -2)),)))
    assert arr.word("c") == (-2,)


def test_disjoint_curves_unchanged():
    S = build_surface(2)
    arr = from_words(S, {"p": (1,), "q": (3,)})
    assert reduce(arr) == arr
    assert total_crossings(arr) == 0


def test_torus_double_twist_brute_force():
    # t_alpha fixes alpha, so the count 2 shows up against beta, not alpha
    S = build_surface(1)
    alpha, beta = (1,), (-2,)
    d = twist_curve(S, alpha, beta, 2)
    arr = from_words(S, {"alpha": alpha, "beta": beta, "d": d})
    assert geometric_intersection(arr, "beta", "d") == 2 == brute_min_crossings(S, [beta, d])
    assert geometric_intersection(arr, "alpha", "d") == 1 == brute_min_crossings(S, [alpha, d])
    assert total_crossings(reduce(arr.subset(["beta", "d"]))) == 2


def _pairs(g):
    pool = curve_pool(g)
    return st.tuples(st.sampled_from(pool), st.sampled_from(pool))


@settings(max_examples=60)
@given(st.sampled_from([1, 2]).flatmap(lambda g: st.tuples(st.just(g), _pairs(g))))
def test_minimal_position_matches_brute_force(case):
    g, (c, d) = case
    S = build_surface(g)
    if sum(len(c) for _ in [0]) + len(d) > 7:
        return
    arr = from_words(S, {"c": c, "d": d})
    want = 0 if canonical(c) == canonical(d) else brute_min_crossings(S, [c, d])
    assert geometric_intersection(arr, "c", "d") == want


@settings(max_examples=150)
@given(st.sampled_from([1, 2, 3]).flatmap(lambda g: st.tuples(st.just(g), st.lists(st.sampled_from(curve_pool(g)), min_size=1, max_size=4))))
def test_reduce_idempotent_monotone_and_homology_preserving(case):
    g, words = case
    S = build_surface(g)
    named = [(f"k{i}", w) for i, w in enumerate(words)]
    # start from a deliberately poor drawing: strands in reverse reading order
    orders = []
    for h in range(1, S.handle_count + 1):
        strands = [(n, i) for n, w in named for i, a in enumerate(w) if abs(a) == h]
        orders.append((h, tuple(reversed(strands))))
    raw = Arrangement(S, tuple(named), tuple(orders))
    red = reduce(raw)
    assert reduce(red) == red
    if validate(raw).ok:
        assert total_crossings(red) <= total_crossings(raw)
    for n, _ in named:
        assert homology_class(red, n) == homology_class(raw, n)


@settings(max_examples=40)
@given(st.sampled_from([1, 2]).flatmap(lambda g: st.tuples(st.just(g), st.lists(st.sampled_from(curve_pool(g)), min_size=2, max_size=3))))
def test_reduce_is_a_fixpoint_of_adjacent_swaps(case):
    g, words = case
    arr = from_words(build_surface(g), {f"k{i}": w for i, w in enumerate(words)})
    assert total_crossings(am._descend(arr)) == total_crossings(arr)


# ---------------------------------------------------------------------------
# intersection numbers


@settings(max_examples=200)
@given(st.sampled_from([1, 2, 3]).flatmap(lambda g: st.tuples(st.just(g), _pairs(g))))
def test_intersection_agrees_with_linked_lifts_and_bounds_homology(case):
    g, (c, d) = case
    S = build_surface(g)
    arr = from_words(S, {"c": c, "d": d})
    i = geometric_intersection(arr, "c", "d")
    oracle = 0 if canonical(c) == canonical(d) else linked_pairs(S, c, d)
    assert i == oracle
    assert i >= abs(homology_class(arr, "c").pair(homology_class(arr, "d")))


def test_parallel_copy_is_disjoint():
    arr = dataset(2, 2)
    copy = arr.with_curves({"D1'": arr.word("D1")})
    assert geometric_intersection(copy, "D1", "D1'") == 0


@pytest.mark.parametrize("h,n", GRID)
def test_chain_curves_avoid_middle_curves(h, n):
    arr = dataset(h, n)
    for l in range(1, 2 * h + 1):
        for k in range(1, 2 * n):
            assert geometric_intersection(arr, f"a{l}", f"c{k}") == 0
    for j in range(1, 2 * h):
        assert geometric_intersection(arr, f"a{j}", f"a{j + 1}") == 1


def test_unknown_curve():
    with pytest.raises(UnknownCurve):
        geometric_intersection(dataset(1, 1), "a1", "zz")


# ---------------------------------------------------------------------------
# homology and crossing words


def test_homology_examples():
    S = build_surface(2)
    arr = from_words(S, {"bd": commutator_product(2), "alpha1": (1,)})
    assert homology_class(arr, "bd").is_zero()
    assert homology_class(arr, "alpha1").vector == (1, 0, 0, 0)


def test_transvection_of_chain_neighbours():
    arr = dataset(1, 1)
    a1, a2 = homology_class(arr, "a1"), homology_class(arr, "a2")
    t = twist_curve(arr.surface, arr.word("a1"), arr.word("a2"), 1)
    img = homology_class(arr.with_curves({"t": t}), "t")
    assert img in (a2 + a1, a2 + (-a1))
    assert img == HC_add(a2, a1, a2.pair(a1))


def HC_add(x, c, p):
    return am.HomologyClass(tuple(a + p * b for a, b in zip(x.vector, c.vector)))


def test_crossing_words():
    S = build_surface(2)
    arr = from_words(S, {"alpha1": (1,), "bd": S.boundary_word()})
    assert crossing_word(arr, "alpha1") == ("x1",)
    bd = parse_word(" ".join(crossing_word(arr, "bd")))
    assert canonical(bd) == canonical(commutator_product(2))


@pytest.mark.parametrize("h,n", GRID)
def test_crossing_words_abelianize_to_homology(h, n):
    arr = dataset(h, n)
    for name in arr.names:
        word = crossing_word(arr, name)
        vec = [0] * arr.surface.handle_count
        for tok in word:
            i = int(tok[1:])
            slot = 2 * i - 2 if tok[0] in "xX" else 2 * i - 1
            vec[slot] += 1 if tok[0].islower() else -1
        assert tuple(vec) == homology_class(arr, name).vector


# ---------------------------------------------------------------------------
# curve equality


def test_curves_equal_examples():
    S = build_surface(1)
    arr = from_words(S, {"a": (1,), "b": (-2,), "a_rev": (-1,)})
    assert curves_equal(arr, "a", "a")
    assert curves_equal(arr, "a", "a_rev")
    assert not curves_equal(arr, "a", "b")


def test_inverse_torus_monodromy_on_first_gurtas_curve():
    from lfkirby.fibration import torus_knot_monodromy
    from lfkirby.mcg import word_images

    arr = dataset(1, 1)
    img = word_images(arr, torus_knot_monodromy(1, arr).inverse(), ["D0"])["D0"]
    tw = twist_curve(arr.surface, arr.word("a1"), arr.word("D0"), 1)
    probe = arr.with_curves({"img": img, "tw": tw})
    assert curves_equal(probe, "img", "tw", battery=["a1", "a2", "c1"])


@settings(max_examples=60)
@given(st.lists(st.sampled_from(curve_pool(2)), min_size=3, max_size=3), st.sampled_from(curve_pool(2)))
def test_curves_equal_is_an_equivalence(words, c):
    S = build_surface(2)
    # mix in a twisted-back copy so that equal pairs occur
    back = twist_curve(S, c, twist_curve(S, c, words[0], 1), -1)
    arr = from_words(S, {"p": words[0], "q": words[1], "r": words[2], "p2": back, "probe": c})
    names = ["p", "q", "r", "p2"]
    assert curves_equal(arr, "p", "p2")
    for x, y in itertools.product(names, names):
        if curves_equal(arr, x, y):
            assert curves_equal(arr, y, x)
            assert homology_class(arr, x) in (homology_class(arr, y), -homology_class(arr, y))
            assert geometric_intersection(arr, x, "probe") == geometric_intersection(arr, y, "probe")
            for z in names:
                if curves_equal(arr, y, z):
                    assert curves_equal(arr, x, z)


# ---------------------------------------------------------------------------
# dataset text format


@pytest.mark.parametrize("h,n", [(1, 1), (3, 2)])
def test_dataset_round_trip(h, n):
    arr = dataset(h, n)
    assert am.loads(am.dumps(arr)) == arr


def test_parser_tolerates_whitespace():
    text = "surface   genus=1  boundary=1\n\ncurve  a\n  passages:   H1+\ncurve b\npassages: H2-\norder H1:   a.0\n order H2: b.0  \n"
    arr = am.loads(text)
    assert arr.word("a") == (1,) and arr.word("b") == (-2,)
    assert validate(arr).ok


@pytest.mark.parametrize(
    "text",
    [
        "surface genus=1 boundary=1\ncolour red\n",
        "surface genus=1 boundary=2\n",
        "surface genus=1 boundary=1\ncurve a\npassages: H1*\n",
        "surface genus=1 boundary=1\npassages: H1+\n",
        "curve a\npassages: H1+\n",
        "surface genus=1 boundary=1\ncurve a\n",
    ],
)
def test_parser_rejects(text):
    with pytest.raises((DatasetFormatError, ValueError)):
        am.loads(text)
