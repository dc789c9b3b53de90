from itertools import product
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asepkit.combinatorics import (
    ColoredPermutation,
    colored_permutation_at,
    count_colored_permutations,
    cycle_statistics,
    enumerate_colored_permutations,
    excedance_word,
    parse_permutation,
)
from asepkit.trees import (
    AltTree,
    MarkedCycle,
    diagram_arcs,
    enumerate_trees,
    marked_cycle_factorize,
    marked_cycle_from_tree,
    parent_by_formula,
    parent_map_by_formula,
    permutation_from_tree,
    permutation_yin_yang,
    tree_from_colored_permutation,
    tree_from_marked_cycle,
    tree_from_permutation,
    tree_statistics,
    validate_tree,
    yin_yang_pairs,
)

PLAIN_EXAMPLE = "(38)(621457)"
PLAIN_EDGES = {(0, 8), (0, 7), (8, 3), (7, 1), (7, 4), (7, 5), (1, 2), (1, 6)}
COLORED_EXAMPLE = "(3^0)(4^2 5^0 7^4 6^1 2^2 1^8)"
COLORED_EDGES = {(0, 3), (0, 8), (8, 1), (1, 2), (1, 6), (1, 7), (7, 4), (7, 5)}


def edge_set(t):
    return {(p, v) for v, p in t.parent.items()}


def test_factorization_with_minimum_mark():
    mc = MarkedCycle((3, 8, 6, 2, 1, 4, 5, 7, 0))
    factors, mark = marked_cycle_factorize(mc)
    assert mark == 0
    assert factors == [((6, 2, 1, 4, 5), 7), ((3,), 8)]


def test_factorization_with_maximum_mark():
    factors, mark = marked_cycle_factorize(MarkedCycle((6, 2, 1, 4, 5, 7)))
    assert mark == 7
    assert {x for _, x in factors} == {1, 4, 5}
    assert dict((x, w) for w, x in factors)[1] == (6, 2)


def test_single_letter_cycle():
    factors, mark = marked_cycle_factorize(MarkedCycle((4,)))
    assert factors == [] and mark == 4
    t = tree_from_marked_cycle(MarkedCycle((4,)))
    assert t.root == 4 and t.parent == {}


def test_marked_cycle_tree():
    t = tree_from_marked_cycle(MarkedCycle((3, 8, 6, 2, 1, 4, 5, 7, 0)))
    assert edge_set(t) == PLAIN_EDGES
    t = tree_from_marked_cycle(MarkedCycle.from_cycle((1, 2), 1))
    assert t.root == 1 and t.children(1) == (2,)
    assert marked_cycle_from_tree(t) == MarkedCycle((2, 1))


def test_plain_example():
    pi = parse_permutation(PLAIN_EXAMPLE)
    t = tree_from_permutation(pi)
    assert edge_set(t) == PLAIN_EDGES
    assert validate_tree(t).ok
    assert permutation_from_tree(t) == pi
    st_ = tree_statistics(t)
    assert (st_.excedances, st_.root_children, st_.top_children, st_.yin_yang) == ("1011100", 2, 1, 4)
    assert set(yin_yang_pairs(t.parent, 7)) == {(3, 7), (3, 6), (4, 6), (5, 6)}


def test_colored_example():
    pi = parse_permutation(COLORED_EXAMPLE)
    t = tree_from_colored_permutation(pi)
    assert edge_set(t) == COLORED_EDGES
    assert t.colors == {0: 1, 1: 8, 2: 2, 3: 0, 4: 2, 5: 0, 6: 1, 7: 4, 8: 0}
    assert validate_tree(t).ok
    assert permutation_from_tree(t) == pi
    st_ = tree_statistics(t)
    assert (st_.root_children, st_.top_children) == (1, 1)


def test_small_images():
    t = tree_from_permutation(ColoredPermutation((1, 2)))
    assert t.children(0) == (1, 2)
    t = tree_from_colored_permutation(ColoredPermutation((1,), (0,), 2))
    assert t.children(0) == (1, 2) and t.colors[1] == 0 and t.colors[2] == 0
    t = tree_from_colored_permutation(ColoredPermutation((1,), (1,), 2))
    assert edge_set(t) == {(0, 2), (2, 1)} and t.colors[1] == 1
    leaf = AltTree(0, {1: 0})
    assert permutation_from_tree(leaf) == ColoredPermutation((1,))


def test_parent_formula_examples():
    pi = parse_permutation(PLAIN_EXAMPLE)
    assert parent_by_formula(pi, 4) == 7
    assert parent_by_formula(pi, 8) == 0
    assert parent_by_formula(MarkedCycle((1, 2)), 1) == 2


def test_identity_statistics():
    pi = ColoredPermutation(tuple(range(1, 6)))
    st_ = tree_statistics(tree_from_permutation(pi))
    assert st_.excedances == "0000" and st_.yin_yang == 0


def test_validation_failures():
    bad = AltTree(0, {1: 4, 2: 1, 3: 2, 4: 0})
    rep = validate_tree(bad)
    assert not rep.ok and rep.condition == "ii" and rep.vertices[0] == 2
    t = tree_from_colored_permutation(ColoredPermutation((1, 2), (0, 0), 2))
    colors = dict(t.colors)
    colors[1] = 1
    rep = validate_tree(AltTree(0, t.parent, colors, 2))
    assert not rep.ok and rep.condition == "a"


def test_enumerated_tree_counts():
    assert len(list(enumerate_trees(2, 1))) == 6
    assert len(list(enumerate_trees(2, 2))) == 8
    trees = list(enumerate_trees(4, 1))
    assert len(trees) == 120 == len({t.key() for t in trees})
    assert all(validate_tree(t).ok for t in trees)


def test_json_round_trip():
    for text in (PLAIN_EXAMPLE, COLORED_EXAMPLE):
        pi = parse_permutation(text)
        t = tree_from_permutation(pi) if pi.r == 1 else tree_from_colored_permutation(pi)
        assert AltTree.from_json(t.to_json()) == t


def test_diagram_of_plain_example():
    arcs = diagram_arcs(tree_from_permutation(parse_permutation(PLAIN_EXAMPLE)))
    assert len(arcs) == 8
    assert (1, 7, "above") in arcs and (1, 2, "below") in arcs


# --- brute-force oracle: every valid tree rooted at 0 --------------------------


def all_valid_plain(n):
    verts = list(range(1, n + 2))
    out = set()
    for choice in product(range(0, n + 2), repeat=len(verts)):
        parent = dict(zip(verts, choice))
        if any(v == p for v, p in parent.items()):
            continue
        t = AltTree(0, parent)
        if validate_tree(t).ok:
            out.add(t.key())
    return out


def all_valid_decorated(n, r):
    top = n + 1
    verts = list(range(1, n + 1))
    out = set()
    for choice in product(range(0, n + 2), repeat=n):
        parent = dict(zip(verts, choice))
        parent[top] = 0
        if any(v == p for v, p in parent.items()):
            continue
        for cols in product(range(r), repeat=n):
            colors = {0: 1, top: 0, **dict(zip(verts, cols))}
            t = AltTree(0, parent, colors, r)
            if validate_tree(t).ok:
                out.add(t.key())
    return out


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_plain_image_is_every_valid_tree(n):
    image = {tree_from_permutation(p).key() for p in enumerate_colored_permutations(n + 1, 1)}
    assert len(image) == factorial(n + 1)
    assert image == all_valid_plain(n)


@pytest.mark.parametrize("n,r", [(1, 2), (2, 2), (1, 3), (2, 3)])
def test_decorated_image_is_every_valid_tree(n, r):
    image = {tree_from_colored_permutation(p).key() for p in enumerate_colored_permutations(n, r)}
    assert len(image) == r**n * factorial(n)
    assert image == all_valid_decorated(n, r)


# --- properties ----------------------------------------------------------------


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 7), st.data())
def test_plain_round_trip_and_transport(m, data):
    pi = colored_permutation_at(m, 1, data.draw(st.integers(0, count_colored_permutations(m, 1) - 1)))
    t = tree_from_permutation(pi)
    assert validate_tree(t).ok
    assert permutation_from_tree(t) == pi
    assert parent_map_by_formula(pi) == t.parent
    st_ = tree_statistics(t)
    cs = cycle_statistics(pi, "plain")
    assert (st_.excedances, st_.root_children, st_.top_children, st_.yin_yang) == (
        excedance_word(pi, m - 1), cs.c, cs.c_prime, permutation_yin_yang(pi))


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4), st.integers(2, 3), st.data())
def test_colored_round_trip_and_transport(n, r, data):
    pi = colored_permutation_at(n, r, data.draw(st.integers(0, count_colored_permutations(n, r) - 1)))
    t = tree_from_colored_permutation(pi)
    assert validate_tree(t).ok
    assert permutation_from_tree(t) == pi
    assert parent_map_by_formula(pi) == t.parent
    st_ = tree_statistics(t)
    cs = cycle_statistics(pi, "colored")
    # the root side carries the zero cycles, the top side the non-zero ones
    assert (st_.excedances, st_.root_children, st_.top_children, st_.yin_yang) == (
        excedance_word(pi), cs.zc, cs.nc, permutation_yin_yang(pi))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 30), min_size=1, max_size=9, unique=True), st.booleans())
def test_marked_cycle_round_trip(letters, use_min):
    mark = min(letters) if use_min else max(letters)
    rest = [v for v in letters if v != mark]
    mc = MarkedCycle(tuple(rest) + (mark,))
    t = tree_from_marked_cycle(mc)
    assert validate_tree(t).ok
    assert marked_cycle_from_tree(t) == mc
    for v in rest:
        assert parent_by_formula(mc, v) == t.parent[v]
