from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asepkit.combinatorics import descent_count
from asepkit.eulerian import (
    PERM_PARAMS,
    TREE_PARAMS,
    XY_PARAMS,
    asep_partition_perm,
    bracket_enum,
    colored_eulerian,
    excedance_distribution,
    excedance_polynomial,
    excedance_polynomial_recursive,
    specialize,
    tree_parameters,
    tree_partition,
)
from asepkit.markov import stationary_partition
from asepkit.polycore import ParamPoly, SitePoly, normalize_proportional, polys_proportional

a, b, q = (ParamPoly.var(v, TREE_PARAMS) for v in TREE_PARAMS)
positive = st.fractions(Fraction(1, 7), 7)


def test_bracket_small_words():
    assert bracket_enum("") == a
    assert bracket_enum("0") == a * a
    assert bracket_enum("1") == a * b
    for r in (2, 3):
        assert bracket_enum("", r) == ParamPoly.const(1, TREE_PARAMS)
        assert bracket_enum("1", r) == b * (r - 1)


def test_permutation_sum_one_site():
    A, B = (ParamPoly.var(v, PERM_PARAMS) for v in ("A", "B"))
    x1 = SitePoly.variable(1, "x1", PERM_PARAMS)
    assert asep_partition_perm(1, 1) == SitePoly.const(1, A * A, PERM_PARAMS) + x1 * (A * B)


def test_permutation_sum_two_sites():
    qv = ParamPoly.var("q", ("q",))
    p = asep_partition_perm(2, 1).subs_params({"A": 1, "B": 1})
    x1, x2 = SitePoly.variable(2, "x1", ("q",)), SitePoly.variable(2, "x2", ("q",))
    want = SitePoly.const(2, 1, ("q",)) + x2 + x1 * (qv + 2) + x1 * x2
    assert normalize_proportional(p, want)


def test_colored_one_site():
    for qq in (Fraction(0), Fraction(1, 2), Fraction(3)):
        z = stationary_partition(1, qq, 2, 2)
        assert normalize_proportional(z, specialize(asep_partition_perm(1, 2), 2, 2, qq))


def test_first_excedance_polynomials():
    A, B = (ParamPoly.var(v, XY_PARAMS) for v in XY_PARAMS)
    assert excedance_polynomial(0, 2) == SitePoly.const(0, 1, XY_PARAMS)
    for r in (1, 2, 3):
        want = SitePoly.variable(1, "x1", XY_PARAMS) * (A * (r - 1)) + SitePoly.variable(1, "y1", XY_PARAMS) * B
        assert excedance_polynomial(1, r) == want == excedance_polynomial_recursive(1, r)


@pytest.mark.parametrize("n,r", [(n, r) for n in range(1, 5) for r in (1, 2, 3)])
def test_recursion_matches_direct_sum(n, r):
    assert excedance_polynomial(n, r) == excedance_polynomial_recursive(n, r)


@pytest.mark.parametrize("n,r", [(2, 2), (3, 3), (3, 1)])
def test_y_specialization_is_x_only_sum(n, r):
    assert excedance_polynomial(n, r).set_variables({"y%d" % j: 1 for j in range(1, n + 1)}) == colored_eulerian(n, r)


@pytest.mark.parametrize("n", range(1, 6))
def test_excedances_match_descents(n):
    m = n + 1
    des = [0] * m
    for s in permutations(range(1, m + 1)):
        des[descent_count(s)] += 1
    assert excedance_distribution(m) == des
    diag = specialize(asep_partition_perm(n, 1), 1, 1, 1).diagonal().univariate()
    assert [int(c) for c in diag] == des


def words(m):
    return [format(k, "0%db" % m) if m else "" for k in range(2**m)]


@pytest.mark.parametrize("m", range(0, 6))
def test_tree_bracket_rules_plain(m):
    for w in words(m):
        if w.startswith("0"):
            assert bracket_enum(w) == a * bracket_enum(w[1:])
        if w.endswith("1"):
            assert bracket_enum(w) == b * bracket_enum(w[:-1])
        for k in range(len(w) - 1):
            if w[k:k + 2] == "10":
                u, v = w[:k], w[k + 2:]
                assert bracket_enum(w) == q * bracket_enum(u + "01" + v) + bracket_enum(u + "1" + v) + bracket_enum(u + "0" + v)


@pytest.mark.parametrize("m,r", [(m, r) for m in range(0, 5) for r in (2, 3)])
def test_tree_bracket_rules_colored(m, r):
    for w in words(m):
        if w.startswith("0"):
            assert bracket_enum(w, r) == a * bracket_enum(w[1:], r)
        if w.endswith("1"):
            assert bracket_enum(w, r) == b * (r - 1) * bracket_enum(w[:-1], r)
        for k in range(len(w) - 1):
            if w[k:k + 2] == "10":
                u, v = w[:k], w[k + 2:]
                rhs = q * bracket_enum(u + "01" + v, r) + (bracket_enum(u + "1" + v, r) + bracket_enum(u + "0" + v, r)) * r
                assert bracket_enum(w, r) == rhs


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), positive, positive, st.fractions(0, 5))
def test_routes_agree_with_solver(n, r, al, be, qq):
    z = stationary_partition(n, qq, al, be)
    perm = specialize(asep_partition_perm(n, r), al, be, qq)
    trees = tree_partition(n, r).subs_params({**tree_parameters(al, be, r), "q": qq})
    assert polys_proportional(z, perm, trees)
