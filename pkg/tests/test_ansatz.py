from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asepkit.ansatz import (
    PARAMS,
    all_reduction_values,
    ansatz_partition,
    bracket,
    bracket_value,
    redexes,
    termination_measure,
)
from asepkit.markov import stationary_partition
from asepkit.polycore import ParamPoly, SitePoly, normalize_proportional

al, be, q, xi = (ParamPoly.var(v, PARAMS) for v in PARAMS)


def words(max_len):
    for m in range(max_len + 1):
        for bits in product("01", repeat=m):
            yield "".join(bits)


def test_base_values():
    assert bracket("") == ParamPoly.const(1, PARAMS)
    assert bracket("0") == be * xi
    assert bracket("1") == al * xi


def test_two_letter_value():
    # one bulk step, then the boundary rules; every term has xi^2
    assert bracket("10") == q * al * be * xi**2 + al * al * be * xi**2 + al * be * be * xi**2


def test_partition_small():
    assert ansatz_partition(0) == SitePoly.const(0, 1, PARAMS)
    x1 = SitePoly.variable(1, "x1", PARAMS)
    assert ansatz_partition(1) == SitePoly.const(1, be * xi, PARAMS) + x1 * (al * xi)
    z2 = ansatz_partition(2).subs_params({"alpha": 1, "beta": 1, "xi": 1})
    qq = ParamPoly.var("q", ("q",))
    X1, X2 = SitePoly.variable(2, "x1", ("q",)), SitePoly.variable(2, "x2", ("q",))
    assert z2 == SitePoly.const(2, 1, ("q",)) + X2 + X1 * (qq + 2) + X1 * X2


def test_rejects_bad_word():
    with pytest.raises(ValueError):
        bracket("012")


@pytest.mark.parametrize("w", list(words(7)))
def test_confluence(w):
    assert all_reduction_values(w) == {bracket(w)}


def test_confluence_length_eight():
    for w in words(8):
        if len(w) == 8:
            assert all_reduction_values(w) == {bracket(w)}


@pytest.mark.parametrize("w", list(words(6)))
def test_every_step_lowers_measure(w):
    for _, _, parts in redexes(w):
        for _, sub in parts:
            assert termination_measure(sub) < termination_measure(w)


@pytest.mark.parametrize("w", list(words(6)))
def test_xi_homogeneity(w):
    assert bracket(w).is_homogeneous("xi", len(w))


def test_value_at_rationals():
    assert bracket_value("10", 1, 1, 1) == 3
    assert bracket_value("01", 2, 3, 5, Fraction(1, 2)) == Fraction(6, 4)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 5), st.fractions(Fraction(1, 9), 9), st.fractions(Fraction(1, 9), 9), st.fractions(0, 9))
def test_matches_solver(n, a, b, qq):
    z = stationary_partition(n, qq, a, b)
    p = ansatz_partition(n).subs_params({"alpha": a, "beta": b, "q": qq, "xi": 1})
    assert normalize_proportional(z, p)
