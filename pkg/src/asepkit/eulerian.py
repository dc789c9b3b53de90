"""
Combinatorial partition functions.

Two independent routes are kept apart on purpose:

* the tree route sums a^{c0} b^{c1} q^{yy} over alternative trees grouped by
  their excedance word (``tree_bracket``), using statistics read off the
  trees built by the bijections;
* the permutation route sums over (colored) permutations with cycle
  statistics and the parent formula (``asep_partition_perm``), never
  building a tree.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache

from .combinatorics import (
    cycle_statistics,
    enumerate_colored_permutations,
    excedance_sets,
    excedance_word,
)
from .polycore import ParamPoly, SitePoly, parse_rational
from .trees import enumerate_trees, permutation_yin_yang, tree_statistics

TREE_PARAMS = ("a", "b", "q")
PERM_PARAMS = ("A", "B", "q")  # A = 1/alpha, B = 1/beta
XY_PARAMS = ("a", "b")


# ---------------------------------------------------------------------------
# tree route


@lru_cache(maxsize=None)
def _tree_table(n: int, r: int) -> dict:
    counts: Counter = Counter()
    for t in enumerate_trees(n, r):
        s = tree_statistics(t)
        counts[(s.excedances, s.root_children, s.top_children, s.yin_yang)] += 1
    table: dict = {}
    for (word, c0, c1, yy), mult in counts.items():
        mono = ParamPoly.monomial(TREE_PARAMS, (c0, c1, yy), mult)
        table[word] = table[word] + mono if word in table else mono
    return table


def bracket_table(n: int, r: int = 1) -> dict:
    """{eta: [eta]} for every word of length n that occurs (the others are 0)."""
    if n < 0 or r < 1:
        raise ValueError("need n >= 0 and r >= 1")
    return dict(_tree_table(n, r))


def bracket_enum(eta: str, r: int = 1) -> ParamPoly:
    """
    [eta] (r = 1) or [eta]_r (r >= 2): the sum of a^{c0} b^{c1} q^{yy} over
    trees on [0, |eta|+1] whose excedance word is eta.
    """
    if any(ch not in "01" for ch in eta):
        raise ValueError("not a 0/1 word: %r" % eta)
    return _tree_table(len(eta), r).get(eta, ParamPoly.const(0, TREE_PARAMS))


def tree_partition(n: int, r: int = 1) -> SitePoly:
    """Sum over eta of [eta]_r x^eta, in the parameters a, b, q."""
    zero = (0,) * n
    return SitePoly(
        n,
        TREE_PARAMS,
        {(tuple(int(ch) for ch in w), zero): c for w, c in _tree_table(n, r).items()},
    )


def tree_parameters(alpha, beta, r: int = 1) -> dict:
    """
    Values of a and b that make ``tree_partition`` proportional to the
    stationary partition function: a = 1/alpha, b = 1/beta for plain trees,
    a = r/alpha, b = r/((r-1) beta) for decorated ones.
    """
    alpha, beta = parse_rational(alpha), parse_rational(beta)
    if r == 1:
        return {"a": 1 / alpha, "b": 1 / beta}
    return {"a": Fraction(r) / alpha, "b": Fraction(r, r - 1) / beta}


# ---------------------------------------------------------------------------
# permutation route


@lru_cache(maxsize=None)
def _perm_partition(n: int, r: int) -> SitePoly:
    counts: Counter = Counter()
    if r == 1:
        for pi in enumerate_colored_permutations(n + 1, 1):
            st = cycle_statistics(pi, "plain")
            key = (excedance_word(pi, n), st.c, st.c_prime, permutation_yin_yang(pi))
            counts[key] += 1
    else:
        for pi in enumerate_colored_permutations(n, r):
            st = cycle_statistics(pi, "colored")
            key = (excedance_word(pi), st.zc, st.nc, permutation_yin_yang(pi))
            counts[key] += 1
    zero = (0,) * n
    terms: dict = {}
    for (word, e_a, e_b, yy), mult in counts.items():
        if r == 1:
            c = Fraction(mult)
        else:
            c = mult * Fraction(r) ** e_a * Fraction(r, r - 1) ** e_b
        mono = ParamPoly.monomial(PERM_PARAMS, (e_a, e_b, yy), c)
        key = (tuple(int(ch) for ch in word), zero)
        terms[key] = terms[key] + mono if key in terms else mono
    return SitePoly(n, PERM_PARAMS, terms)


def asep_partition_perm(n: int, r: int = 1) -> SitePoly:
    """
    Permutation sum proportional to the stationary partition function of
    the line process with gamma = delta = 0, in A = 1/alpha, B = 1/beta, q.

    r = 1: sum over S_{n+1} of A^c B^c' q^yy x^X.
    r >= 2: sum over Z_r wr S_n of (rA)^zc (rB/(r-1))^nc q^yy x^X, where zc
    and nc count zero and non-zero cycles.
    """
    if n < 0 or r < 1:
        raise ValueError("need n >= 0 and r >= 1")
    return _perm_partition(n, r)


def specialize(p: SitePoly, alpha, beta, q) -> SitePoly:
    """Substitute A = 1/alpha, B = 1/beta and q into a permutation-route polynomial."""
    alpha, beta = parse_rational(alpha), parse_rational(beta)
    return p.subs_params({"A": 1 / alpha, "B": 1 / beta, "q": q})


# ---------------------------------------------------------------------------
# excedance / anti-excedance polynomials


@lru_cache(maxsize=None)
def excedance_polynomial(n: int, r: int) -> SitePoly:
    """
    Sum over Z_r wr S_n of a^nc b^zc prod_{i in X} x_i prod_{j in Y} y_j,
    by direct enumeration.
    """
    if n < 0 or r < 1:
        raise ValueError("need n >= 0 and r >= 1")
    counts: Counter = Counter()
    for pi in enumerate_colored_permutations(n, r):
        X, Y = excedance_sets(pi)
        st = cycle_statistics(pi, "colored")
        counts[(X, Y, st.nc, st.zc)] += 1
    items = [
        (X, Y, ParamPoly.monomial(XY_PARAMS, (nc, zc), mult))
        for (X, Y, nc, zc), mult in counts.items()
    ]
    return SitePoly.from_subsets(n, XY_PARAMS, items)


@lru_cache(maxsize=None)
def excedance_polynomial_recursive(n: int, r: int) -> SitePoly:
    """
    The same polynomial from the insertion recursion

        P_n = (a(r-1) x_1 + b y_1) P*_{n-1}
              + r x_1 y_1 sum_{j=2..n} (d/dx_j + d/dy_j) P*_{n-1},

    where P* shifts every index up by one, starting from P_0 = 1.
    """
    if n < 0 or r < 1:
        raise ValueError("need n >= 0 and r >= 1")
    a = ParamPoly.var("a", XY_PARAMS)
    b = ParamPoly.var("b", XY_PARAMS)
    poly = SitePoly.const(0, 1, XY_PARAMS)
    for k in range(1, n + 1):
        shifted = poly.shift(1)
        x1 = SitePoly.variable(k, "x1", XY_PARAMS)
        y1 = SitePoly.variable(k, "y1", XY_PARAMS)
        first = (x1 * (a * (r - 1)) + y1 * b) * shifted
        deriv = SitePoly.zero(k, XY_PARAMS)
        for j in range(2, k + 1):
            deriv = deriv + shifted.partial(("x", j)) + shifted.partial(("y", j))
        poly = first + x1 * y1 * deriv * r
    return poly


@lru_cache(maxsize=None)
def colored_eulerian(n: int, r: int) -> SitePoly:
    """Sum over Z_r wr S_n of a^nc b^zc prod_{i in X} x_i (x variables only)."""
    counts: Counter = Counter()
    for pi in enumerate_colored_permutations(n, r):
        X, _ = excedance_sets(pi)
        st = cycle_statistics(pi, "colored")
        counts[(X, st.nc, st.zc)] += 1
    items = [
        (X, (), ParamPoly.monomial(XY_PARAMS, (nc, zc), mult))
        for (X, nc, zc), mult in counts.items()
    ]
    return SitePoly.from_subsets(n, XY_PARAMS, items)


def excedance_distribution(m: int) -> list:
    """Number of permutations of S_m with k excedances, k = 0..m-1."""
    out = [0] * max(m, 1)
    for pi in enumerate_colored_permutations(m, 1):
        X, _ = excedance_sets(pi)
        out[len(X)] += 1
    return out
