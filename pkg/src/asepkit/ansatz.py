"""
The word bracket <w> for the open boundary exclusion process (no
entry on the right, no exit on the left), and the partition function it
induces.

Rules, for words u, v over {0, 1}:

    <>      = 1
    <0v>    = beta*xi  <v>
    <u1>    = alpha*xi <u>
    <u10v>  = q <u01v> + alpha*beta*xi (<u1v> + <u0v>)
"""

from __future__ import annotations

from functools import lru_cache

from .polycore import ParamPoly, SitePoly

PARAMS = ("alpha", "beta", "q", "xi")

_ONE = ParamPoly.const(1, PARAMS)
_ALPHA = ParamPoly.var("alpha", PARAMS)
_BETA = ParamPoly.var("beta", PARAMS)
_Q = ParamPoly.var("q", PARAMS)
_XI = ParamPoly.var("xi", PARAMS)
_LEFT = _BETA * _XI
_RIGHT = _ALPHA * _XI
_BULK = _ALPHA * _BETA * _XI


def _check(word: str) -> str:
    if any(ch not in "01" for ch in word):
        raise ValueError("occupancy words are strings over 0/1, got %r" % word)
    return word


def redexes(word: str) -> list:
    """
    Every single rewriting step available on ``word``.

    Each step is ``(rule, position, [(coefficient, subword), ...])`` where
    the bracket of ``word`` equals the coefficient-weighted sum of brackets
    of the subwords.
    """
    out = []
    if word.startswith("0"):
        out.append(("left", 0, [(_LEFT, word[1:])]))
    if word.endswith("1"):
        out.append(("right", len(word) - 1, [(_RIGHT, word[:-1])]))
    for k in range(len(word) - 1):
        if word[k : k + 2] == "10":
            u, v = word[:k], word[k + 2 :]
            out.append(
                ("bulk", k, [(_Q, u + "01" + v), (_BULK, u + "1" + v), (_BULK, u + "0" + v)])
            )
    return out


def inversions(word: str) -> int:
    """Pairs i < j with w_i = 1, w_j = 0."""
    count = ones = 0
    for ch in word:
        if ch == "1":
            ones += 1
        else:
            count += ones
    return count


def termination_measure(word: str) -> tuple:
    """(length, inversions); every rewriting step strictly lowers it."""
    return (len(word), inversions(word))


@lru_cache(maxsize=None)
def _bracket(word: str) -> ParamPoly:
    if not word:
        return _ONE
    if word[0] == "0":
        return _LEFT * _bracket(word[1:])
    if word[-1] == "1":
        return _RIGHT * _bracket(word[:-1])
    k = word.index("10")
    u, v = word[:k], word[k + 2 :]
    return _Q * _bracket(u + "01" + v) + _BULK * (_bracket(u + "1" + v) + _bracket(u + "0" + v))


def bracket(word: str) -> ParamPoly:
    """
    <word> as a polynomial in alpha, beta, q, xi.

    Reduction strategy: strip a leading 0, else a trailing 1, else rewrite
    the leftmost "10".  Results are cached per word.
    """
    return _bracket(_check(word))


def bracket_value(word: str, alpha, beta, q, xi=1):
    """<word> at rational parameter values."""
    return bracket(word).evaluate({"alpha": alpha, "beta": beta, "q": q, "xi": xi})


@lru_cache(maxsize=None)
def _all_values(word: str) -> frozenset:
    if not word:
        return frozenset([_ONE])
    results = set()
    for _, _, parts in redexes(word):
        partial = {ParamPoly.const(0, PARAMS)}
        for coeff, sub in parts:
            partial = {acc + coeff * val for acc in partial for val in _all_values(sub)}
        results |= partial
    return frozenset(results)


def all_reduction_values(word: str) -> frozenset:
    """
    The set of values reachable under every reduction strategy.

    A step may fire any applicable rule at any position, and each subword is
    again reduced in every possible way; confluence means the set is a
    singleton.
    """
    return _all_values(_check(word))


def ansatz_partition(n: int) -> SitePoly:
    """Sum over words eta of length n of <eta> x^eta."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    terms = {}
    zero = (0,) * n
    for k in range(2**n):
        word = format(k, "0%db" % n) if n else ""
        xe = tuple(int(ch) for ch in word)
        terms[(xe, zero)] = bracket(word)
    return SitePoly(n, PARAMS, terms)


def clear_cache() -> None:
    _bracket.cache_clear()
    _all_values.cache_clear()
