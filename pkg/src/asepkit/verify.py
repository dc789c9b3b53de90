"""
Named exact-identity suites.  Each suite returns a list of ``Check``
records; a suite passes when every record does.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb

from . import analysis
from .ansatz import all_reduction_values, ansatz_partition, bracket
from .combinatorics import (
    count_colored_permutations,
    cycle_statistics,
    enumerate_colored_permutations,
    excedance_word,
)
from .eulerian import (
    TREE_PARAMS,
    XY_PARAMS,
    asep_partition_perm,
    bracket_enum,
    excedance_distribution,
    excedance_polynomial,
    excedance_polynomial_recursive,
    specialize,
    tree_parameters,
    tree_partition,
)
from .markov import asep_line_spec, partition_of_distribution, stationary_exact
from .polycore import ParamPoly, SitePoly, format_rational, polys_proportional
from .trees import (
    parent_map_by_formula,
    permutation_from_tree,
    permutation_yin_yang,
    tree_from_colored_permutation,
    tree_from_permutation,
    tree_statistics,
    validate_tree,
)


@dataclass
class Check:
    name: str
    params: dict
    ok: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "params": self.params, "ok": self.ok, "detail": self.detail}


def _fmt(d: dict) -> dict:
    return {k: format_rational(v) if isinstance(v, Fraction) else v for k, v in d.items()}


def sample_rationals(rng: random.Random, k: int, top: int = 9) -> list:
    """k positive rationals p/q with 1 <= p, q <= top."""
    return [Fraction(rng.randint(1, top), rng.randint(1, top)) for _ in range(k)]


def parameter_triples(count: int, seed: int) -> list:
    rng = random.Random(seed)
    return [tuple(sample_rationals(rng, 3)) for _ in range(count)]


# ---------------------------------------------------------------------------
# partition functions


def oracle_triangle(n: int, triples) -> list:
    """Solver, word bracket and permutation sum agree up to scale (plain case)."""
    out = []
    perm = asep_partition_perm(n, 1)
    ans = ansatz_partition(n)
    for alpha, beta, q in triples:
        z = partition_of_distribution(stationary_exact(asep_line_spec(n, q, alpha, beta)))
        a = ans.subs_params({"alpha": alpha, "beta": beta, "q": q, "xi": 1})
        p = specialize(perm, alpha, beta, q)
        ok = polys_proportional(z, a, p)
        out.append(Check("solver~bracket~permutations", _fmt({"n": n, "alpha": alpha, "beta": beta, "q": q}), ok))
    return out


def colored_oracle(n: int, r: int, triples) -> list:
    """
    Colored permutation sum and decorated-tree sum against the solver, plus
    the point alpha = r, beta = r/(r-1) where only q^yy survives.
    """
    out = []
    perm = asep_partition_perm(n, r)
    trees = tree_partition(n, r)
    for alpha, beta, q in triples:
        z = partition_of_distribution(stationary_exact(asep_line_spec(n, q, alpha, beta)))
        p = specialize(perm, alpha, beta, q)
        t = trees.subs_params({**tree_parameters(alpha, beta, r), "q": q})
        params = _fmt({"n": n, "r": r, "alpha": alpha, "beta": beta, "q": q})
        out.append(Check("solver~colored-permutations~decorated-trees", params, polys_proportional(z, p, t)))
        alpha, beta = Fraction(r), Fraction(r, r - 1)
        z = partition_of_distribution(stationary_exact(asep_line_spec(n, q, alpha, beta)))
        plain = yin_yang_sum(n, r).subs_params({"q": q})
        params = _fmt({"n": n, "r": r, "alpha": alpha, "beta": beta, "q": q})
        out.append(Check("solver~q^yy-only", params, polys_proportional(z, plain)))
    return out


def yin_yang_sum(n: int, r: int) -> SitePoly:
    """Sum over Z_r wr S_n of q^yy x^X (no cycle weights)."""
    terms: dict = {}
    zero = (0,) * n
    for pi in enumerate_colored_permutations(n, r):
        key = (tuple(int(ch) for ch in excedance_word(pi)), zero)
        mono = ParamPoly.monomial(("q",), (permutation_yin_yang(pi),), 1)
        terms[key] = terms[key] + mono if key in terms else mono
    return SitePoly(n, ("q",), terms)


# ---------------------------------------------------------------------------
# word identities


def _words(max_len: int):
    for m in range(max_len + 1):
        for bits in product("01", repeat=m):
            yield "".join(bits)


def tree_recursion(max_len: int, r: int = 1) -> list:
    """
    Local rules for the tree-side bracket:
        [u10v] = q[u01v] + s([u1v] + [u0v]),  [0v] = a[v],  [u1] = b t [u],
    with s = t = 1 for r = 1 and s = r, t = r - 1 otherwise.
    """
    a = ParamPoly.var("a", TREE_PARAMS)
    b = ParamPoly.var("b", TREE_PARAMS)
    q = ParamPoly.var("q", TREE_PARAMS)
    s = 1 if r == 1 else r
    t = 1 if r == 1 else r - 1
    out = []
    for w in _words(max_len):
        if w.startswith("0"):
            ok = bracket_enum(w, r) == a * bracket_enum(w[1:], r)
            out.append(Check("leading-zero", {"word": w, "r": r}, ok))
        if w.endswith("1"):
            ok = bracket_enum(w, r) == b * t * bracket_enum(w[:-1], r)
            out.append(Check("trailing-one", {"word": w, "r": r}, ok))
        for k in range(len(w) - 1):
            if w[k : k + 2] == "10":
                u, v = w[:k], w[k + 2 :]
                rhs = q * bracket_enum(u + "01" + v, r) + (bracket_enum(u + "1" + v, r) + bracket_enum(u + "0" + v, r)) * s
                out.append(Check("bulk-swap", {"word": w, "position": k, "r": r}, bracket_enum(w, r) == rhs))
    return out


def confluence(max_len: int) -> list:
    out = []
    for w in _words(max_len):
        vals = all_reduction_values(w)
        ok = len(vals) == 1 and next(iter(vals)) == bracket(w)
        out.append(Check("confluence", {"word": w}, ok, "" if ok else "%d distinct values" % len(vals)))
    return out


# ---------------------------------------------------------------------------
# bijections


def bijection(n: int, r: int = 1) -> list:
    """Round trip, validity and injectivity of the tree maps, with image size."""
    seen = set()
    bad = []
    total = 0
    if r == 1:
        perms = enumerate_colored_permutations(n + 1, 1)
        build = tree_from_permutation
        expected = count_colored_permutations(n + 1, 1)
    else:
        perms = enumerate_colored_permutations(n, r)
        build = tree_from_colored_permutation
        expected = count_colored_permutations(n, r)
    for pi in perms:
        total += 1
        t = build(pi)
        if not validate_tree(t).ok or permutation_from_tree(t) != pi:
            bad.append(pi)
        seen.add(t.key())
    params = {"n": n, "r": r, "expected": expected}
    return [
        Check("round-trip", params, not bad, "" if not bad else "first failure %r" % (bad[0],)),
        Check("image-size", params, len(seen) == total == expected, "%d distinct trees" % len(seen)),
    ]


def statistics_transport(n: int, r: int = 1) -> list:
    """
    Tree statistics equal permutation statistics:
    plain  (X, c0, c1, yy) = (X, c, c', yy),
    colored (X, c0, c1, yy) = (X, zc, nc, yy).
    """
    bad = []
    if r == 1:
        for pi in enumerate_colored_permutations(n + 1, 1):
            st = tree_statistics(tree_from_permutation(pi))
            cs = cycle_statistics(pi, "plain")
            want = (excedance_word(pi, n), cs.c, cs.c_prime, permutation_yin_yang(pi))
            if (st.excedances, st.root_children, st.top_children, st.yin_yang) != want:
                bad.append(pi)
    else:
        for pi in enumerate_colored_permutations(n, r):
            st = tree_statistics(tree_from_colored_permutation(pi))
            cs = cycle_statistics(pi, "colored")
            want = (excedance_word(pi), cs.zc, cs.nc, permutation_yin_yang(pi))
            if (st.excedances, st.root_children, st.top_children, st.yin_yang) != want:
                bad.append(pi)
    return [Check("statistics", {"n": n, "r": r}, not bad, "" if not bad else "first failure %r" % (bad[0],))]


def parent_formula(n: int, r: int = 1) -> list:
    bad = []
    if r == 1:
        pairs = ((pi, tree_from_permutation(pi)) for pi in enumerate_colored_permutations(n + 1, 1))
    else:
        pairs = ((pi, tree_from_colored_permutation(pi)) for pi in enumerate_colored_permutations(n, r))
    for pi, t in pairs:
        formula = parent_map_by_formula(pi)
        if any(formula[v] != p for v, p in t.parent.items() if v in formula):
            bad.append(pi)
    return [Check("parent-formula", {"n": n, "r": r}, not bad, "" if not bad else "first failure %r" % (bad[0],))]


# ---------------------------------------------------------------------------
# excedance polynomials and univariate diagonals


def first_excedance_polynomial(r: int) -> SitePoly:
    """a (r-1) x1 + b y1, built symbolically."""
    a = ParamPoly.var("a", XY_PARAMS)
    b = ParamPoly.var("b", XY_PARAMS)
    return SitePoly.variable(1, "x1", XY_PARAMS) * (a * (r - 1)) + SitePoly.variable(1, "y1", XY_PARAMS) * b


def f_recursion(n: int, r: int) -> list:
    out = [Check("direct=recursive", {"n": n, "r": r}, excedance_polynomial(n, r) == excedance_polynomial_recursive(n, r))]
    if n == 1:
        want = first_excedance_polynomial(r)
        out.append(Check("one-site-form", {"r": r}, excedance_polynomial(1, r) == want == excedance_polynomial_recursive(1, r)))
    return out


def narayana_coefficients(m: int) -> list:
    """Ascending coefficients of sum_k (1/m) C(m,k) C(m,k-1) x^k, k = 1..m."""
    return [Fraction(0)] + [Fraction(comb(m, k) * comb(m, k - 1), m) for k in range(1, m + 1)]


def _primitive(coeffs: list) -> list:
    lo = next(c for c in coeffs if c)
    return [c / lo for c in coeffs]


def narayana(n: int) -> list:
    """At q = 0, alpha = beta = 1 the diagonal is N_{n+1}(x) / x up to scale."""
    z = partition_of_distribution(stationary_exact(asep_line_spec(n, 0, 1, 1)))
    diag = analysis.diagonal_coefficients(z)
    want = narayana_coefficients(n + 1)[1:]
    ok = _primitive(diag) == _primitive(want)
    rooted = analysis.sturm_real_rooted(diag)
    shown = " + ".join("%s x^%d" % (format_rational(c), k) for k, c in enumerate(_primitive(diag)))
    return [
        Check("diagonal=narayana", {"n": n}, ok, shown),
        Check("real-rooted", {"n": n}, rooted),
    ]


def eulerian_diagonal(n: int) -> list:
    """At q = 1 and A = B = 1 the diagonal counts S_{n+1} by excedances."""
    p = specialize(asep_partition_perm(n, 1), 1, 1, 1)
    diag = p.diagonal().univariate()
    want = excedance_distribution(n + 1)
    ok = [int(c) for c in diag] == want
    return [Check("diagonal=excedance-counts", {"n": n}, ok, str([int(c) for c in diag]))]


# ---------------------------------------------------------------------------
# zeros and dependence


def dependence(n: int, samples: int, seed: int, na_cap: int = 4) -> list:
    """Stationary law at q = alpha = beta = 1."""
    mu = stationary_exact(asep_line_spec(n, 1, 1, 1))
    z = partition_of_distribution(mu)
    out = [
        Check("diagonal-real-rooted", {"n": n}, analysis.sturm_real_rooted(analysis.diagonal_coefficients(z))),
    ]
    rep = analysis.stability_sample(z, samples, seed)
    out.append(Check("no-upper-half-plane-zero", {"n": n, "samples": samples, "seed": seed}, not rep.refuted, rep.verdict))
    pw = analysis.pairwise_negative_correlation(mu)
    out.append(Check("pairwise-negative-correlation", {"n": n}, pw.holds, "" if pw.holds else str(pw.witness)))
    if n <= na_cap:
        na = analysis.negative_association_exact(mu)
        out.append(Check("negative-association", {"n": n}, na.holds, "" if na.holds else str(na.witness)))
    for a in range(0, n + 1):
        cc = analysis.concentration_check(mu, a)
        out.append(Check("concentration", {"n": n, "a": a}, cc.holds, "tail %s bound %.6g" % (format_rational(cc.tail), float(cc.bound))))
    return out


def excedance_stability(n: int, r: int, ab_pairs, samples: int, seed: int) -> list:
    out = []
    for a, b in ab_pairs:
        p = excedance_polynomial(n, r).subs_params({"a": a, "b": b})
        params = _fmt({"n": n, "r": r, "a": a, "b": b})
        rep = analysis.stability_sample(p, samples, seed)
        out.append(Check("no-upper-half-plane-zero", params, not rep.refuted, rep.verdict))
        x_only = colored_diagonal(n, r, a, b)
        out.append(Check("diagonal-real-rooted", params, analysis.sturm_real_rooted(x_only)))
    return out


def colored_diagonal(n: int, r: int, a, b) -> list:
    """Diagonal of the x-only excedance polynomial at numeric a, b."""
    from .eulerian import colored_eulerian

    return colored_eulerian(n, r).subs_params({"a": a, "b": b}).diagonal().univariate()


# ---------------------------------------------------------------------------


SUITES = {
    "oracle-triangle": "solver, word bracket and permutation sum agree (plain case)",
    "colored-oracle": "colored permutations and decorated trees agree with the solver",
    "tree-recursion": "local rules for the tree-side bracket",
    "confluence": "word bracket is independent of the reduction order",
    "bijection": "tree maps are bijections onto valid trees",
    "statistics": "tree statistics match permutation statistics",
    "parent-formula": "orbit formula reproduces tree parents",
    "f-recursion": "excedance polynomial: direct sum equals insertion recursion",
    "narayana": "q = 0 diagonal is a Narayana polynomial",
    "eulerian": "q = 1 diagonal counts permutations by excedances",
    "dependence": "zeros, negative dependence and concentration at q = 1",
}


def run_suite(name: str, n: int, r: int = 1, seed: int = 0, samples: int = 1000, count: int = 5) -> list:
    if name not in SUITES:
        raise KeyError("unknown suite %r (known: %s)" % (name, ", ".join(sorted(SUITES))))
    if name == "oracle-triangle":
        return oracle_triangle(n, parameter_triples(count, seed))
    if name == "colored-oracle":
        return colored_oracle(n, max(r, 2), parameter_triples(count, seed))
    if name == "tree-recursion":
        return tree_recursion(n, r)
    if name == "confluence":
        return confluence(n)
    if name == "bijection":
        return bijection(n, r)
    if name == "statistics":
        return statistics_transport(n, r)
    if name == "parent-formula":
        return parent_formula(n, r)
    if name == "f-recursion":
        return f_recursion(n, r)
    if name == "narayana":
        return narayana(n)
    if name == "eulerian":
        return eulerian_diagonal(n)
    return dependence(n, samples, seed)
