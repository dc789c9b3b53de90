"""
Zero-location and negative-dependence checks.

Univariate real-rootedness is decided exactly with Sturm sequences.
Multivariate stability is only ever refuted (with an exact witness) or
reported as "no-counterexample" after sampling; nothing here proves it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .markov import Distribution, all_words
from .polycore import ComplexRational, SitePoly, parse_rational

# ---------------------------------------------------------------------------
# univariate: Sturm sequences


def _strip(p: list) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _deriv(p: list) -> list:
    return [k * c for k, c in enumerate(p)][1:]


def _rem(a: list, b: list) -> list:
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        f = a[-1] / lb
        shift = len(a) - 1 - db
        for k, c in enumerate(b):
            a[shift + k] -= f * c
        a = _strip(a)
    return a


def _div(a: list, b: list) -> list:
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    qt = [Fraction(0)] * max(len(a) - db, 1)
    while len(a) - 1 >= db and a:
        f = a[-1] / lb
        shift = len(a) - 1 - db
        qt[shift] = f
        for k, c in enumerate(b):
            a[shift + k] -= f * c
        a = _strip(a)
    return _strip(qt)


def poly_gcd(a: list, b: list) -> list:
    a, b = _strip(a), _strip(b)
    while b:
        a, b = b, _rem(a, b)
    return [c / a[-1] for c in a] if a else a


def squarefree_part(p: list) -> list:
    p = _strip([Fraction(c) for c in p])
    g = poly_gcd(p, _deriv(p))
    return _div(p, g) if len(g) > 1 else p


def sturm_sequence(p: list) -> list:
    seq = [p, _deriv(p)]
    while seq[-1]:
        r = _rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _variations(signs: list) -> int:
    signs = [s for s in signs if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def count_real_roots(p: Sequence) -> int:
    """Number of distinct real roots of p (coefficients ascending)."""
    p = _strip([Fraction(c) for c in p])
    if not p:
        raise ValueError("the zero polynomial has infinitely many roots")
    if len(p) == 1:
        return 0
    seq = sturm_sequence(p)
    at_pos = [1 if s[-1] > 0 else -1 for s in seq]
    at_neg = [(1 if s[-1] > 0 else -1) * (-1) ** (len(s) - 1) for s in seq]
    return _variations(at_neg) - _variations(at_pos)


def sturm_real_rooted(p: Sequence) -> bool:
    """True iff every complex root of p is real (p given by ascending coefficients)."""
    p = _strip([parse_rational(c) for c in p])
    if not p:
        raise ValueError("the zero polynomial has no well-defined roots")
    sf = squarefree_part(p)
    return count_real_roots(sf) == len(sf) - 1


def diagonal_coefficients(p: SitePoly) -> list:
    """Ascending coefficients of p(x, ..., x) for a numeric x-polynomial."""
    if p.has_y():
        raise ValueError("diagonal_coefficients expects an x-only polynomial")
    if not p.is_numeric():
        raise ValueError("symbolic parameters remain; substitute them first")
    return p.diagonal().univariate()


# ---------------------------------------------------------------------------
# multivariate stability by sampling


@dataclass
class StabilityReport:
    verdict: str  # "refuted" | "no-counterexample"
    witness: dict | None
    samples_run: int
    seed: int

    @property
    def refuted(self) -> bool:
        return self.verdict == "refuted"

    def to_json(self) -> dict:
        w = None if self.witness is None else {k: v.to_json() for k, v in self.witness.items()}
        return {"verdict": self.verdict, "witness": w, "samples_run": self.samples_run, "seed": self.seed}


def _integer_terms(p: SitePoly):
    """Variables, and terms as (index tuple, integer coefficient), denominators cleared."""
    if not p.is_numeric():
        raise ValueError("symbolic parameters remain; substitute them first")
    names = ["x%d" % j for j in range(1, p.n + 1)]
    if p.has_y():
        names += ["y%d" % j for j in range(1, p.n + 1)]
    coeffs = {k: c.constant_value() for k, c in p.terms.items()}
    lcm = 1
    for c in coeffs.values():
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    terms = []
    for (xe, ye), c in coeffs.items():
        exps = list(xe) + (list(ye) if p.has_y() else [])
        terms.append((tuple(exps), int(c * lcm)))
    return names, terms


def _exact_affine_root(terms, j, pts, denom):
    """
    Exact root in x_j of a multiaffine p with the other variables fixed at
    pts / denom.  Returns None when p does not depend on x_j there, the
    string "all" when p vanishes identically in x_j, else a ComplexRational.
    """
    c0 = ComplexRational(0, 0)
    c1 = ComplexRational(0, 0)
    z = [ComplexRational(Fraction(a, denom), Fraction(b, denom)) for a, b in pts]
    for exps, c in terms:
        v = ComplexRational(Fraction(c), 0)
        for k, e in enumerate(exps):
            if e and k != j:
                v = v * z[k]
        if exps[j]:
            c1 = c1 + v
        else:
            c0 = c0 + v
    if not c1:
        return "all" if not c0 else None
    return -c0 / c1


def stability_sample(p: SitePoly, num_samples: int, seed: int = 0) -> StabilityReport:
    """
    Search for a zero of p with every variable in the open upper half-plane.

    The first probe is the point with every variable equal to i.  Later
    samples draw rational points in the upper half-plane.  For multiaffine p
    one variable (cycling through them) is then freed; p is affine in it, so
    its root is explicit, and a root with positive imaginary part is an exact
    zero of p inside the region.  Other inputs are only evaluated at the
    sampled points.

    Screening runs in floating point over all samples at once; anything that
    looks like a hit (or is too close to call) is redone in exact arithmetic,
    and only exact hits are reported.
    """
    names, terms = _integer_terms(p)
    nv = len(names)
    if not terms:
        raise ValueError("the zero polynomial vanishes everywhere")
    multiaffine = all(e <= 1 for exps, _ in terms for e in exps)

    def witness(values):
        w = {names[k]: values[k] for k in range(nv)}
        if p.evaluate(w):
            raise AssertionError("witness does not evaluate to zero")
        return w

    probe = [ComplexRational(0, 1)] * nv
    if not p.evaluate({names[k]: probe[k] for k in range(nv)}):
        return StabilityReport("refuted", witness(probe), 1, seed)
    if num_samples <= 1:
        return StabilityReport("no-counterexample", None, 1, seed)

    rng = np.random.default_rng(seed)
    count = num_samples - 1
    denom = rng.integers(1, 1000, size=count)
    re = rng.integers(-5 * denom[:, None], 5 * denom[:, None] + 1, size=(count, nv))
    im = rng.integers(1, 5 * denom[:, None] + 1, size=(count, nv))
    z = (re + 1j * im) / denom[:, None]
    exps = np.array([e for e, _ in terms], dtype=np.int64)
    coef = np.array([float(c) for _, c in terms])

    def exact_point(s):
        return [(int(re[s, k]), int(im[s, k])) for k in range(nv)], int(denom[s])

    def values_at(s, pts, d):
        return [ComplexRational(Fraction(a, d), Fraction(b, d)) for a, b in pts]

    if not multiaffine:
        val = np.zeros(count, dtype=complex)
        scale = np.zeros(count)
        for t in range(len(terms)):
            mono = coef[t] * np.prod(z ** exps[t], axis=1)
            val += mono
            scale += np.abs(mono)
        for s in np.flatnonzero(np.abs(val) <= 1e-9 * scale):
            pts, d = exact_point(s)
            vals = values_at(s, pts, d)
            if not p.evaluate({names[k]: vals[k] for k in range(nv)}):
                return StabilityReport("refuted", witness(vals), int(s) + 2, seed)
        return StabilityReport("no-counterexample", None, num_samples, seed)

    used = [j for j in range(nv) if exps[:, j].any()]
    if not used:  # a nonzero constant
        return StabilityReport("no-counterexample", None, num_samples, seed)
    free = np.array(used)[(np.arange(count) + 1) % len(used)]
    hits = []
    for j in used:
        rows = np.flatnonzero(free == j)
        if not len(rows):
            continue
        zj = z[rows]
        c0 = np.zeros(len(rows), dtype=complex)
        c1 = np.zeros(len(rows), dtype=complex)
        s0 = np.zeros(len(rows))
        s1 = np.zeros(len(rows))
        for t in range(len(terms)):
            e = exps[t].copy()
            has_j = bool(e[j])
            e[j] = 0
            support = np.flatnonzero(e)
            mono = coef[t] * (np.prod(zj[:, support], axis=1) if len(support) else np.ones(len(rows)))
            if has_j:
                c1 += mono
                s1 += np.abs(mono)
            else:
                c0 += mono
                s0 += np.abs(mono)
        # root -c0/c1 lies in the upper half-plane iff Im(c0 * conj(c1)) < 0
        im_part = (c0 * np.conj(c1)).imag
        # with no x_j-free terms the root is 0, which is real
        close = (im_part < 1e-9 * s0 * s1) & (s0 > 0)
        hits.extend(int(rows[k]) for k in np.flatnonzero(close))
    for s in sorted(hits):
        j = int(free[s])
        pts, d = exact_point(s)
        root = _exact_affine_root(terms, j, pts, d)
        if root is None:
            continue
        vals = values_at(s, pts, d)
        if isinstance(root, str):
            vals[j] = ComplexRational(0, 1)
        elif root.im > 0:
            vals[j] = root
        else:
            continue
        return StabilityReport("refuted", witness(vals), s + 2, seed)
    return StabilityReport("no-counterexample", None, num_samples, seed)


# ---------------------------------------------------------------------------
# Rayleigh differences


def rayleigh_difference(p: SitePoly, i: int, j: int) -> SitePoly:
    """d_i p * d_j p - p * d_i d_j p, in the x variables."""
    if i == j:
        raise ValueError("need two distinct sites")
    pi, pj = p.partial(("x", i)), p.partial(("x", j))
    return pi * pj - p * pi.partial(("x", j))


@dataclass
class RayleighReport:
    nonnegative: bool
    witness: dict | None
    samples_run: int
    seed: int


def rayleigh_sample(p: SitePoly, num_samples: int, seed: int = 0) -> RayleighReport:
    """
    Look for a real point where some Rayleigh difference is negative.  The
    all-ones point is probed first.  A negative value certifies that a
    multiaffine p with real coefficients is not stable.
    """
    if not p.is_numeric():
        raise ValueError("symbolic parameters remain; substitute them first")
    n = p.n
    diffs = {(i, j): rayleigh_difference(p, i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)}
    rng = np.random.default_rng(seed)
    for s in range(num_samples):
        if s == 0:
            pt = {"x%d" % k: Fraction(1) for k in range(1, n + 1)}
        else:
            den = int(rng.integers(1, 50))
            pt = {"x%d" % k: Fraction(int(rng.integers(-10 * den, 10 * den + 1)), den) for k in range(1, n + 1)}
        for (i, j), d in diffs.items():
            v = d.evaluate(pt).re
            if v < 0:
                w = dict(pt)
                w["pair"] = (i, j)
                return RayleighReport(False, w, s + 1, seed)
    return RayleighReport(True, None, num_samples, seed)


# ---------------------------------------------------------------------------
# negative dependence


@dataclass
class DependenceReport:
    holds: bool
    witness: object = None
    checked: int = 0


def _require_normalized(mu: Distribution):
    if not mu.normalized:
        raise ValueError("distribution is not normalised")


def pairwise_negative_correlation(mu: Distribution) -> DependenceReport:
    """mu(eta_i = eta_j = 1) <= mu(eta_i = 1) mu(eta_j = 1) for all i < j, exactly."""
    _require_normalized(mu)
    n = mu.n
    marg = [mu.marginal(i) for i in range(1, n + 1)]
    checked = 0
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            both = sum((p for w, p in mu.weights.items() if w[i - 1] == "1" and w[j - 1] == "1"), Fraction(0))
            checked += 1
            if both > marg[i - 1] * marg[j - 1]:
                return DependenceReport(False, (i, j), checked)
    return DependenceReport(True, None, checked)


def up_sets(k: int) -> list:
    """
    All up-sets of the Boolean lattice on k coordinates, as bitmasks over the
    2^k points (point index = coordinate bitmask).
    """
    if k == 0:
        return [0, 1]
    lower = up_sets(k - 1)
    half = 1 << (k - 1)  # points with the last coordinate set start here
    out = []
    for u0 in lower:
        for u1 in lower:
            if u0 & ~u1 == 0:  # u0 subset of u1
                out.append(u0 | (u1 << half))
    return out


def negative_association_exact(mu: Distribution, cap: int = 5) -> DependenceReport:
    """
    Check Cov(1_U, 1_V) <= 0 for every pair of increasing events depending on
    complementary coordinate blocks A and B.  Increasing functions on disjoint
    blocks extend to complementary blocks, and every increasing function is a
    constant plus a nonnegative combination of up-set indicators, so this
    decides negative association.
    """
    _require_normalized(mu)
    n = mu.n
    if n > cap:
        raise ValueError("n=%d exceeds the cap %d" % (n, cap))
    probs = [(w, p) for w, p in mu.weights.items() if p]
    cache: dict = {}
    checked = 0
    for size in range(1, n // 2 + 1):
        for A in itertools.combinations(range(n), size):
            B = tuple(k for k in range(n) if k not in A)
            if not B or (2 * size == n and A > B):
                continue
            ups_a = cache.setdefault(len(A), up_sets(len(A)))
            ups_b = cache.setdefault(len(B), up_sets(len(B)))
            # joint table of (point in A, point in B)
            joint: dict = {}
            for w, p in probs:
                pa = sum(1 << k for k, site in enumerate(A) if w[site] == "1")
                pb = sum(1 << k for k, site in enumerate(B) if w[site] == "1")
                joint[(pa, pb)] = joint.get((pa, pb), 0) + p
            marg_a: dict = {}
            marg_b: dict = {}
            for (pa, pb), p in joint.items():
                marg_a[pa] = marg_a.get(pa, 0) + p
                marg_b[pb] = marg_b.get(pb, 0) + p
            pu = {U: sum((p for pa, p in marg_a.items() if U >> pa & 1), Fraction(0)) for U in ups_a}
            pv = {V: sum((p for pb, p in marg_b.items() if V >> pb & 1), Fraction(0)) for V in ups_b}
            for U in ups_a:
                if pu[U] in (0, 1):
                    continue
                inside = [(pb, p) for (pa, pb), p in joint.items() if U >> pa & 1]
                for V in ups_b:
                    if pv[V] in (0, 1):
                        continue
                    checked += 1
                    both = sum((p for pb, p in inside if V >> pb & 1), Fraction(0))
                    if both > pu[U] * pv[V]:
                        return DependenceReport(
                            False,
                            {"A": [k + 1 for k in A], "B": [k + 1 for k in B], "U": U, "V": V},
                            checked,
                        )
    return DependenceReport(True, None, checked)


# ---------------------------------------------------------------------------
# concentration


def exp_neg_upper(t: Fraction, tol: Fraction = Fraction(1, 2**80)) -> Fraction:
    """
    A rational upper bound on exp(-t) for t >= 0.

    Partial sums S_K(t) of the exponential series bound exp(t) from below,
    so 1/S_K(t) bounds exp(-t) from above; terms are added until the next
    one is below ``tol`` times the sum.
    """
    t = Fraction(t)
    if t < 0:
        raise ValueError("t must be nonnegative")
    total = term = Fraction(1)
    k = 0
    while True:
        k += 1
        term = term * t / k
        total += term
        if term <= tol * total and k > t:
            break
    # round the reciprocal upward to keep denominators small
    bound = 1 / total
    den = 2**96
    return Fraction(math.ceil(bound * den), den)


def pp_concentration(m, a) -> Fraction:
    """Upper-rounded value of 5 exp(-a^2 / (16 (a + 2m)))."""
    m, a = parse_rational(m), parse_rational(a)
    if m < 0 or a < 0:
        raise ValueError("need m >= 0 and a >= 0")
    if a == 0:
        return Fraction(5)
    return 5 * exp_neg_upper(a * a / (16 * (a + 2 * m)))


def particle_count(word: str) -> int:
    return word.count("1")


def check_lipschitz(f: Callable[[str], object], n: int) -> bool:
    """|f(eta) - f(eta')| <= 1 across every Hamming edge."""
    for w in all_words(n):
        fw = parse_rational(f(w))
        for k in range(n):
            flip = w[:k] + ("0" if w[k] == "1" else "1") + w[k + 1 :]
            if abs(fw - parse_rational(f(flip))) > 1:
                return False
    return True


def _as_function(f, n):
    if f is None:
        return particle_count
    if isinstance(f, Mapping):
        return lambda w: f[w]
    return f


def empirical_tail(mu: Distribution, f=None, a=0) -> Fraction:
    """mu(|f - E f| > a), exactly.  ``f`` is a callable, a word table, or None (particle count)."""
    f = _as_function(f, mu.n)
    if not check_lipschitz(f, mu.n):
        raise ValueError("f is not Lipschitz-1 for the Hamming distance")
    a = parse_rational(a)
    mean = sum((p * parse_rational(f(w)) for w, p in mu.weights.items()), Fraction(0)) / mu.total()
    tail = sum((p for w, p in mu.weights.items() if abs(parse_rational(f(w)) - mean) > a), Fraction(0))
    return tail / mu.total()


@dataclass
class ConcentrationCheck:
    mean_particles: Fraction
    deviation: Fraction
    tail: Fraction
    bound: Fraction

    @property
    def holds(self) -> bool:
        return self.tail <= self.bound


def concentration_check(mu: Distribution, a, f=None) -> ConcentrationCheck:
    m = mu.expectation(particle_count) / mu.total()
    a = parse_rational(a)
    return ConcentrationCheck(m, a, empirical_tail(mu, f, a), pp_concentration(m, a))
