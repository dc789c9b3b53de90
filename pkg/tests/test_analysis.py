import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asepkit.analysis import (
    concentration_check,
    count_real_roots,
    diagonal_coefficients,
    empirical_tail,
    negative_association_exact,
    pairwise_negative_correlation,
    particle_count,
    pp_concentration,
    rayleigh_difference,
    rayleigh_sample,
    stability_sample,
    sturm_real_rooted,
    up_sets,
)
from asepkit.eulerian import colored_eulerian, excedance_polynomial
from asepkit.markov import (
    ChainSpec,
    Distribution,
    NonUniqueStationary,
    all_words,
    asep_line_spec,
    partition_of_distribution,
    stationary_exact,
)
from asepkit.polycore import ComplexRational, SitePoly

F = Fraction


def xs(n):
    return [SitePoly.variable(n, "x%d" % j) for j in range(1, n + 1)]


# --- Sturm -------------------------------------------------------------------


def test_sturm_examples():
    assert not sturm_real_rooted([1, 0, 1])
    assert sturm_real_rooted([1, 3, 1])
    assert sturm_real_rooted([1, 6, 6, 1])
    assert count_real_roots([1, 6, 6, 1]) == 3
    assert sturm_real_rooted([1, -2, 1])  # double root
    assert sturm_real_rooted([0, 0, 1, 1])
    with pytest.raises(ValueError):
        sturm_real_rooted([0, 0])


def discriminant_oracle(c):
    while c and c[-1] == 0:
        c = c[:-1]
    deg = len(c) - 1
    if deg <= 1:
        return True
    if deg == 2:
        p0, p1, p2 = c
        return p1 * p1 - 4 * p2 * p0 >= 0
    d, cc, b, a = c
    disc = 18 * a * b * cc * d - 4 * b**3 * d + b * b * cc * cc - 4 * a * cc**3 - 27 * a * a * d * d
    return disc >= 0


def test_sturm_against_discriminant():
    for c in product(range(-3, 4), repeat=4):
        if any(c):
            assert sturm_real_rooted(list(c)) == discriminant_oracle(list(c)), c


# --- stability search ---------------------------------------------------------


def test_stability_refutes_with_exact_witness():
    x1, x2 = xs(2)
    rep = stability_sample(x1 * x2 + SitePoly.const(2, 1), 100, 0)
    assert rep.refuted
    assert rep.witness == {"x1": ComplexRational(0, 1), "x2": ComplexRational(0, 1)}


def test_stability_finds_off_probe_zero():
    x1, x2, x3 = xs(3)
    rep = stability_sample(x1 - x2 + x3 * 0 + SitePoly.const(3, 1) * 0, 50, 2)
    assert rep.refuted
    p = x1 * x2 * x3 + SitePoly.const(3, 1)
    rep = stability_sample(p, 500, 4)
    assert rep.refuted and not p.evaluate(rep.witness)


def test_affine_polynomial_has_no_zero():
    x1, = xs(1)
    rep = stability_sample(x1 * 3 + SitePoly.const(1, 2), 2000, 1)
    assert rep.verdict == "no-counterexample" and rep.samples_run == 2000


def test_two_site_excedance_polynomial():
    p = excedance_polynomial(2, 2).subs_params({"a": 1, "b": 1})
    assert stability_sample(p, 10**4, 0).verdict == "no-counterexample"


def test_symbolic_input_rejected():
    with pytest.raises(ValueError):
        stability_sample(excedance_polynomial(1, 2), 10, 0)


def random_symmetric_spec(rng, n):
    Q = [[F(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i):
            Q[i][j] = Q[j][i] = F(rng.randint(0, 3), rng.randint(1, 2))
    b = [F(rng.randint(0, 2), rng.randint(1, 2)) for _ in range(n)]
    d = [F(rng.randint(0, 2), rng.randint(1, 2)) for _ in range(n)]
    return ChainSpec(n, Q, b, d)


def test_symmetric_chains_give_real_rooted_stable_laws():
    rng = random.Random(12)
    done = 0
    while done < 50:
        spec = random_symmetric_spec(rng, rng.randint(1, 5))
        try:
            mu = stationary_exact(spec)
        except NonUniqueStationary:
            continue
        z = partition_of_distribution(mu)
        assert sturm_real_rooted(diagonal_coefficients(z))
        assert not stability_sample(z, 300, done).refuted
        done += 1


@pytest.mark.parametrize("n,r", [(n, r) for n in range(1, 6) for r in (1, 2, 3)])
def test_x_only_excedance_diagonals_real_rooted(n, r):
    rng = random.Random(n * 10 + r)
    for _ in range(3):
        ab = {"a": F(rng.randint(1, 9), rng.randint(1, 9)), "b": F(rng.randint(1, 9), rng.randint(1, 9))}
        assert sturm_real_rooted(colored_eulerian(n, r).subs_params(ab).diagonal().univariate())


# --- Rayleigh -----------------------------------------------------------------


def test_rayleigh_examples():
    x1, x2, x3 = xs(3)
    one = SitePoly.const(3, 1)
    prod = (one + x1) * (one + x2) * (one + x3)
    assert rayleigh_difference(prod, 1, 3) == SitePoly.zero(3)
    y1, y2 = xs(2)
    assert rayleigh_difference(SitePoly.const(2, 1) + y1 + y2, 1, 2) == SitePoly.const(2, 1)
    p = SitePoly.const(2, 1) + y2 + y1 * 3 + y1 * y2
    d = rayleigh_difference(p, 1, 2)
    assert d.evaluate({"x1": 0, "x2": 0}) == 2
    assert rayleigh_sample(p, 300, 5).nonnegative
    with pytest.raises(ValueError):
        rayleigh_difference(p, 1, 1)


# --- dependence ---------------------------------------------------------------


def test_pairwise_examples():
    prod = Distribution.product([F(1, 3), F(1, 2), F(2, 5)])
    assert pairwise_negative_correlation(prod).holds
    mu = stationary_exact(asep_line_spec(2, 1, 1, 1))
    assert pairwise_negative_correlation(mu).holds
    bad = Distribution(2, {"00": F(1, 2), "11": F(1, 2)})
    rep = pairwise_negative_correlation(bad)
    assert not rep.holds and rep.witness == (1, 2)
    with pytest.raises(ValueError):
        pairwise_negative_correlation(Distribution(1, {"0": 1, "1": 1}))


def test_association_examples():
    assert negative_association_exact(Distribution.product([F(1, 3), F(1, 2), F(2, 5)])).holds
    assert negative_association_exact(stationary_exact(asep_line_spec(3, 1, 1, 1))).holds
    assert not negative_association_exact(Distribution(2, {"00": F(1, 2), "11": F(1, 2)})).holds
    with pytest.raises(ValueError):
        negative_association_exact(Distribution.product([F(1, 2)] * 6))


def test_up_set_counts():
    # number of monotone Boolean functions
    assert [len(up_sets(k)) for k in range(5)] == [2, 3, 6, 20, 168]


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 3), st.data())
def test_dependence_verdicts_are_consistent(n, data):
    ws = [data.draw(st.integers(0, 5)) for _ in range(2**n)]
    if not sum(ws):
        return
    mu = Distribution(n, dict(zip(all_words(n), ws))).normalize()
    pw = pairwise_negative_correlation(mu).holds
    na = negative_association_exact(mu).holds
    ray = rayleigh_sample(partition_of_distribution(mu), 20, 0).nonnegative
    if not pw:
        assert not na and not ray


# --- concentration -----------------------------------------------------------


def test_bound_examples():
    assert pp_concentration(3, 0) == 5
    mu = stationary_exact(asep_line_spec(4, 1, 1, 1))
    cc = concentration_check(mu, 2)
    assert cc.holds
    assert empirical_tail(Distribution.point_mass("0110"), None, F(1, 2)) == 0


def test_bound_is_upper_rounded():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 60
    for m, a in [(1, 1), (2, 3), (F(5, 2), 7), (10, 40)]:
        bound = pp_concentration(m, a)
        t = mpmath.mpf(a.numerator if isinstance(a, F) else a) ** 2
        m_ = mpmath.mpf(F(m).numerator) / F(m).denominator
        exact = 5 * mpmath.exp(-t / (16 * (a + 2 * m_)))
        b = mpmath.mpf(bound.numerator) / bound.denominator
        assert b >= exact
        assert b - exact < mpmath.mpf(10) ** -20


def test_non_lipschitz_rejected():
    mu = stationary_exact(asep_line_spec(2, 1, 1, 1))
    with pytest.raises(ValueError):
        empirical_tail(mu, lambda w: 3 * particle_count(w), 1)
    table = {w: particle_count(w) for w in all_words(2)}
    assert empirical_tail(mu, table, 0) == empirical_tail(mu, None, 0)
