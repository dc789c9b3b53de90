import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asepkit.markov import (
    ChainSpec,
    Distribution,
    NonUniqueStationary,
    all_words,
    asep_line_spec,
    build_generator,
    gillespie,
    partition_of_distribution,
    solve_sparse,
    stationarity_residual,
    stationary_exact,
    total_variation,
)
from asepkit.polycore import SitePoly

F = Fraction


def test_line_spec_examples():
    s = asep_line_spec(3, 0, 1, 1)
    assert [list(r) for r in s.Q] == [[0, 1, 0], [0, 0, 1], [0, 0, 0]]
    assert list(s.b) == [1, 0, 0] and list(s.d) == [0, 0, 1]
    s = asep_line_spec(1, 1, 1, 2)
    assert list(s.b) == [1] and list(s.d) == [2]
    s = asep_line_spec(2, F(1, 2), 1, 1)
    assert s.Q[0][1] == 1 and s.Q[1][0] == F(1, 2)


def test_single_site_with_both_ends():
    s = asep_line_spec(1, 1, 1, 2, gamma=3, delta=5)
    assert list(s.b) == [6] and list(s.d) == [5]


def test_generator_examples():
    g = build_generator(ChainSpec(1, [[0]], [F(2)], [F(3)]))
    assert g.dense() == [[-2, 2], [3, -3]]
    g = build_generator(ChainSpec(2, [[0, 1], [0, 0]], [0, 0], [0, 0]))
    moves = [(a, b) for a, row in enumerate(g.rows) for b, v in row.items() if a != b and v]
    assert moves == [(2, 1)]  # 10 -> 01


def random_spec(rng, n, symmetric=False):
    Q = [[F(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < 0.6:
                Q[i][j] = F(rng.randint(0, 4), rng.randint(1, 3))
    if symmetric:
        for i in range(n):
            for j in range(i):
                Q[i][j] = Q[j][i]
    b = [F(rng.randint(0, 3), rng.randint(1, 2)) for _ in range(n)]
    d = [F(rng.randint(0, 3), rng.randint(1, 2)) for _ in range(n)]
    return ChainSpec(n, Q, b, d)


def test_rows_sum_to_zero():
    rng = random.Random(3)
    for _ in range(20):
        g = build_generator(random_spec(rng, rng.randint(1, 4)))
        assert all(sum(row.values()) == 0 for row in g.rows)


def test_stationary_examples():
    mu = stationary_exact(asep_line_spec(1, 1, 1, 2))
    assert mu["1"] == F(1, 3) and mu["0"] == F(2, 3)
    mu = stationary_exact(asep_line_spec(2, 1, 1, 1))
    assert [mu[w] * 6 for w in ("00", "01", "10", "11")] == [1, 1, 3, 1]


def test_symmetric_pure_jump_is_uniform_on_its_class():
    Q = [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
    mu = stationary_exact(ChainSpec(3, Q, [0] * 3, [0] * 3), initial="110")
    assert mu.support() == ["011", "101", "110"]
    assert all(mu[w] == F(1, 3) for w in mu.support())
    with pytest.raises(NonUniqueStationary):
        stationary_exact(ChainSpec(3, Q, [0] * 3, [0] * 3))


def test_partition_examples():
    p = partition_of_distribution(Distribution.point_mass("111"))
    assert p == SitePoly.variable(3, "x1") * SitePoly.variable(3, "x2") * SitePoly.variable(3, "x3")
    mu = stationary_exact(asep_line_spec(1, 1, 1, 2))
    assert partition_of_distribution(mu) == SitePoly.const(1, F(2, 3)) + SitePoly.variable(1, "x1") * F(1, 3)
    ps = [F(1, 3), F(1, 2), F(3, 4)]
    prod = SitePoly.const(3, 1)
    for i, p_ in enumerate(ps, 1):
        prod = prod * (SitePoly.const(3, 1 - p_) + SitePoly.variable(3, "x%d" % i) * p_)
    assert partition_of_distribution(Distribution.product(ps)) == prod


def test_total_variation_examples():
    d = Distribution(1, {"0": F(1, 2), "1": F(1, 2)})
    assert total_variation(d, d) == 0
    assert total_variation(Distribution.point_mass("01"), Distribution.point_mass("10")) == 1
    assert total_variation(d, Distribution(1, {"0": F(1, 3), "1": F(2, 3)})) == F(1, 6)


def test_csv_round_trip():
    mu = stationary_exact(asep_line_spec(3, F(1, 2), 2, 3))
    assert Distribution.from_csv(mu.to_csv()).weights == mu.weights
    assert mu.to_csv().splitlines()[0] == "state,probability"


def test_solver_small_system():
    rows = [{0: F(2), 1: F(1)}, {0: F(1), 1: F(3)}]
    assert solve_sparse(rows, [F(3), F(5)], 2) == [F(4, 5), F(7, 5)]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 5))
def test_solver_output_is_stationary(seed, n):
    rng = random.Random(seed)
    spec = random_spec(rng, n)
    try:
        mu = stationary_exact(spec)
    except NonUniqueStationary:
        return
    assert mu.normalized
    assert not any(stationarity_residual(build_generator(spec), mu))


def test_simulation_zero_rates():
    spec = ChainSpec(2, [[0, 0], [0, 0]], [0, 0], [0, 0])
    res = gillespie(spec, 1, 50, 1, seed=1, initial="10")
    assert res.distribution["10"] == 1 and res.absorbing_state == "10"


def test_simulation_two_state():
    spec = asep_line_spec(1, 1, F(1, 2), F(1, 2))
    res = gillespie(spec, 10, 20000, 1, seed=7)
    exact = stationary_exact(spec)
    assert total_variation(res.distribution, exact) < F(2, 100)


def test_simulation_is_reproducible():
    spec = asep_line_spec(3, 1, 1, 1)
    a = gillespie(spec, 5, 2000, F(1, 2), seed=11)
    b = gillespie(spec, 5, 2000, F(1, 2), seed=11)
    assert a.distribution.weights == b.distribution.weights
