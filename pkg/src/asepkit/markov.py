"""
Exclusion processes on n sites as continuous-time Markov chains on {0,1}^n.

Transitions: a particle jumps i -> j at rate Q[i][j] when i is occupied and
j empty; a particle is born at i at rate b[i] when i is empty; it dies at
rate d[i] when i is occupied.

States are occupancy words such as "0110" (leftmost letter = site 1).
The state index of a word is its value in binary, so index order is
lexicographic word order.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import networkx as nx
import numpy as np

from .polycore import SitePoly, format_rational, parse_rational

log = logging.getLogger(__name__)

DEFAULT_CAP = 12


class ChainError(ValueError):
    pass


class NonUniqueStationary(ChainError):
    def __init__(self, classes):
        self.classes = classes
        desc = "; ".join("{" + ", ".join(c) + "}" for c in classes)
        super().__init__("%d closed classes, stationary law is not unique: %s" % (len(classes), desc))


class SingularSystem(ChainError):
    pass


def word_of(index: int, n: int) -> str:
    return format(index, "0%db" % n) if n else ""


def index_of(word: str) -> int:
    return int(word, 2) if word else 0


def all_words(n: int) -> list:
    return [word_of(k, n) for k in range(2**n)]


# ---------------------------------------------------------------------------
# chain specification


@dataclass(frozen=True)
class ChainSpec:
    n: int
    Q: tuple
    b: tuple
    d: tuple

    def __post_init__(self):
        n = self.n
        Q = tuple(tuple(parse_rational(x) for x in row) for row in self.Q)
        b = tuple(parse_rational(x) for x in self.b)
        d = tuple(parse_rational(x) for x in self.d)
        if len(Q) != n or any(len(row) != n for row in Q) or len(b) != n or len(d) != n:
            raise ChainError("rate arrays do not match n=%d" % n)
        for i in range(n):
            if Q[i][i] != 0:
                raise ChainError("Q must have zero diagonal")
        if any(x < 0 for row in Q for x in row) or any(x < 0 for x in b + d):
            raise ChainError("negative rate")
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def is_symmetric(self) -> bool:
        return all(self.Q[i][j] == self.Q[j][i] for i in range(self.n) for j in range(self.n))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "Q": [[format_rational(x) for x in row] for row in self.Q],
            "b": [format_rational(x) for x in self.b],
            "d": [format_rational(x) for x in self.d],
        }

    @classmethod
    def from_json(cls, obj) -> "ChainSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(int(obj["n"]), obj["Q"], obj["b"], obj["d"])


def asep_line_spec(n: int, q, alpha, beta, gamma=0, delta=0) -> ChainSpec:
    """
    The exclusion process on a line: rate 1 to the right, q to the left;
    entry at site 1 (alpha) and n (delta), exit at site 1 (gamma) and n (beta).
    With one site both ends coincide and the rates add.
    """
    q, alpha, beta, gamma, delta = (parse_rational(x) for x in (q, alpha, beta, gamma, delta))
    if n < 1:
        raise ChainError("need at least one site")
    if min(q, alpha, beta, gamma, delta) < 0:
        raise ChainError("negative rate")
    Q = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n - 1):
        Q[i][i + 1] = Fraction(1)
        Q[i + 1][i] = q
    b = [Fraction(0)] * n
    d = [Fraction(0)] * n
    b[0] += alpha
    d[0] += gamma
    b[n - 1] += delta
    d[n - 1] += beta
    return ChainSpec(n, Q, b, d)


# ---------------------------------------------------------------------------
# generator


@dataclass
class Generator:
    """Sparse generator: ``rows[k]`` maps target index -> rate, diagonal included."""

    n: int
    rows: list

    @property
    def size(self) -> int:
        return len(self.rows)

    def dense(self) -> list:
        m = self.size
        out = [[Fraction(0)] * m for _ in range(m)]
        for k, row in enumerate(self.rows):
            for j, v in row.items():
                out[k][j] = v
        return out

    def digraph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.size))
        for k, row in enumerate(self.rows):
            for j, v in row.items():
                if j != k and v > 0:
                    g.add_edge(k, j)
        return g


def build_generator(spec: ChainSpec, cap: int = DEFAULT_CAP) -> Generator:
    n = spec.n
    if n > cap:
        raise ChainError("n=%d exceeds the state cap %d" % (n, cap))
    bit = [1 << (n - 1 - i) for i in range(n)]  # site i+1 -> bit mask
    rows = []
    for k in range(2**n):
        row: dict = {}
        for i in range(n):
            occ = k & bit[i]
            if occ:
                if spec.d[i]:
                    t = k ^ bit[i]
                    row[t] = row.get(t, 0) + spec.d[i]
                for j in range(n):
                    if spec.Q[i][j] and not k & bit[j]:
                        t = k ^ bit[i] ^ bit[j]
                        row[t] = row.get(t, 0) + spec.Q[i][j]
            elif spec.b[i]:
                t = k | bit[i]
                row[t] = row.get(t, 0) + spec.b[i]
        row[k] = -sum(row.values(), Fraction(0))
        rows.append(row)
    return Generator(n, rows)


# ---------------------------------------------------------------------------
# distributions


@dataclass
class Distribution:
    n: int
    weights: dict = field(default_factory=dict)

    def __post_init__(self):
        self.weights = {w: parse_rational(p) for w, p in self.weights.items()}
        for w, p in self.weights.items():
            if len(w) != self.n:
                raise ChainError("word %r has wrong length" % w)
            if p < 0:
                raise ChainError("negative weight at %r" % w)

    def __getitem__(self, word: str) -> Fraction:
        return self.weights.get(word, Fraction(0))

    def total(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    @property
    def normalized(self) -> bool:
        return self.total() == 1

    def normalize(self) -> "Distribution":
        t = self.total()
        if t == 0:
            raise ChainError("cannot normalise a zero measure")
        return Distribution(self.n, {w: p / t for w, p in self.weights.items()})

    def support(self) -> list:
        return sorted(w for w, p in self.weights.items() if p)

    def expectation(self, f) -> Fraction:
        return sum((p * f(w) for w, p in self.weights.items()), Fraction(0))

    def marginal(self, i: int) -> Fraction:
        """P(site i is occupied), 1-based."""
        return sum((p for w, p in self.weights.items() if w[i - 1] == "1"), Fraction(0))

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["state", "probability"])
        for w in all_words(self.n):
            wr.writerow([w, format_rational(self[w])])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Distribution":
        rows = list(csv.DictReader(io.StringIO(text)))
        n = len(rows[0]["state"]) if rows else 0
        return cls(n, {r["state"]: parse_rational(r["probability"]) for r in rows})

    @classmethod
    def point_mass(cls, word: str) -> "Distribution":
        return cls(len(word), {word: 1})

    @classmethod
    def product(cls, marginals: Sequence) -> "Distribution":
        ps = [parse_rational(p) for p in marginals]
        n = len(ps)
        weights = {}
        for w in all_words(n):
            v = Fraction(1)
            for ch, p in zip(w, ps):
                v *= p if ch == "1" else 1 - p
            weights[w] = v
        return cls(n, weights)


def total_variation(d1: Distribution, d2: Distribution) -> Fraction:
    if d1.n != d2.n:
        raise ChainError("distributions live on different sizes")
    words = set(d1.weights) | set(d2.weights)
    return sum((abs(d1[w] - d2[w]) for w in words), Fraction(0)) / 2


def partition_of_distribution(mu: Distribution) -> SitePoly:
    """Z(x) = sum over eta of mu(eta) x^eta."""
    zero = (0,) * mu.n
    return SitePoly(
        mu.n, (), {(tuple(int(ch) for ch in w), zero): p for w, p in mu.weights.items() if p}
    )


def distribution_of_partition(p: SitePoly) -> Distribution:
    """Read a distribution back from a numeric multiaffine x-polynomial (normalised)."""
    if p.has_y() or not p.is_multiaffine() or not p.is_numeric():
        raise ChainError("need a numeric multiaffine polynomial in x only")
    weights = {
        "".join(str(e) for e in xe): c.constant_value() for (xe, _), c in p.terms.items()
    }
    return Distribution(p.n, weights).normalize()


# ---------------------------------------------------------------------------
# exact linear algebra


def _bits(x: Fraction) -> int:
    return x.numerator.bit_length() + x.denominator.bit_length()


def solve_sparse(rows: list, rhs: list, ncols: int) -> list:
    """
    Solve A z = rhs exactly for square nonsingular A given as a list of
    {column: Fraction} rows.  The pivot in each column is the candidate row
    with the fewest entries, ties broken by the smallest pivot bit size.
    """
    rows = [dict(r) for r in rows]
    rhs = [Fraction(x) for x in rhs]
    if len(rows) != ncols:
        raise SingularSystem("system is not square")
    by_col: dict = {}
    for k, r in enumerate(rows):
        for c in r:
            by_col.setdefault(c, set()).add(k)
    used = set()
    order = []
    for col in range(ncols):
        cands = [k for k in by_col.get(col, ()) if k not in used and rows[k].get(col)]
        if not cands:
            raise SingularSystem("no pivot in column %d" % col)
        piv = min(cands, key=lambda k: (len(rows[k]), _bits(rows[k][col])))
        used.add(piv)
        order.append((col, piv))
        prow = rows[piv]
        pval = prow[col]
        for k in cands:
            if k == piv:
                continue
            r = rows[k]
            f = r[col] / pval
            for c, v in prow.items():
                nv = r.get(c, 0) - f * v
                if nv:
                    if c not in r:
                        by_col.setdefault(c, set()).add(k)
                    r[c] = nv
                else:
                    r.pop(c, None)
            rhs[k] -= f * rhs[piv]
    z = [Fraction(0)] * ncols
    for col, piv in reversed(order):
        r = rows[piv]
        acc = rhs[piv] - sum((v * z[c] for c, v in r.items() if c != col), Fraction(0))
        z[col] = acc / r[col]
    return z


def closed_classes(gen: Generator, start: int | None = None) -> list:
    """Closed communicating classes, optionally only those reachable from ``start``."""
    g = gen.digraph()
    if start is not None:
        g = g.subgraph({start} | nx.descendants(g, start)).copy()
    cond = nx.condensation(g)
    return [
        sorted(cond.nodes[c]["members"]) for c in cond.nodes if cond.out_degree(c) == 0
    ]


def stationary_exact(
    spec: ChainSpec, initial: str | None = None, cap: int = DEFAULT_CAP
) -> Distribution:
    """
    The unique stationary distribution, exactly.

    Requires a single closed class (among the states reachable from
    ``initial`` when given).  Transient states get probability zero.
    """
    gen = build_generator(spec, cap)
    n = spec.n
    start = None if initial is None else index_of(initial)
    classes = closed_classes(gen, start)
    if len(classes) != 1:
        raise NonUniqueStationary([[word_of(k, n) for k in c] for c in classes])
    cls = classes[0]
    pos = {k: m for m, k in enumerate(cls)}
    m = len(cls)
    # column j of G restricted to the class, i.e. (pi G)_j = 0, last one
    # replaced by normalisation
    eqs = [dict() for _ in range(m)]
    for k in cls:
        for j, v in gen.rows[k].items():
            if j in pos and v:
                eqs[pos[j]][pos[k]] = v
    eqs[m - 1] = {c: Fraction(1) for c in range(m)}
    rhs = [Fraction(0)] * (m - 1) + [Fraction(1)]
    z = solve_sparse(eqs, rhs, m)
    weights = {word_of(k, n): Fraction(0) for k in range(gen.size)}
    for k, val in zip(cls, z):
        weights[word_of(k, n)] = val
    mu = Distribution(n, weights)
    residual = stationarity_residual(gen, mu)
    if any(residual):
        raise ChainError("solver output fails pi G = 0")
    return mu


def stationarity_residual(gen: Generator, mu: Distribution) -> list:
    """The vector pi G (exactly zero for a stationary pi)."""
    out = [Fraction(0)] * gen.size
    for k, row in enumerate(gen.rows):
        p = mu[word_of(k, gen.n)]
        if p:
            for j, v in row.items():
                out[j] += p * v
    return out


def stationary_partition(n: int, q, alpha, beta, gamma=0, delta=0) -> SitePoly:
    """Partition function of the stationary law of the line process."""
    return partition_of_distribution(stationary_exact(asep_line_spec(n, q, alpha, beta, gamma, delta)))


# ---------------------------------------------------------------------------
# simulation


@dataclass
class SimulationResult:
    distribution: Distribution
    events: int
    absorbing_state: str | None = None


def gillespie(
    spec: ChainSpec,
    t_burn,
    samples: int,
    sample_gap,
    seed: int,
    initial: str | None = None,
    cap: int = DEFAULT_CAP,
) -> SimulationResult:
    """
    Simulate the chain with exponential holding times and record the state
    at times t_burn, t_burn + gap, t_burn + 2 gap, ...

    Hitting a state with no outgoing rate is reported in the result (the
    remaining samples all record that state); it does not raise.
    """
    if samples < 1:
        raise ChainError("need at least one sample")
    gen = build_generator(spec, cap)
    n = spec.n
    size = gen.size
    out_rate = np.zeros(size)
    targets = []
    cumprobs = []
    for k, row in enumerate(gen.rows):
        ts = sorted(j for j in row if j != k)
        rates = np.array([float(row[j]) for j in ts])
        total = rates.sum() if len(ts) else 0.0
        out_rate[k] = total
        targets.append(ts)
        cumprobs.append(np.cumsum(rates) / total if total > 0 else rates)

    rng = np.random.default_rng(seed)
    batch = 1 << 16
    expo = rng.standard_exponential(batch)
    unif = rng.random(batch)
    ptr = 0

    state = 0 if initial is None else index_of(initial)
    t = 0.0
    next_sample = float(Fraction(t_burn))
    gap = float(Fraction(sample_gap))
    counts = np.zeros(size, dtype=np.int64)
    taken = 0
    events = 0
    absorbing = None
    while taken < samples:
        lam = out_rate[state]
        if lam == 0.0:
            absorbing = word_of(state, n)
            log.warning("absorbed in state %s after %d events", absorbing, events)
            counts[state] += samples - taken
            taken = samples
            break
        if ptr == batch:
            expo = rng.standard_exponential(batch)
            unif = rng.random(batch)
            ptr = 0
        t_next = t + expo[ptr] / lam
        u = unif[ptr]
        ptr += 1
        while next_sample < t_next and taken < samples:
            counts[state] += 1
            taken += 1
            next_sample += gap
        t = t_next
        cp = cumprobs[state]
        idx = int(np.searchsorted(cp, u, side="right"))
        state = targets[state][min(idx, len(cp) - 1)]
        events += 1
    weights = {word_of(k, n): Fraction(int(c), samples) for k, c in enumerate(counts)}
    return SimulationResult(Distribution(n, weights), events, absorbing)
