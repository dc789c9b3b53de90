"""Plain and colored permutations and their cycle and excedance statistics."""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterator


@dataclass(frozen=True)
class ColoredPermutation:
    """
    An element (kappa, sigma) of the wreath product Z_r wr S_n.

    ``sigma`` is one-line notation with values in 1..n, so
    ``sigma[i - 1]`` is the image of i.  ``kappa[i - 1]`` is the color of i.
    With r = 1 this is just a permutation.
    """

    sigma: tuple
    kappa: tuple = None
    r: int = 1

    def __post_init__(self):
        sigma = tuple(self.sigma)
        n = len(sigma)
        if sorted(sigma) != list(range(1, n + 1)):
            raise ValueError("sigma %r is not a permutation of 1..%d" % (sigma, n))
        kappa = (0,) * n if self.kappa is None else tuple(self.kappa)
        if len(kappa) != n:
            raise ValueError("kappa has length %d, expected %d" % (len(kappa), n))
        if self.r < 1:
            raise ValueError("need r >= 1")
        if any(not 0 <= c < self.r for c in kappa):
            raise ValueError("colors must lie in 0..%d" % (self.r - 1))
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "kappa", kappa)

    @property
    def n(self) -> int:
        return len(self.sigma)

    def __call__(self, i: int) -> int:
        return self.sigma[i - 1]

    def color(self, i: int) -> int:
        return self.kappa[i - 1]

    def inverse_sigma(self) -> tuple:
        inv = [0] * self.n
        for i, j in enumerate(self.sigma, 1):
            inv[j - 1] = i
        return tuple(inv)

    def cycles(self) -> list[tuple]:
        """Cycles as words a_1 ... a_k (a_1 -> a_2 -> ...), each starting at its minimum."""
        seen = set()
        out = []
        for i in range(1, self.n + 1):
            if i in seen:
                continue
            cyc = [i]
            seen.add(i)
            j = self(i)
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self(j)
            out.append(tuple(cyc))
        return out

    def cycle_word(self, s: int) -> tuple:
        """The cycle through s written as a word that ends at s."""
        word = []
        j = self(s)
        while j != s:
            word.append(j)
            j = self(j)
        word.append(s)
        return tuple(word)

    def __str__(self):
        return format_cycles(self)


def format_cycles(pi: ColoredPermutation) -> str:
    """Cycle notation, cycles led by their maxima; colors as carets when r > 1."""
    cycles = sorted((pi.cycle_word(max(c)) for c in pi.cycles()), key=lambda w: w[-1])
    parts = []
    for w in cycles:
        w = (w[-1],) + w[:-1]
        if pi.r > 1:
            parts.append("(" + " ".join("%d^%d" % (i, pi.color(i)) for i in w) + ")")
        else:
            parts.append("(" + " ".join(str(i) for i in w) + ")")
    return "".join(parts)


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text: str, n: int | None = None, r: int | None = None) -> ColoredPermutation:
    """
    Parse cycle notation such as ``(38)(621457)`` or ``(3^0)(4^2 5^0 7^4)``,
    or one-line notation such as ``2 3 1`` / ``231``.

    Inside a cycle, entries are separated by spaces or commas; a cycle with
    no separators is read digit by digit.  Missing points are fixed with
    color 0.  ``r`` defaults to one more than the largest color seen.
    """
    text = text.strip()
    if "(" not in text:
        tokens = re.split(r"[\s,]+", text) if re.search(r"[\s,]", text) else list(text)
        sigma = tuple(int(t) for t in tokens if t)
        return ColoredPermutation(sigma, None, r or 1)
    images: dict = {}
    colors: dict = {}
    leftover = _CYCLE.sub("", text).strip()
    if leftover:
        raise ValueError("cannot parse %r" % leftover)
    for body in _CYCLE.findall(text):
        body = body.strip()
        if re.search(r"[\s,]", body):
            tokens = [t for t in re.split(r"[\s,]+", body) if t]
        elif "^" in body:
            tokens = [body]
        else:
            tokens = list(body)
        elems = []
        for t in tokens:
            if "^" in t:
                a, c = t.split("^")
                elems.append(int(a))
                colors[int(a)] = int(c)
            else:
                elems.append(int(t))
        for a, b in zip(elems, elems[1:] + elems[:1]):
            if a in images:
                raise ValueError("%d appears twice" % a)
            images[a] = b
    size = max(images, default=0) if n is None else n
    sigma = tuple(images.get(i, i) for i in range(1, size + 1))
    kappa = tuple(colors.get(i, 0) for i in range(1, size + 1))
    if r is None:
        r = max(kappa, default=0) + 1
    return ColoredPermutation(sigma, kappa, r)


# ---------------------------------------------------------------------------
# enumeration


def count_colored_permutations(n: int, r: int) -> int:
    return r**n * math.factorial(n)


def enumerate_permutations(n: int) -> Iterator[tuple]:
    """One-line notations of S_n in lexicographic order."""
    return itertools.permutations(range(1, n + 1))


def enumerate_colored_permutations(
    n: int, r: int, start: int = 0, stop: int | None = None
) -> Iterator[ColoredPermutation]:
    """
    All r^n n! colored permutations: lexicographic on sigma, then on kappa.

    ``start``/``stop`` select a half-open range of ranks so that disjoint
    ranges can be consumed independently.
    """
    if n < 0 or r < 1:
        raise ValueError("need n >= 0 and r >= 1")
    total = count_colored_permutations(n, r)
    stop = total if stop is None else min(stop, total)
    colorings = r**n
    p_first = start // colorings
    rank = p_first * colorings
    for sigma in itertools.islice(itertools.permutations(range(1, n + 1)), p_first, None):
        for kappa in itertools.product(range(r), repeat=n):
            if rank >= stop:
                return
            if rank >= start:
                yield ColoredPermutation(sigma, kappa, r)
            rank += 1


def colored_permutation_at(n: int, r: int, rank: int) -> ColoredPermutation:
    """Unrank in the enumeration order above."""
    colorings = r**n
    prank, crank = divmod(rank, colorings)
    items = list(range(1, n + 1))
    sigma = []
    for k in range(n, 0, -1):
        f = math.factorial(k - 1)
        idx, prank = divmod(prank, f)
        sigma.append(items.pop(idx))
    kappa = []
    for _ in range(n):
        crank, c = divmod(crank, r)
        kappa.append(c)
    return ColoredPermutation(tuple(sigma), tuple(reversed(kappa)), r)


# ---------------------------------------------------------------------------
# statistics


def excedance_sets(pi: ColoredPermutation) -> tuple[frozenset, frozenset]:
    """
    Excedance set X and anti-excedance set Y.

    i in X iff sigma(i) > i, or i is fixed with nonzero color;
    j in Y iff sigma^{-1}(j) > j, or j is fixed with color zero.
    """
    X, Y = set(), set()
    for i in range(1, pi.n + 1):
        j = pi(i)
        if j > i:
            X.add(i)
        elif j < i:
            Y.add(j)
        elif pi.color(i):
            X.add(i)
        else:
            Y.add(i)
    return frozenset(X), frozenset(Y)


def excedance_word(pi: ColoredPermutation, length: int | None = None) -> str:
    """X(pi) as a 0/1 word; for S_{n+1} pass ``length=n``."""
    X, _ = excedance_sets(pi)
    length = pi.n if length is None else length
    return "".join("1" if i in X else "0" for i in range(1, length + 1))


def right_to_left_minima(word) -> list:
    out = []
    best = None
    for a in reversed(word):
        if best is None or a < best:
            out.append(a)
            best = a
    return out


def right_to_left_maxima(word) -> list:
    out = []
    best = None
    for a in reversed(word):
        if best is None or a > best:
            out.append(a)
            best = a
    return out


@dataclass(frozen=True)
class CycleStats:
    c: int
    c_prime: int | None = None
    nc: int | None = None
    zc: int | None = None


def cycle_statistics(pi: ColoredPermutation, mode: str = "plain") -> CycleStats:
    """
    plain: pi is in S_{n+1}; c counts cycles and c_prime counts right-to-left
    minima of W, where the cycle of n+1 is written W (n+1).
    colored: cycles are zero or non-zero by the color of their maximum.
    """
    cycles = pi.cycles()
    if mode == "plain":
        if pi.r != 1:
            raise ValueError("plain statistics need r = 1")
        top = pi.n
        if top == 0:
            return CycleStats(c=0, c_prime=0)
        W = pi.cycle_word(top)[:-1]
        return CycleStats(c=len(cycles), c_prime=len(right_to_left_minima(W)))
    if mode == "colored":
        zc = sum(1 for cyc in cycles if pi.color(max(cyc)) == 0)
        return CycleStats(c=len(cycles), nc=len(cycles) - zc, zc=zc)
    raise ValueError("mode must be 'plain' or 'colored'")


def descent_count(sigma) -> int:
    return sum(1 for a, b in zip(sigma, sigma[1:]) if a > b)


def excedance_count(sigma) -> int:
    return sum(1 for i, a in enumerate(sigma, 1) if a > i)
