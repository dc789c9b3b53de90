"""
Alternative trees and decorated alternative trees.

A tree is stored as a parent map.  The bijections from marked cycles,
permutations and colored permutations onto trees live here together with
their inverses, the closed-form parent formula (computed from the cycle
alone, without building any tree) and the tree statistics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .combinatorics import (
    ColoredPermutation,
    enumerate_colored_permutations,
    right_to_left_maxima,
    right_to_left_minima,
)


class InvalidTree(ValueError):
    def __init__(self, report: "Validation"):
        super().__init__(report.message)
        self.report = report


# ---------------------------------------------------------------------------
# marked cycles


@dataclass(frozen=True)
class MarkedCycle:
    """
    A cyclic permutation of a finite set with a mark at its min or max.

    ``word`` lists the cycle so that it ends at the mark:
    word[0] -> word[1] -> ... -> word[-1] -> word[0].
    """

    word: tuple

    def __post_init__(self):
        w = tuple(self.word)
        if not w:
            raise ValueError("a marked cycle needs at least one element")
        if len(set(w)) != len(w):
            raise ValueError("repeated letter in %r" % (w,))
        if w[-1] not in (min(w), max(w)):
            raise ValueError("mark %r is neither the min nor the max" % (w[-1],))
        object.__setattr__(self, "word", w)

    @classmethod
    def from_cycle(cls, cycle, mark) -> "MarkedCycle":
        cycle = tuple(cycle)
        k = cycle.index(mark)
        return cls(cycle[k + 1 :] + cycle[: k + 1])

    @property
    def mark(self):
        return self.word[-1]

    @property
    def support(self) -> tuple:
        return tuple(sorted(self.word))

    def successor(self, a):
        k = self.word.index(a)
        return self.word[(k + 1) % len(self.word)]


def _factor(word: tuple):
    """Split W s into [(W_1, x_1), ..., (W_k, x_k)]; x_1 is closest to s."""
    s, W = word[-1], word[:-1]
    if not W:
        return []
    if s < min(W):
        records = right_to_left_maxima(W)
    elif s > max(W):
        records = right_to_left_minima(W)
    else:
        raise ValueError("mark %r is neither the min nor the max of %r" % (s, word))
    # W_i is the stretch strictly between x_{i+1} and x_i
    pos = [W.index(x) for x in records] + [-1]
    return [(W[pos[i + 1] + 1 : pos[i]], x) for i, x in enumerate(records)]


def marked_cycle_factorize(mc: MarkedCycle):
    """
    Return ``(factors, mark)`` with factors ``[(W_1, x_1), ..., (W_k, x_k)]``
    such that W_k x_k ... W_1 x_1 s is the cycle word.  The x's are the
    right-to-left maxima of W when s is the minimum, minima when s is the
    maximum.
    """
    return _factor(mc.word), mc.mark


def _attach(word: tuple, parent: dict) -> None:
    s = word[-1]
    for W_i, x_i in _factor(word):
        parent[x_i] = s
        _attach(W_i + (x_i,), parent)


# ---------------------------------------------------------------------------
# trees


class AltTree:
    """
    A rooted tree on an ordered integer set, given by its parent map.

    ``colors`` is None for plain trees and a vertex -> color map for
    decorated trees with colors in 0..r-1.
    """

    __slots__ = ("root", "parent", "colors", "r", "support", "_children")

    def __init__(self, root: int, parent: Mapping[int, int], colors: Mapping[int, int] | None = None, r: int = 1):
        self.root = root
        self.parent = dict(parent)
        self.colors = None if colors is None else dict(colors)
        self.r = r
        self.support = tuple(sorted({root} | set(self.parent)))
        kids: dict = {v: [] for v in self.support}
        for v, p in self.parent.items():
            kids.setdefault(p, []).append(v)
        self._children = {v: tuple(sorted(c)) for v, c in kids.items()}

    @property
    def decorated(self) -> bool:
        return self.colors is not None

    def children(self, v: int) -> tuple:
        return self._children.get(v, ())

    def descendants(self, v: int) -> list:
        out, stack = [], list(self.children(v))
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(self.children(u))
        return out

    def subtree_vertices(self, v: int) -> list:
        return [v] + self.descendants(v)

    def edges(self) -> list:
        return sorted((p, v) for v, p in self.parent.items())

    def key(self):
        colors = None if self.colors is None else tuple(sorted(self.colors.items()))
        return (self.root, tuple(sorted(self.parent.items())), colors)

    def __eq__(self, other):
        return isinstance(other, AltTree) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "AltTree(root=%r, edges=%r)" % (self.root, self.edges())

    def to_json(self) -> dict:
        n = max(self.support) - 1
        out = {
            "n": n,
            "r": self.r,
            "parent": {str(v): p for v, p in sorted(self.parent.items())},
        }
        if self.colors is not None:
            out["colors"] = {str(v): c for v, c in sorted(self.colors.items())}
        return out

    @classmethod
    def from_json(cls, obj) -> "AltTree":
        parent = {int(v): int(p) for v, p in obj["parent"].items()}
        colors = obj.get("colors")
        if colors is not None:
            colors = {int(v): int(c) for v, c in colors.items()}
        vertices = set(parent) | set(parent.values())
        roots = vertices - set(parent)
        if len(roots) != 1:
            raise ValueError("parent map does not describe a rooted tree")
        return cls(roots.pop(), parent, colors, int(obj.get("r", 1)))


def tree_from_marked_cycle(mc: MarkedCycle) -> AltTree:
    """The map T: root at the mark, children are the records x_i."""
    parent: dict = {}
    _attach(mc.word, parent)
    return AltTree(mc.mark, parent)


def tree_from_permutation(pi: ColoredPermutation) -> AltTree:
    """The map T' from S_{n+1} onto alternative trees on [0, n+1] rooted at 0."""
    if pi.r != 1:
        raise ValueError("tree_from_permutation needs a plain permutation")
    parent: dict = {}
    for cyc in pi.cycles():
        s = max(cyc)
        parent[s] = 0
        _attach(pi.cycle_word(s), parent)
    return AltTree(0, parent)


def tree_from_colored_permutation(pi: ColoredPermutation) -> AltTree:
    """
    The map T'' onto decorated trees on [0, n+1].

    Zero cycles hang below 0 from their maxima, non-zero cycles hang below
    n+1 from their minima; n+1 itself is a child of 0.
    """
    if pi.r < 2:
        raise ValueError("decorated trees need r >= 2")
    n = pi.n
    top = n + 1
    parent = {top: 0}
    colors = {0: 1, top: 0}
    for cyc in pi.cycles():
        m = max(cyc)
        if pi.color(m) == 0:
            s = m
            parent[s] = 0
        else:
            s = min(cyc)
            parent[s] = top
        _attach(pi.cycle_word(s), parent)
    for i in range(1, n + 1):
        colors[i] = pi.color(i)
    return AltTree(0, parent, colors, pi.r)


def _word_of(t: AltTree, v: int) -> tuple:
    """Inverse of T on the subtree at v: the cycle word ending at v."""
    kids = t.children(v)
    if not kids:
        return (v,)
    order = sorted(kids, reverse=kids[0] > v)
    out: tuple = ()
    for c in order:
        out += _word_of(t, c)
    return out + (v,)


def marked_cycle_from_tree(t: AltTree) -> MarkedCycle:
    return MarkedCycle(_word_of(t, t.root))


def _close_cycle(word: tuple, images: dict) -> None:
    for a, b in zip(word, word[1:] + word[:1]):
        images[a] = b


def permutation_from_tree(t: AltTree) -> ColoredPermutation:
    """Inverse of T' (plain trees) or T'' (decorated trees)."""
    report = validate_tree(t)
    if not report.ok:
        raise InvalidTree(report)
    if t.root != 0 or t.support != tuple(range(len(t.support))):
        raise InvalidTree(Validation(False, "root", (t.root,), "tree must live on [0, n+1] with root 0"))
    top = t.support[-1]
    images: dict = {}
    if not t.decorated:
        for s in t.children(0):
            _close_cycle(_word_of(t, s), images)
        return ColoredPermutation(tuple(images[i] for i in range(1, top + 1)))
    n = top - 1
    for s in t.children(0):
        if s != top:
            _close_cycle(_word_of(t, s), images)
    for s in t.children(top):
        _close_cycle(_word_of(t, s), images)
    sigma = tuple(images[i] for i in range(1, n + 1))
    kappa = tuple(t.colors[i] for i in range(1, n + 1))
    return ColoredPermutation(sigma, kappa, t.r)


# ---------------------------------------------------------------------------
# the parent formula


def _orbit_parent(succ, i):
    j = succ(i)
    if j == i:
        raise ValueError("%r is fixed; it has no parent inside its cycle" % (i,))
    seen = []
    if j > i:
        while j > i:
            seen.append(j)
            j = succ(j)
        return max(seen)
    while j < i:
        seen.append(j)
        j = succ(j)
    return min(seen)


def parent_by_formula(obj, i: int) -> int:
    """
    Parent of i read off the cycle structure alone.

    For a ``MarkedCycle``, i must not be the mark.  For a plain permutation
    the convention of T' applies (cycle maxima hang from 0); for a colored
    permutation (r >= 2) that of T'' (zero-cycle maxima hang from 0,
    non-zero-cycle minima from n+1).
    """
    if isinstance(obj, MarkedCycle):
        if i == obj.mark:
            raise ValueError("the mark has no parent")
        return _orbit_parent(obj.successor, i)
    pi = obj
    cyc = pi.cycle_word(i)
    if pi.r == 1:
        if i == max(cyc):
            return 0
        return _orbit_parent(pi, i)
    m = max(cyc)
    if pi.color(m) == 0:
        if i == m:
            return 0
    elif i == min(cyc):
        return pi.n + 1
    return _orbit_parent(pi, i)


def parent_map_by_formula(pi: ColoredPermutation) -> dict:
    """Parent of every vertex of T'(pi) or T''(pi), without building the tree."""
    out = {i: parent_by_formula(pi, i) for i in range(1, pi.n + 1)}
    if pi.r > 1:
        out[pi.n + 1] = 0
    return out


# ---------------------------------------------------------------------------
# statistics


def yin_yang_count(parent: Mapping[int, int], n: int) -> int:
    """Pairs 1 <= i < j <= n with p(j) < i < j < p(i)."""
    count = 0
    for j in range(2, n + 1):
        pj = parent[j]
        for i in range(max(pj + 1, 1), j):
            if parent[i] > j:
                count += 1
    return count


def yin_yang_pairs(parent: Mapping[int, int], n: int) -> list:
    return [
        (i, j)
        for j in range(2, n + 1)
        for i in range(1, j)
        if parent[j] < i and parent[i] > j
    ]


def permutation_yin_yang(pi: ColoredPermutation) -> int:
    """yy(pi) from the parent formula."""
    n = pi.n - 1 if pi.r == 1 else pi.n
    return yin_yang_count(parent_map_by_formula(pi), n)


@dataclass(frozen=True)
class TreeStats:
    excedances: str
    root_children: int
    top_children: int
    yin_yang: int


def tree_statistics(t: AltTree) -> TreeStats:
    """
    Statistics of a tree on [0, n+1]: the excedance word (i is an
    excedance when i < p(i)), the number of children of 0 (minus one for
    decorated trees), the number of children of n+1, and the yin-yang count.
    """
    top = max(t.support)
    n = top - 1
    word = "".join("1" if i < t.parent[i] else "0" for i in range(1, n + 1))
    c0 = len(t.children(0)) - (1 if t.decorated else 0)
    c1 = len(t.children(top))
    return TreeStats(word, c0, c1, yin_yang_count(t.parent, n))


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Validation:
    ok: bool
    condition: str | None = None
    vertices: tuple = field(default=())
    message: str = "ok"

    def __bool__(self):
        return self.ok


def _fail(condition, vertices, message):
    return Validation(False, condition, tuple(vertices), message)


def validate_tree(t: AltTree) -> Validation:
    """Check the tree structure, conditions (i)-(iii), and (a)-(c) when decorated."""
    support = set(t.support)
    if t.root in t.parent:
        return _fail("structure", (t.root,), "root %d has a parent" % t.root)
    for v, p in t.parent.items():
        if p not in support:
            return _fail("structure", (v, p), "parent %d of %d is not a vertex" % (p, v))
    for v in t.support:
        seen = set()
        u = v
        while u != t.root:
            if u in seen:
                return _fail("structure", (v,), "cycle through %d" % v)
            seen.add(u)
            u = t.parent[u]

    s, top = t.support[0], t.support[-1]
    if t.root not in (s, top):
        return _fail("i", (t.root,), "root %d is neither min nor max" % t.root)

    for v in t.support:
        if v == t.root:
            continue
        p = t.parent[v]
        desc = t.descendants(v)
        if v > p:
            bad = [d for d in desc if d > v]
            if bad:
                return _fail("ii", (v, max(bad)), "%d exceeds its parent %d but not its descendant %d" % (v, p, max(bad)))
        else:
            bad = [d for d in desc if d < v]
            if bad:
                return _fail("iii", (v, min(bad)), "%d is below its parent %d but above its descendant %d" % (v, p, min(bad)))

    if not t.decorated:
        return Validation(True)

    colors = t.colors
    for v in t.support:
        if v not in colors or not 0 <= colors[v] < t.r:
            return _fail("colors", (v,), "vertex %d lacks a color in 0..%d" % (v, t.r - 1))
    if t.root != s:
        return _fail("a", (t.root,), "decorated trees are rooted at their minimum")
    for c in t.children(s):
        if c != top and colors[c] != 0:
            return _fail("a", (c,), "child %d of the root has color %d" % (c, colors[c]))
    for c in t.children(top):
        m = max(t.subtree_vertices(c))
        if colors[m] == 0:
            return _fail("b", (c, m), "largest vertex %d below child %d of %d has color 0" % (m, c, top))
    if colors[s] != 1 or colors[top] != 0:
        return _fail("c", (s, top), "root must have color 1 and the maximum color 0")
    return Validation(True)


# ---------------------------------------------------------------------------
# enumeration and diagrams


def enumerate_trees(n: int, r: int = 1, start: int = 0, stop: int | None = None) -> Iterator[AltTree]:
    """(n+1)! plain trees (r = 1) or r^n n! decorated trees (r >= 2)."""
    if r == 1:
        for pi in enumerate_colored_permutations(n + 1, 1, start, stop):
            yield tree_from_permutation(pi)
    else:
        for pi in enumerate_colored_permutations(n, r, start, stop):
            yield tree_from_colored_permutation(pi)


def diagram_arcs(t: AltTree) -> list:
    """
    Arcs (i, j, side) with i < j: "above" when i is a child of j,
    "below" when j is a child of i.
    """
    arcs = []
    for v, p in t.parent.items():
        if v < p:
            arcs.append((v, p, "above"))
        else:
            arcs.append((p, v, "below"))
    return sorted(arcs)
