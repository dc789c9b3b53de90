"""
Exact sparse polynomials.

Two layers: ``ParamPoly`` is a polynomial in a fixed tuple of named scalar
parameters with ``Fraction`` coefficients; ``SitePoly`` is a polynomial in
site variables x_1..x_n (and optionally y_1..y_n) whose coefficients are
``ParamPoly`` values.  Nothing here ever touches floating point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class ArityError(ValueError):
    """Operands live in incompatible polynomial rings."""


def parse_rational(s) -> Fraction:
    """Parse "p/q", "p", an int or a Fraction.  Floats are refused."""
    if isinstance(s, Fraction):
        return s
    if isinstance(s, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s.strip())
    raise TypeError("expected an exact rational, got %r" % (s,))


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return "%d/%d" % (x.numerator, x.denominator)


# ---------------------------------------------------------------------------
# complex rationals


@dataclass(frozen=True)
class ComplexRational:
    """A complex number with exact rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def promote(cls, x) -> "ComplexRational":
        if isinstance(x, ComplexRational):
            return x
        if isinstance(x, complex):
            raise TypeError("float complex values are not exact")
        return cls(parse_rational(x), Fraction(0))

    def __add__(self, other):
        other = self.promote(other)
        return ComplexRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-self.promote(other))

    def __rsub__(self, other):
        return self.promote(other) - self

    def __mul__(self, other):
        other = self.promote(other)
        return ComplexRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self):
        return ComplexRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        other = self.promote(other)
        d = other.abs2()
        if d == 0:
            raise ZeroDivisionError("complex division by zero")
        num = self * other.conjugate()
        return ComplexRational(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        return self.promote(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return ComplexRational(1) / self**(-k)
        out = ComplexRational(1)
        for _ in range(k):
            out = out * self
        return out

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __eq__(self, other):
        try:
            other = self.promote(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __str__(self):
        if self.im == 0:
            return format_rational(self.re)
        return "%s+%si" % (format_rational(self.re), format_rational(self.im))

    def to_json(self):
        return [format_rational(self.re), format_rational(self.im)]

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, (list, tuple)):
            re, im = obj
            return cls(parse_rational(re), parse_rational(im))
        return cls(parse_rational(obj))


I = ComplexRational(0, 1)


# ---------------------------------------------------------------------------
# polynomials in scalar parameters


def _scalar(x) -> Fraction | None:
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return Fraction(x)
    return None


class ParamPoly:
    """
    Sparse polynomial in named parameters, e.g. ``("alpha", "beta", "q")``.

    ``terms`` maps exponent tuples (one entry per parameter) to nonzero
    Fractions.  Instances are treated as immutable.
    """

    __slots__ = ("params", "terms", "_hash")

    def __init__(self, params: Sequence[str] = (), terms: Mapping | None = None):
        self.params = tuple(params)
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != len(self.params):
                raise ArityError("exponent %r does not match params %r" % (exp, self.params))
            if any(e < 0 for e in exp):
                raise ValueError("negative exponent in %r" % (exp,))
            c = Fraction(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean
        self._hash = None

    # constructors

    @classmethod
    def const(cls, c, params: Sequence[str] = ()) -> "ParamPoly":
        params = tuple(params)
        return cls(params, {(0,) * len(params): c})

    @classmethod
    def var(cls, name: str, params: Sequence[str]) -> "ParamPoly":
        params = tuple(params)
        exp = tuple(int(p == name) for p in params)
        if sum(exp) != 1:
            raise ArityError("%r is not one of %r" % (name, params))
        return cls(params, {exp: 1})

    @classmethod
    def monomial(cls, params: Sequence[str], exp: Sequence[int], c=1) -> "ParamPoly":
        return cls(params, {tuple(exp): c})

    def _coerce(self, other) -> "ParamPoly":
        s = _scalar(other)
        if s is not None:
            return ParamPoly.const(s, self.params)
        if not isinstance(other, ParamPoly):
            raise TypeError("cannot combine ParamPoly with %r" % type(other).__name__)
        if other.params == self.params:
            return other
        # a parameter-free constant broadcasts into any ring
        if not other.params:
            return ParamPoly.const(other.constant_value(), self.params)
        raise ArityError("parameter lists differ: %r vs %r" % (self.params, other.params))

    def _lift(self, other):
        """Return (left, right) in a common ring."""
        if isinstance(other, ParamPoly) and not self.params and other.params:
            return ParamPoly.const(self.constant_value(), other.params), other
        return self, self._coerce(other)

    # ring operations

    def __add__(self, other):
        a, b = self._lift(other)
        terms = dict(a.terms)
        for exp, c in b.terms.items():
            terms[exp] = terms.get(exp, 0) + c
        return ParamPoly(a.params, terms)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly(self.params, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        a, b = self._lift(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        s = _scalar(other)
        if s is not None:
            return ParamPoly(self.params, {e: c * s for e, c in self.terms.items()})
        a, b = self._lift(other)
        terms: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return ParamPoly(a.params, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        s = _scalar(other)
        if s is None:
            raise TypeError("ParamPoly only divides by rational scalars")
        return self * (1 / s)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = ParamPoly.const(1, self.params)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("ParamPoly %s still has symbolic parameters" % self)
        return sum(self.terms.values(), Fraction(0))

    def degree(self, name: str) -> int:
        k = self.params.index(name)
        return max((e[k] for e in self.terms), default=0)

    def is_homogeneous(self, name: str, degree: int) -> bool:
        k = self.params.index(name)
        return all(e[k] == degree for e in self.terms)

    def coefficient_sum(self) -> Fraction:
        return sum(self.terms.values(), Fraction(0))

    # substitution

    def subs(self, values: Mapping[str, object]) -> "ParamPoly":
        """Substitute rationals for some parameters; the rest stay symbolic."""
        keep = [k for k, p in enumerate(self.params) if p not in values]
        vals = {k: parse_rational(values[p]) for k, p in enumerate(self.params) if p in values}
        params = tuple(self.params[k] for k in keep)
        terms: dict = {}
        for exp, c in self.terms.items():
            for k, v in vals.items():
                if exp[k]:
                    c = c * v ** exp[k]
            e = tuple(exp[k] for k in keep)
            terms[e] = terms.get(e, 0) + c
        return ParamPoly(params, terms)

    def evaluate(self, values: Mapping[str, object]) -> Fraction:
        missing = [p for p in self.params if p not in values]
        if missing:
            raise KeyError("no value for parameters %s" % missing)
        return self.subs(values).constant_value()

    def rename(self, params: Sequence[str]) -> "ParamPoly":
        """Re-embed into a larger (or reordered) parameter list."""
        params = tuple(params)
        idx = []
        for p in self.params:
            if p not in params:
                raise ArityError("%r missing from %r" % (p, params))
            idx.append(params.index(p))
        terms = {}
        for exp, c in self.terms.items():
            e = [0] * len(params)
            for k, x in zip(idx, exp):
                e[k] = x
            terms[tuple(e)] = c
        return ParamPoly(params, terms)

    # comparisons and display

    def __eq__(self, other):
        if isinstance(other, ParamPoly):
            if self.params == other.params:
                return self.terms == other.terms
            if not self.params or not other.params:
                a, b = self._lift(other)
                return a.terms == b.terms
            return False
        s = _scalar(other)
        if s is None:
            return NotImplemented
        return self.terms == ParamPoly.const(s, self.params).terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.params, frozenset(self.terms.items())))
        return self._hash

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, reverse=True):
            c = self.terms[exp]
            mono = "*".join(
                p if e == 1 else "%s^%d" % (p, e) for p, e in zip(self.params, exp) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append("%s*%s" % (c, mono))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return "ParamPoly(%s)" % self

    def to_json(self):
        return [
            {"exp": list(exp), "val": format_rational(c)}
            for exp, c in sorted(self.terms.items())
        ]

    @classmethod
    def from_json(cls, params, obj):
        return cls(params, {tuple(t["exp"]): parse_rational(t["val"]) for t in obj})


# ---------------------------------------------------------------------------
# polynomials in site variables


def _var(var) -> tuple[str, int]:
    """Normalise "x3" / ("x", 3) into ("x", 3)."""
    if isinstance(var, str):
        kind, idx = var[0], int(var[1:])
    else:
        kind, idx = var
    if kind not in ("x", "y"):
        raise ValueError("unknown variable kind %r" % kind)
    return kind, int(idx)


class SitePoly:
    """
    Polynomial in x_1..x_n, y_1..y_n with ``ParamPoly`` coefficients.

    Keys are pairs ``(xexp, yexp)`` of length-n exponent tuples.  The
    partition functions built by this package are multiaffine (every
    exponent 0 or 1), but products such as those in the Rayleigh
    difference need higher powers, so general exponents are allowed.
    """

    __slots__ = ("n", "params", "terms", "_hash")

    def __init__(self, n: int, params: Sequence[str] = (), terms: Mapping | None = None):
        self.n = n
        self.params = tuple(params)
        clean: dict = {}
        for key, c in (terms or {}).items():
            xe, ye = key
            xe, ye = tuple(xe), tuple(ye)
            if len(xe) != n or len(ye) != n:
                raise ArityError("exponent vector length differs from n=%d" % n)
            if not isinstance(c, ParamPoly):
                c = ParamPoly.const(parse_rational(c), self.params)
            elif c.params != self.params:
                c = ParamPoly.const(0, self.params) + c
            if c:
                k = (xe, ye)
                if k in clean:
                    c = clean[k] + c
                    if not c:
                        del clean[k]
                        continue
                clean[k] = c
        self.terms = clean
        self._hash = None

    # constructors

    @classmethod
    def zero(cls, n: int, params: Sequence[str] = ()):
        return cls(n, params)

    @classmethod
    def const(cls, n: int, c, params: Sequence[str] = ()):
        z = (0,) * n
        return cls(n, params, {(z, z): c})

    @classmethod
    def variable(cls, n: int, var, params: Sequence[str] = ()):
        kind, j = _var(var)
        if not 1 <= j <= n:
            raise IndexError("variable index %d outside 1..%d" % (j, n))
        e = tuple(int(k == j) for k in range(1, n + 1))
        z = (0,) * n
        key = (e, z) if kind == "x" else (z, e)
        return cls(n, params, {key: 1})

    @classmethod
    def from_subsets(cls, n: int, params: Sequence[str], items: Iterable):
        """Build from ``(xset, yset, coeff)`` triples with 1-based indices."""
        terms: dict = {}
        params = tuple(params)
        for xs, ys, c in items:
            key = (_indicator(n, xs), _indicator(n, ys))
            if not isinstance(c, ParamPoly):
                c = ParamPoly.const(c, params)
            terms[key] = terms[key] + c if key in terms else c
        return cls(n, params, terms)

    # helpers

    def _coerce(self, other) -> "SitePoly":
        if isinstance(other, SitePoly):
            if other.n != self.n:
                raise ArityError("site counts differ: %d vs %d" % (self.n, other.n))
            if other.params != self.params:
                if not other.params:
                    return other.with_params(self.params)
                if not self.params:
                    raise ArityError("promote the left operand first")
                raise ArityError("parameter lists differ: %r vs %r" % (self.params, other.params))
            return other
        if isinstance(other, ParamPoly) or _scalar(other) is not None:
            return SitePoly.const(self.n, other, self.params)
        raise TypeError("cannot combine SitePoly with %r" % type(other).__name__)

    def _lift(self, other):
        if isinstance(other, SitePoly) and not self.params and other.params:
            return self.with_params(other.params), other
        return self, self._coerce(other)

    def with_params(self, params: Sequence[str]) -> "SitePoly":
        params = tuple(params)
        return SitePoly(self.n, params, {k: c.rename(params) for k, c in self.terms.items()})

    # arithmetic

    def __add__(self, other):
        a, b = self._lift(other)
        terms = dict(a.terms)
        for k, c in b.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return SitePoly(a.n, a.params, terms)

    __radd__ = __add__

    def __neg__(self):
        return SitePoly(self.n, self.params, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        a, b = self._lift(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ParamPoly) or _scalar(other) is not None:
            return SitePoly(self.n, self.params, {k: c * other for k, c in self.terms.items()})
        a, b = self._lift(other)
        terms: dict = {}
        for (x1, y1), c1 in a.terms.items():
            for (x2, y2), c2 in b.terms.items():
                k = (
                    tuple(u + v for u, v in zip(x1, x2)),
                    tuple(u + v for u, v in zip(y1, y2)),
                )
                c = c1 * c2
                terms[k] = terms[k] + c if k in terms else c
        return SitePoly(a.n, a.params, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = SitePoly.const(self.n, 1, self.params)
        for _ in range(k):
            out = out * self
        return out

    # calculus and substitution

    def partial(self, var) -> "SitePoly":
        """Formal partial derivative in x_j or y_j."""
        kind, j = _var(var)
        if not 1 <= j <= self.n:
            raise IndexError("variable index %d outside 1..%d" % (j, self.n))
        slot = 0 if kind == "x" else 1
        terms: dict = {}
        for key, c in self.terms.items():
            e = key[slot]
            p = e[j - 1]
            if not p:
                continue
            e2 = e[: j - 1] + (p - 1,) + e[j:]
            k = (e2, key[1]) if slot == 0 else (key[0], e2)
            terms[k] = c * p
        return SitePoly(self.n, self.params, terms)

    def shift(self, k: int = 1) -> "SitePoly":
        """Rename x_i -> x_{i+k}, y_i -> y_{i+k}; the result has n+k sites."""
        pad = (0,) * k
        return SitePoly(
            self.n + k,
            self.params,
            {(pad + xe, pad + ye): c for (xe, ye), c in self.terms.items()},
        )

    def subs_params(self, values: Mapping[str, object]) -> "SitePoly":
        out = {k: c.subs(values) for k, c in self.terms.items()}
        params = tuple(p for p in self.params if p not in values)
        return SitePoly(self.n, params, out)

    def set_variables(self, values: Mapping) -> "SitePoly":
        """Substitute rationals for some site variables (e.g. every y_j = 1)."""
        vals = {_var(v): parse_rational(c) for v, c in values.items()}
        terms: dict = {}
        for (xe, ye), c in self.terms.items():
            f = Fraction(1)
            xe2, ye2 = list(xe), list(ye)
            for (kind, j), v in vals.items():
                e = xe2 if kind == "x" else ye2
                if e[j - 1]:
                    f *= v ** e[j - 1]
                    e[j - 1] = 0
            k = (tuple(xe2), tuple(ye2))
            terms[k] = terms[k] + c * f if k in terms else c * f
        return SitePoly(self.n, self.params, terms)

    def evaluate(self, assignment: Mapping) -> ComplexRational:
        """
        Exact value at a point.  ``assignment`` holds site variables
        ("x1", "y2", ...) and every parameter name; values are rationals or
        ``ComplexRational``.
        """
        params = {}
        for p in self.params:
            if p not in assignment:
                raise KeyError("no value for parameter %r" % p)
            params[p] = assignment[p]
        sites = {}
        for key, v in assignment.items():
            if key in self.params:
                continue
            sites[_var(key)] = ComplexRational.promote(v)
        total = ComplexRational(0)
        for (xe, ye), c in self.terms.items():
            if any(isinstance(v, ComplexRational) and v.im for v in params.values()):
                raise TypeError("parameters must be real rationals")
            val = ComplexRational(c.evaluate(params) if self.params else c.constant_value())
            for kind, e in (("x", xe), ("y", ye)):
                for j, p in enumerate(e, 1):
                    if p:
                        if (kind, j) not in sites:
                            raise KeyError("no value for %s%d" % (kind, j))
                        val = val * sites[(kind, j)] ** p
            total = total + val
        return total

    def diagonal(self) -> "SitePoly":
        """Set every x_i = x and every y_i = y; returns a one-site polynomial."""
        terms: dict = {}
        for (xe, ye), c in self.terms.items():
            k = ((sum(xe),), (sum(ye),))
            terms[k] = terms[k] + c if k in terms else c
        return SitePoly(1, self.params, terms)

    # queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_multiaffine(self) -> bool:
        return all(e <= 1 for xe, ye in self.terms for e in xe + ye)

    def has_y(self) -> bool:
        return any(any(ye) for _, ye in self.terms)

    def is_numeric(self) -> bool:
        return all(c.is_constant() for c in self.terms.values())

    def coefficient(self, xs: Iterable[int] = (), ys: Iterable[int] = ()) -> ParamPoly:
        key = (_indicator(self.n, xs), _indicator(self.n, ys))
        return self.terms.get(key, ParamPoly.const(0, self.params))

    def coefficient_sum(self) -> ParamPoly:
        return sum(self.terms.values(), ParamPoly.const(0, self.params))

    def univariate(self) -> list:
        """Coefficient list (ascending) of a one-site, y-free polynomial."""
        if self.n != 1 or self.has_y():
            raise ValueError("not a univariate polynomial in x")
        if not self.terms:
            return []
        deg = max(xe[0] for xe, _ in self.terms)
        out = [ParamPoly.const(0, self.params)] * (deg + 1)
        for (xe, _), c in self.terms.items():
            out[xe[0]] = c
        if self.params:
            return out
        return [c.constant_value() for c in out]

    def __eq__(self, other):
        if not isinstance(other, SitePoly):
            return NotImplemented
        if other.n != self.n:
            return False
        try:
            a, b = self._lift(other)
        except ArityError:
            return False
        return a.terms == b.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (xe, ye) in sorted(self.terms, key=lambda k: (sum(k[0]) + sum(k[1]), k)):
            c = self.terms[(xe, ye)]
            mono = "*".join(
                "%s%d" % (kind, j) if p == 1 else "%s%d^%d" % (kind, j, p)
                for kind, e in (("x", xe), ("y", ye))
                for j, p in enumerate(e, 1)
                if p
            )
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append("(%s)*%s" % (cs, mono) if len(c.terms) > 1 else "%s*%s" % (cs, mono))
        return " + ".join(parts)

    def __repr__(self):
        return "SitePoly(n=%d, %s)" % (self.n, self)

    # serialisation

    def to_json(self) -> dict:
        terms = []
        for (xe, ye) in sorted(self.terms):
            terms.append(
                {
                    "x": [j for j, p in enumerate(xe, 1) for _ in range(p)],
                    "y": [j for j, p in enumerate(ye, 1) for _ in range(p)],
                    "coeff": self.terms[(xe, ye)].to_json(),
                }
            )
        return {"n": self.n, "params": list(self.params), "terms": terms}

    @classmethod
    def from_json(cls, obj) -> "SitePoly":
        if isinstance(obj, str):
            obj = json.loads(obj)
        n = int(obj["n"])
        params = tuple(obj.get("params", ()))
        terms: dict = {}
        for t in obj["terms"]:
            xe, ye = [0] * n, [0] * n
            for j in t.get("x", []):
                xe[j - 1] += 1
            for j in t.get("y", []):
                ye[j - 1] += 1
            key = (tuple(xe), tuple(ye))
            c = ParamPoly.from_json(params, t["coeff"])
            terms[key] = terms[key] + c if key in terms else c
        return cls(n, params, terms)


def _indicator(n: int, idx: Iterable[int]) -> tuple:
    e = [0] * n
    for j in idx:
        if not 1 <= j <= n:
            raise IndexError("index %d outside 1..%d" % (j, n))
        e[j - 1] += 1
    return tuple(e)


# ---------------------------------------------------------------------------
# the named operations


def partial_derivative(p: SitePoly, var) -> SitePoly:
    return p.partial(var)


def evaluate(p: SitePoly, assignment: Mapping) -> ComplexRational:
    return p.evaluate(assignment)


def diagonal_restrict(p: SitePoly) -> SitePoly:
    return p.diagonal()


def normalize_proportional(p: SitePoly, q: SitePoly) -> bool:
    """
    True iff ``c * p == q`` for a single nonzero constant c.

    Both polynomials are compared by cross-multiplying against a reference
    coefficient, which is exact for symbolic coefficients too.  With numeric
    coefficients the ratio must also be positive.
    """
    if not p or not q:
        raise ValueError("proportionality is undefined for the zero polynomial")
    if p.n != q.n:
        raise ArityError("site counts differ")
    if set(p.terms) != set(q.terms):
        return False
    ref = min(p.terms)
    pr, qr = p.terms[ref], q.terms[ref]
    for key in p.terms:
        if p.terms[key] * qr != q.terms[key] * pr:
            return False
    if pr.is_constant() and qr.is_constant():
        return qr.constant_value() / pr.constant_value() > 0
    return True


def polys_proportional(*polys: SitePoly) -> bool:
    """Pairwise proportionality of all arguments."""
    return all(normalize_proportional(polys[0], p) for p in polys[1:])
