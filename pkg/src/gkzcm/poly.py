"""Exact multivariate polynomials over the rationals.

A :class:`Polynomial` is an immutable map from exponent tuples to nonzero
``gmpy2.mpq`` coefficients, tied to a :class:`PolyRing` that names the
variables and carries a (possibly multi-row) integer grading.  Monomial
orders are :class:`MonomialOrder` objects whose :meth:`~MonomialOrder.key`
maps an exponent tuple to a tuple that compares like the monomials do.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import lcm
from types import MappingProxyType

from gmpy2 import mpq

from .errors import (
    DimensionError,
    ParseError,
    RingMismatchError,
    UndefinedInputError,
)

LESS, EQUAL, GREATER = -1, 0, 1


def to_rational(c) -> mpq:
    """Convert ints, Fractions, mpq or strings like ``"3/2"`` to mpq."""
    if isinstance(c, Fraction):
        return mpq(c.numerator, c.denominator)
    if isinstance(c, str):
        return mpq(c.strip())
    if isinstance(c, float):
        raise TypeError("floating-point coefficients are not supported")
    return mpq(c)


def format_rational(c) -> str:
    c = mpq(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# monomial orders


class MonomialOrder:
    """A multiplicative total order on exponent vectors.

    ``kind`` is ``"degrevlex"``, ``"lex"`` or ``"weight"``.  A weight order
    compares ``weight . a`` first and breaks ties with ``tie_breaker``
    (degrevlex unless given).  Rational weights are scaled to integers
    internally; the comparison is unchanged by the scaling.
    """

    __slots__ = ("kind", "weight", "tie_breaker", "permutation", "_int_weight", "_cache")

    def __init__(self, kind="degrevlex", weight=None, tie_breaker=None, permutation=None):
        if kind not in ("degrevlex", "lex", "weight"):
            raise ValueError(f"unknown monomial order kind {kind!r}")
        self.kind = kind
        self._cache = {}
        self.permutation = None
        if kind == "weight":
            if weight is None:
                raise ValueError("weight order requires a weight vector")
            if permutation is not None:
                raise ValueError("permute the tie breaker of a weight order instead")
            w = tuple(to_rational(x) for x in weight)
            scale = lcm(*(int(x.denominator) for x in w)) if w else 1
            self.weight = w
            self._int_weight = tuple(int(x * scale) for x in w)
            self.tie_breaker = tie_breaker or MonomialOrder("degrevlex")
        else:
            if weight is not None:
                raise ValueError(f"{kind} order takes no weight")
            self.weight = None
            self._int_weight = None
            self.tie_breaker = None
            if permutation is not None:
                permutation = tuple(permutation)
                if sorted(permutation) != list(range(len(permutation))):
                    raise ValueError(f"not a permutation: {permutation}")
                if permutation != tuple(range(len(permutation))):
                    self.permutation = permutation

    @classmethod
    def degrevlex(cls, permutation=None):
        """Degrevlex with variables ranked in ``permutation`` order (first is largest)."""
        return cls("degrevlex", permutation=permutation)

    @classmethod
    def lex(cls, permutation=None):
        return cls("lex", permutation=permutation)

    @classmethod
    def weighted(cls, weight, tie_breaker=None):
        return cls("weight", weight, tie_breaker)

    @property
    def integer_weight(self):
        return self._int_weight

    def key(self, a):
        """Sort key: ``key(a) < key(b)`` iff ``a < b`` in this order."""
        k = self._cache.get(a)
        if k is None:
            p = self.permutation
            if p is not None and self.kind != "weight":
                if len(p) != len(a):
                    raise DimensionError(
                        f"permutation has length {len(p)}, exponent has length {len(a)}")
                b = tuple(a[i] for i in p)
            else:
                b = a
            if self.kind == "degrevlex":
                k = (sum(b),) + tuple(-x for x in reversed(b))
            elif self.kind == "lex":
                k = tuple(b)
            else:
                w = self._int_weight
                if len(w) != len(a):
                    raise DimensionError(
                        f"weight has length {len(w)}, exponent has length {len(a)}")
                k = (sum(wi * ai for wi, ai in zip(w, a)),) + self.tie_breaker.key(a)
            self._cache[a] = k
        return k

    def compare(self, a, b) -> int:
        if len(a) != len(b):
            raise DimensionError(f"exponents of lengths {len(a)} and {len(b)}")
        ka, kb = self.key(tuple(a)), self.key(tuple(b))
        return LESS if ka < kb else GREATER if ka > kb else EQUAL

    def _ident(self):
        tb = self.tie_breaker._ident() if self.tie_breaker is not None else None
        return (self.kind, self._int_weight, tb, self.permutation)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self._ident() == other._ident()

    def __hash__(self):
        return hash(self._ident())

    def __repr__(self):
        if self.kind == "weight":
            w = " ".join(format_rational(x) for x in self.weight)
            return f"MonomialOrder(weight=[{w}], tie_breaker={self.tie_breaker!r})"
        if self.permutation is not None:
            return f"MonomialOrder({self.kind!r}, permutation={list(self.permutation)})"
        return f"MonomialOrder({self.kind!r})"


DEGREVLEX = MonomialOrder.degrevlex()


def compare_monomials(a, b, order: MonomialOrder) -> int:
    """Return -1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    if order.weight is not None and len(order.weight) != len(a):
        raise DimensionError(
            f"weight has length {len(order.weight)}, exponent has length {len(a)}")
    return order.compare(a, b)


# ---------------------------------------------------------------------------
# monomial helpers on raw exponent tuples


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a, b):
    """True when the monomial ``a`` divides ``b``."""
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mono_lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def mono_coprime(a, b):
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


# ---------------------------------------------------------------------------
# rings


class PolyRing:
    """Commutative polynomial ring over QQ with named variables and a grading.

    ``grading`` is a list of integer rows; column ``j`` is the degree
    vector of variable ``j``.  The default is the standard grading (a single
    row of ones).
    """

    __slots__ = ("names", "grading", "_index")

    def __init__(self, names, grading=None):
        if isinstance(names, str):
            names = names.replace(",", " ").split()
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"variable names must be distinct: {names}")
        for nm in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", nm):
                raise ValueError(f"bad variable name {nm!r}")
        if grading is None:
            grading = [[1] * len(names)]
        grading = tuple(tuple(int(x) for x in row) for row in grading)
        for row in grading:
            if len(row) != len(names):
                raise DimensionError(
                    f"grading row has {len(row)} entries for {len(names)} variables")
        self.names = names
        self.grading = grading
        self._index = {nm: i for i, nm in enumerate(names)}

    @property
    def nvars(self):
        return len(self.names)

    @property
    def is_standard_graded(self):
        return self.grading == (tuple([1] * self.nvars),)

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"no variable {name!r} in {self}") from None

    def var(self, name_or_index):
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return Polynomial(self, {(0,) * self.nvars: 1})

    def constant(self, c):
        return Polynomial(self, {(0,) * self.nvars: c})

    def monomial(self, exp, coeff=1):
        return Polynomial(self, {tuple(exp): coeff})

    def degree_of(self, exp):
        return tuple(sum(g * e for g, e in zip(row, exp)) for row in self.grading)

    def with_grading(self, grading):
        return PolyRing(self.names, grading)

    def extend(self, new_names, degrees=None, front=False):
        """Ring with extra variables; ``degrees`` gives their grading columns."""
        if isinstance(new_names, str):
            new_names = new_names.replace(",", " ").split()
        new_names = tuple(new_names)
        if degrees is None:
            if self.is_standard_graded:
                degrees = [(1,)] * len(new_names)
            else:
                degrees = [(0,) * len(self.grading)] * len(new_names)
        cols = list(zip(*self.grading)) if self.grading else []
        extra = [tuple(d) for d in degrees]
        if front:
            names, cols = new_names + self.names, extra + cols
        else:
            names, cols = self.names + new_names, cols + extra
        grading = [list(r) for r in zip(*cols)] if cols else []
        return PolyRing(names, grading)

    def parse(self, text):
        return parse_polynomial(text, self)

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.names == other.names
                and self.grading == other.grading)

    def __hash__(self):
        return hash((self.names, self.grading))

    def __repr__(self):
        g = "" if self.is_standard_graded else f", grading={[list(r) for r in self.grading]}"
        return f"PolyRing({' '.join(self.names)!r}{g})"


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Immutable exact polynomial; ``terms`` maps exponent tuples to mpq."""

    __slots__ = ("ring", "_terms", "_sorted", "_hash")

    def __init__(self, ring: PolyRing, terms=None):
        d = {}
        n = ring.nvars
        for exp, c in (terms or {}).items():
            exp = tuple(int(x) for x in exp)
            if len(exp) != n:
                raise DimensionError(f"exponent {exp} has wrong length for {ring}")
            if any(x < 0 for x in exp):
                raise ValueError(f"negative exponent {exp}")
            c = to_rational(c)
            if c:
                c = d.get(exp, 0) + c
                if c:
                    d[exp] = c
                else:
                    d.pop(exp, None)
        self.ring = ring
        self._terms = d
        self._sorted = None
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        """Wrap a dict that is already clean; no copying or validation."""
        p = object.__new__(cls)
        p.ring = ring
        p._terms = terms
        p._sorted = None
        p._hash = None
        return p

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_constant(self):
        return all(not any(e) for e in self._terms)

    def constant_coefficient(self):
        return self._terms.get((0,) * self.ring.nvars, mpq(0))

    # -- ordering ---------------------------------------------------------

    def sorted_terms(self, order: MonomialOrder = DEGREVLEX):
        """Terms in decreasing ``order``; cached for the last order used."""
        cached = self._sorted
        if cached is not None and cached[0] == order:
            return cached[1]
        key = order.key
        items = sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True)
        self._sorted = (order, items)
        return items

    def leading_monomial(self, order: MonomialOrder = DEGREVLEX):
        if not self._terms:
            raise UndefinedInputError("zero polynomial has no leading monomial")
        return max(self._terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder = DEGREVLEX):
        return self._terms[self.leading_monomial(order)]

    def leading_term(self, order: MonomialOrder = DEGREVLEX):
        m = self.leading_monomial(order)
        return Polynomial._raw(self.ring, {m: self._terms[m]})

    def monic(self, order: MonomialOrder = DEGREVLEX):
        if not self._terms:
            return self
        c = mpq(self.leading_coefficient(order))
        return Polynomial._raw(self.ring, {m: v / c for m, v in self._terms.items()})

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction, str)) or type(other) is type(mpq(0)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = dict(self._terms)
        for m, c in other._terms.items():
            v = d.get(m, 0) + c
            if v:
                d[m] = v
            else:
                d.pop(m, None)
        return Polynomial._raw(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c):
        c = to_rational(c)
        if not c:
            return self.ring.zero()
        return Polynomial._raw(self.ring, {m: v * c for m, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            try:
                return self.scale(other)
            except (TypeError, ValueError):
                return NotImplemented
        return multiply(self, other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_monomial(self, exp, coeff=1):
        coeff = to_rational(coeff)
        return Polynomial._raw(
            self.ring, {mono_mul(m, exp): c * coeff for m, c in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)) or type(other) is type(mpq(0)):
            return self == self.ring.constant(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    # -- degrees ----------------------------------------------------------

    def total_degree(self):
        if not self._terms:
            return -1
        return max(sum(m) for m in self._terms)

    def weighted_degree(self, w):
        """Maximal ``w``-degree of a term (``deg^w``)."""
        if not self._terms:
            raise UndefinedInputError("zero polynomial has no degree")
        w = [to_rational(x) for x in w]
        if len(w) != self.ring.nvars:
            raise DimensionError("weight length does not match ring")
        return max(sum(wi * ei for wi, ei in zip(w, m)) for m in self._terms)

    def initial_form(self, w):
        return initial_form(self, w)

    def grading_degree(self):
        return grading_degree(self)

    def is_homogeneous(self):
        return not self._terms or grading_degree(self) is not None

    def variables(self):
        """Indices of variables occurring in some term."""
        used = set()
        for m in self._terms:
            used.update(i for i, e in enumerate(m) if e)
        return sorted(used)

    # -- printing ---------------------------------------------------------

    def format(self, order: MonomialOrder = DEGREVLEX):
        if not self._terms:
            return "0"
        pieces = []
        for m, c in self.sorted_terms(order):
            mono = _format_monomial(m, self.ring.names)
            neg = c < 0
            a = -c if neg else c
            if mono == "1":
                body = format_rational(a)
            elif a == 1:
                body = mono
            else:
                body = f"{format_rational(a)}*{mono}"
            pieces.append((neg, body))
        out = ("-" if pieces[0][0] else "") + pieces[0][1]
        for neg, body in pieces[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Polynomial({self.format()!r})"


def _format_monomial(exp, names):
    parts = []
    for e, nm in zip(exp, names):
        if e == 1:
            parts.append(nm)
        elif e > 1:
            parts.append(f"{nm}^{e}")
    return "*".join(parts) if parts else "1"


def multiply(f: Polynomial, g: Polynomial) -> Polynomial:
    """Product of two polynomials in the same ring."""
    if f.ring != g.ring:
        raise RingMismatchError(f"{f.ring} vs {g.ring}")
    d = {}
    for m1, c1 in f._terms.items():
        for m2, c2 in g._terms.items():
            m = tuple(x + y for x, y in zip(m1, m2))
            v = d.get(m, 0) + c1 * c2
            if v:
                d[m] = v
            else:
                d.pop(m, None)
    return Polynomial._raw(f.ring, d)


def initial_form(f: Polynomial, w) -> Polynomial:
    """Sum of the terms of ``f`` of maximal ``w``-degree."""
    if not f._terms:
        raise UndefinedInputError("initial form of the zero polynomial")
    w = [to_rational(x) for x in w]
    if len(w) != f.ring.nvars:
        raise DimensionError(f"weight of length {len(w)} for {f.ring.nvars} variables")
    degs = {m: sum(wi * ei for wi, ei in zip(w, m)) for m in f._terms}
    top = max(degs.values())
    return Polynomial._raw(f.ring, {m: c for m, c in f._terms.items() if degs[m] == top})


def grading_degree(f: Polynomial):
    """Common multidegree of all terms, or ``None`` when ``f`` is inhomogeneous.

    The zero polynomial has no well-defined degree and also gives ``None``.
    """
    degs = {f.ring.degree_of(m) for m in f._terms}
    if len(degs) != 1:
        return None
    return degs.pop()


# ---------------------------------------------------------------------------
# text syntax

_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_FACTOR = re.compile(r"^(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?)$")


def parse_terms(text):
    """Split ``text`` into signed terms, each a coefficient and factor list.

    Factors are ``(name, power)`` pairs in the order written, so callers with
    noncommuting variables can multiply them left to right.
    """
    s = text.strip()
    if not s:
        raise ParseError("empty polynomial text")
    s = s.replace("**", "^")
    tokens = _TERM_SPLIT.split(s)
    if tokens[0] == "":
        tokens = tokens[1:]
    else:
        tokens = ["+"] + tokens
    if len(tokens) % 2:
        raise ParseError(f"dangling operator in {text!r}")
    out = []
    for sign, body in zip(tokens[::2], tokens[1::2]):
        if not body:
            raise ParseError(f"empty term in {text!r}")
        coeff = mpq(1) if sign == "+" else mpq(-1)
        factors = []
        for piece in body.replace(" ", "*").split("*"):
            if not piece:
                raise ParseError(f"empty factor in {text!r}")
            mt = _FACTOR.match(piece)
            if not mt:
                raise ParseError(f"cannot parse factor {piece!r}")
            if mt.group(1) is not None:
                coeff *= mpq(mt.group(1))
            else:
                factors.append((mt.group(2), int(mt.group(3) or 1)))
        out.append((coeff, factors))
    return out


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    """Parse text such as ``"3/2*x1^2*d2 - x1 + 5"`` in ``ring``."""
    if text.strip() == "0":
        return ring.zero()
    terms = {}
    n = ring.nvars
    for coeff, factors in parse_terms(text):
        e = [0] * n
        for name, k in factors:
            try:
                e[ring.index(name)] += k
            except ValueError:
                raise ParseError(f"unknown variable {name!r}") from None
        e = tuple(e)
        terms[e] = terms.get(e, 0) + coeff
    return Polynomial(ring, terms)
