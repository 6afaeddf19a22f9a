"""The Weyl algebra D, its homogenization D^(h), and left Groebner bases.

Elements are stored in normal order: the exponent tuple
``(a_1..a_n, b_1..b_n[, l])`` stands for ``x^a d^b h^l`` with every ``x``
to the left of every ``d``.  Products are renormalized with
``d_i x_i = x_i d_i + 1`` (``+ h^2`` in D^(h), where ``h`` is central).

Orders are a weight ``(u, v)`` on ``(x, d)`` (weight 0 on ``h``) refined by
degrevlex on the full exponent.  When every ``u_i + v_i > 0`` and all entries
are nonnegative this is a term order under which the leading monomial of a
product is the sum of the leading monomials, since each commutation
``d_i x_i -> x_i d_i`` trades a monomial for ones of weight lower by
``u_i + v_i``.  That is what makes the commutative division and pair
criteria below terminate and agree with left ideal membership.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from math import comb
from typing import NamedTuple

from . import _engine
from .errors import ParseError, RingMismatchError, UndefinedInputError, UnsupportedWeightError
from .groebner import GroebnerBasis, Ideal
from .poly import (
    MonomialOrder,
    PolyRing,
    Polynomial,
    _format_monomial,
    format_rational,
    parse_terms,
    to_rational,
)


class WeylAlgebra:
    """``D = Q[x_1..x_n]<d_1..d_n>``, or ``D^(h)`` when ``homogenized``."""

    __slots__ = ("n", "homogenized", "names", "_index")

    def __init__(self, n, homogenized=False, x_names=None, d_names=None, h_name="h"):
        self.n = n
        self.homogenized = homogenized
        xs = list(x_names or [f"x{i + 1}" for i in range(n)])
        ds = list(d_names or [f"d{i + 1}" for i in range(n)])
        names = xs + ds + ([h_name] if homogenized else [])
        if len(set(names)) != len(names) or len(xs) != n or len(ds) != n:
            raise ValueError(f"bad variable names {names}")
        self.names = tuple(names)
        self._index = {nm: i for i, nm in enumerate(names)}

    @property
    def nvars(self):
        return len(self.names)

    def homogenization(self):
        if self.homogenized:
            return self
        return WeylAlgebra(self.n, True, self.names[:self.n], self.names[self.n:])

    def dehomogenization(self):
        if not self.homogenized:
            return self
        return WeylAlgebra(self.n, False, self.names[:self.n], self.names[self.n:2 * self.n])

    def graded_ring(self) -> PolyRing:
        """The commutative ring ``S = k[x, d]`` (``S[h]`` for D^(h))."""
        return PolyRing(self.names)

    def element(self, terms):
        return WeylElement(self, terms)

    def zero(self):
        return WeylElement(self, {})

    def one(self):
        return WeylElement(self, {(0,) * self.nvars: 1})

    def gen(self, name):
        i = self._index.get(name)
        if i is None:
            raise ValueError(f"no generator {name!r} in {self}")
        e = [0] * self.nvars
        e[i] = 1
        return WeylElement(self, {tuple(e): 1})

    def x(self, i):
        return self.gen(self.names[i - 1])

    def d(self, i):
        return self.gen(self.names[self.n + i - 1])

    def h(self):
        if not self.homogenized:
            raise ValueError("h only exists in the homogenized Weyl algebra")
        return self.gen(self.names[-1])

    def parse(self, text):
        return parse_weyl(text, self)

    def __eq__(self, other):
        return (isinstance(other, WeylAlgebra) and self.names == other.names
                and self.homogenized == other.homogenized)

    def __hash__(self):
        return hash((self.names, self.homogenized))

    def __repr__(self):
        kind = "D^(h)" if self.homogenized else "D"
        return f"WeylAlgebra({kind}, n={self.n})"


@lru_cache(maxsize=1 << 18)
def _mono_product(a, b, n, homog):
    """Normal-ordered expansion of ``x^a1 d^b1 * x^a2 d^b2`` as a tuple of terms."""
    hits = [i for i in range(n) if a[n + i] and b[i]]
    base = [x + y for x, y in zip(a, b)]
    if not hits:
        return ((tuple(base), 1),)
    ranges = [range(min(a[n + i], b[i]) + 1) for i in hits]
    out = []
    for ks in product(*ranges):
        coeff = 1
        e = list(base)
        for i, k in zip(hits, ks):
            if k:
                bi, ai = a[n + i], b[i]
                # d^bi x^ai = sum_k C(bi,k) C(ai,k) k! x^(ai-k) d^(bi-k)
                coeff *= comb(bi, k) * comb(ai, k) * _fact(k)
                e[i] -= k
                e[n + i] -= k
                if homog:
                    e[2 * n] += 2 * k
        out.append((tuple(e), coeff))
    return tuple(out)


@lru_cache(maxsize=64)
def _fact(k):
    r = 1
    for i in range(2, k + 1):
        r *= i
    return r


class WeylElement:
    """Immutable normally ordered element of a :class:`WeylAlgebra`."""

    __slots__ = ("algebra", "_terms")

    def __init__(self, algebra: WeylAlgebra, terms=None):
        d = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != algebra.nvars or any(x < 0 for x in e):
                raise ValueError(f"bad exponent {e} for {algebra}")
            c = to_rational(c)
            if c:
                v = d.get(e, 0) + c
                if v:
                    d[e] = v
                else:
                    d.pop(e, None)
        self.algebra = algebra
        self._terms = d

    @classmethod
    def _raw(cls, algebra, terms):
        p = object.__new__(cls)
        p.algebra = algebra
        p._terms = terms
        return p

    @property
    def terms(self):
        return dict(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def _check(self, other):
        if not isinstance(other, WeylElement):
            return self.algebra.one().scale(other)
        if other.algebra != self.algebra:
            raise RingMismatchError(f"{self.algebra} vs {other.algebra}")
        return other

    def __add__(self, other):
        other = self._check(other)
        d = dict(self._terms)
        for m, c in other._terms.items():
            v = d.get(m, 0) + c
            if v:
                d[m] = v
            else:
                d.pop(m, None)
        return WeylElement._raw(self.algebra, d)

    __radd__ = __add__

    def __neg__(self):
        return WeylElement._raw(self.algebra, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) + (-self)

    def scale(self, c):
        c = to_rational(c)
        if not c:
            return self.algebra.zero()
        return WeylElement._raw(self.algebra, {m: v * c for m, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, WeylElement):
            return weyl_multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k):
        out = self.algebra.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, WeylElement):
            return self.algebra == other.algebra and self._terms == other._terms
        try:
            return self == self.algebra.one().scale(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.algebra, frozenset(self._terms.items())))

    def total_degree(self):
        return max((sum(m) for m in self._terms), default=-1)

    def format(self, order=None):
        if not self._terms:
            return "0"
        order = order or MonomialOrder.degrevlex()
        items = sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=True)
        out = ""
        for k, (m, c) in enumerate(items):
            mono = _format_monomial(m, self.algebra.names)
            a = -c if c < 0 else c
            body = format_rational(a) if mono == "1" else (
                mono if a == 1 else f"{format_rational(a)}*{mono}")
            if k == 0:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"WeylElement({self.format()!r})"


def weyl_multiply(P: WeylElement, Q: WeylElement) -> WeylElement:
    """Product in D or D^(h), returned in normal order."""
    if P.algebra != Q.algebra:
        raise RingMismatchError(f"{P.algebra} vs {Q.algebra}")
    alg = P.algebra
    n, homog = alg.n, alg.homogenized
    d = {}
    for a, ca in P._terms.items():
        for b, cb in Q._terms.items():
            c0 = ca * cb
            for m, k in _mono_product(a, b, n, homog):
                v = d.get(m, 0) + c0 * k
                if v:
                    d[m] = v
                else:
                    d.pop(m, None)
    return WeylElement._raw(alg, d)


def parse_weyl(text: str, algebra: WeylAlgebra) -> WeylElement:
    """Parse text; the factors of each term are multiplied left to right."""
    if text.strip() == "0":
        return algebra.zero()
    total = algebra.zero()
    for coeff, factors in parse_terms(text):
        term = algebra.one().scale(coeff)
        for name, k in factors:
            try:
                g = algebra.gen(name)
            except ValueError:
                raise ParseError(f"unknown variable {name!r}") from None
            for _ in range(k):
                term = term * g
        total = total + term
    return total


# ---------------------------------------------------------------------------
# weights and orders


class AdmissibleWeight(NamedTuple):
    """Weight ``u`` on the x's and ``v`` on the d's; ``h`` gets weight 0."""

    u: tuple
    v: tuple

    @classmethod
    def ones(cls, n):
        return cls((1,) * n, (1,) * n)

    def vector(self, homogenized=False):
        return tuple(self.u) + tuple(self.v) + ((0,) if homogenized else ())


def check_weight(w: AdmissibleWeight, n: int):
    u = [to_rational(x) for x in w.u]
    v = [to_rational(x) for x in w.v]
    if len(u) != n or len(v) != n:
        raise UnsupportedWeightError(f"weight lengths {len(u)}, {len(v)} for n={n}")
    if any(a.denominator != 1 for a in u + v):
        raise UnsupportedWeightError("Weyl weights must be integers")
    if any(a + b <= 0 for a, b in zip(u, v)):
        raise UnsupportedWeightError("weight must satisfy u_i + v_i > 0 for all i")
    if any(a < 0 for a in u + v):
        # negative entries need homogenized division to terminate
        raise UnsupportedWeightError("negative weight entries are not supported")


def weyl_order(w: AdmissibleWeight, algebra: WeylAlgebra, permutation=None) -> MonomialOrder:
    """``w`` refined by degrevlex, optionally with permuted variables."""
    check_weight(w, algebra.n)
    return MonomialOrder.weighted(w.vector(algebra.homogenized),
                                  MonomialOrder.degrevlex(permutation))


class _WeylEngineAlgebra:
    commutative = False

    def __init__(self, algebra: WeylAlgebra, order: MonomialOrder):
        self.algebra = algebra
        self.order = order
        self.key = order.key
        self._neg = {}
        self._n = algebra.n
        self._h = algebra.homogenized

    def negkey(self, m):
        k = self._neg.get(m)
        if k is None:
            k = self._neg[m] = tuple(-x for x in self.key(m))
        return k

    def mul_term(self, q, terms):
        n, h = self._n, self._h
        for m, c in terms.items():
            for mm, k in _mono_product(q, m, n, h):
                yield mm, c * k


def _engine_alg(algebra, w, permutation=None):
    return _WeylEngineAlgebra(algebra, weyl_order(w, algebra, permutation))


# ---------------------------------------------------------------------------
# ideals and Groebner bases


class WeylIdeal:
    """Left ideal of a Weyl algebra given by generators."""

    side = "left"

    def __init__(self, generators, algebra: WeylAlgebra = None):
        gens = list(generators)
        if algebra is None:
            if not gens:
                raise ValueError("algebra required for an ideal without generators")
            algebra = gens[0].algebra
        for g in gens:
            if g.algebra != algebra:
                raise RingMismatchError(f"generator in {g.algebra}, ideal in {algebra}")
        self.algebra = algebra
        self.generators = tuple(g for g in gens if g)
        self._gb = {}
        self._compact = {}

    def groebner(self, w: AdmissibleWeight = None):
        w = w or AdmissibleWeight.ones(self.algebra.n)
        key = (tuple(w.u), tuple(w.v))
        gb = self._gb.get(key)
        if gb is None:
            gb = self._gb[key] = weyl_buchberger(self, w)
        return gb

    def compact_groebner(self, w: AdmissibleWeight = None):
        """``(order, basis)`` for the cheapest degrevlex tie-break variable order.

        Every candidate refines ``w``, so all give the same initial ideal.
        """
        w = w or AdmissibleWeight.ones(self.algebra.n)
        key = (tuple(w.u), tuple(w.v))
        hit = self._compact.get(key)
        if hit is None:
            N = self.algebra.nvars
            perms = [None] + [[i for i in range(N) if i != v] + [v] for v in range(N - 1)]
            algs = [_engine_alg(self.algebra, w, p) for p in perms]
            idx, gb = _engine.fastest_basis([dict(g._terms) for g in self.generators], algs)
            basis = [WeylElement._raw(self.algebra, t) for t in gb]
            hit = self._compact[key] = (algs[idx].order, basis)
            if perms[idx] is None:
                self._gb.setdefault(key, basis)
        return hit

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __repr__(self):
        return f"WeylIdeal([{', '.join(map(str, self.generators))}])"


def weyl_normal_form(P: WeylElement, G, w: AdmissibleWeight = None) -> WeylElement:
    """Remainder of ``P`` on left division by ``G`` under the ``w``-order."""
    alg = P.algebra
    w = w or AdmissibleWeight.ones(alg.n)
    ea = _engine_alg(alg, w)
    elems = []
    for g in G:
        if g.algebra != alg:
            raise RingMismatchError(f"{g.algebra} vs {alg}")
        if g:
            elems.append(_engine.make_monic(dict(g._terms), ea))
    return WeylElement._raw(alg, _engine.reduce(P._terms, elems, ea))


def weyl_buchberger(I: WeylIdeal, w: AdmissibleWeight = None):
    """Reduced left Groebner basis of ``I`` under the ``w``-refined order."""
    alg = I.algebra
    w = w or AdmissibleWeight.ones(alg.n)
    ea = _engine_alg(alg, w)
    gb = _engine.buchberger([dict(g._terms) for g in I.generators], ea)
    return [WeylElement._raw(alg, t) for t in gb]


def weyl_is_groebner(G, w: AdmissibleWeight = None) -> bool:
    """Check that every S-pair of ``G`` left-reduces to zero."""
    G = [g for g in G if g]
    if not G:
        return True
    alg = G[0].algebra
    w = w or AdmissibleWeight.ones(alg.n)
    return _engine.is_groebner([dict(g._terms) for g in G], _engine_alg(alg, w))


def weyl_initial_form(P: WeylElement, w: AdmissibleWeight = None) -> Polynomial:
    """``in_(u,v)(P)`` read as a commutative polynomial in ``S`` (or ``S[h]``)."""
    if not P:
        raise UndefinedInputError("initial form of zero")
    alg = P.algebra
    w = w or AdmissibleWeight.ones(alg.n)
    vec = [to_rational(x) for x in w.vector(alg.homogenized)]
    degs = {m: sum(a * b for a, b in zip(vec, m)) for m in P._terms}
    top = max(degs.values())
    return Polynomial._raw(alg.graded_ring(),
                           {m: c for m, c in P._terms.items() if degs[m] == top})


def gr_initial_ideal(I: WeylIdeal, w: AdmissibleWeight = None) -> Ideal:
    """``in_(u,v)(I)`` in the commutative ring ``S`` (``S[h]`` for D^(h))."""
    w = w or AdmissibleWeight.ones(I.algebra.n)
    order, G = I.compact_groebner(w)
    S = I.algebra.graded_ring()
    forms = [weyl_initial_form(g, w) for g in G]
    if order.integer_weight == (1,) * S.nvars:
        # a (1,...,1)-refined degrevlex order is plain degrevlex, so the
        # initial forms are already its reduced basis
        return Ideal.from_groebner(GroebnerBasis(forms, order.tie_breaker, S))
    return Ideal(forms, S)


def to_commutative(P: WeylElement) -> Polynomial:
    """Read the normally ordered terms of ``P`` as a polynomial in ``S``."""
    return Polynomial._raw(P.algebra.graded_ring(), dict(P._terms))


def from_commutative(f: Polynomial, algebra: WeylAlgebra) -> WeylElement:
    """Normally ordered element with the same terms as ``f``."""
    if f.ring.nvars != algebra.nvars:
        raise RingMismatchError(f"{f.ring} vs {algebra}")
    return WeylElement._raw(algebra, dict(f.terms))


def homogenize(P: WeylElement) -> WeylElement:
    """Balance every term to the top total degree with powers of ``h``."""
    alg = P.algebra
    if alg.homogenized:
        raise ValueError("element is already in D^(h)")
    H = alg.homogenization()
    if not P:
        return H.zero()
    top = max(sum(m) for m in P._terms)
    return WeylElement._raw(H, {m + (top - sum(m),): c for m, c in P._terms.items()})


def dehomogenize(P: WeylElement) -> WeylElement:
    """Set ``h = 1``."""
    alg = P.algebra
    if not alg.homogenized:
        raise ValueError("element is not in D^(h)")
    D = alg.dehomogenization()
    d = {}
    for m, c in P._terms.items():
        e = m[:-1]
        v = d.get(e, 0) + c
        if v:
            d[e] = v
        else:
            d.pop(e, None)
    return WeylElement._raw(D, d)


def homogenize_ideal(I: WeylIdeal) -> WeylIdeal:
    """The homogenized ideal ``I^(h)`` in D^(h).

    Homogenizing the generators alone can miss elements; homogenizing a
    Groebner basis for the (1,1) order, which refines total degree, gives
    all of ``I^(h)``.
    """
    _, G = I.compact_groebner(AdmissibleWeight.ones(I.algebra.n))
    H = I.algebra.homogenization()
    return WeylIdeal([homogenize(g) for g in G], H)


def euler_operator(row, algebra: WeylAlgebra, beta=0) -> WeylElement:
    """``sum_j row[j] x_j d_j - beta``."""
    n = algebra.n
    if len(row) != n:
        raise ValueError(f"row of length {len(row)} for n={n}")
    terms = {}
    for j, a in enumerate(row):
        if a:
            e = [0] * algebra.nvars
            e[j] = 1
            e[n + j] = 1
            terms[tuple(e)] = a
    beta = to_rational(beta)
    if beta:
        terms[(0,) * algebra.nvars] = -beta
    if algebra.homogenized and beta:
        terms[(0,) * (algebra.nvars - 1) + (2,)] = terms.pop((0,) * algebra.nvars)
    return WeylElement(algebra, terms)

