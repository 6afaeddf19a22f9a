"""Commutative Groebner bases and the ideal operations built on them."""

from __future__ import annotations

from itertools import combinations
from typing import NamedTuple

from . import _engine
from .errors import (
    EmptyVarietyError,
    RingMismatchError,
    UndefinedInputError,
    UnsupportedWeightError,
)
from .poly import DEGREVLEX, MonomialOrder, Polynomial, PolyRing, initial_form, to_rational

MAX_DIMENSION_VARS = 16


class Ideal:
    """Ideal of a commutative :class:`PolyRing` given by generators.

    Zero generators are dropped.  Groebner bases are cached per order.
    """

    def __init__(self, generators, ring: PolyRing = None):
        gens = [g for g in generators]
        if ring is None:
            if not gens:
                raise ValueError("ring required for an ideal without generators")
            ring = gens[0].ring
        for g in gens:
            if not isinstance(g, Polynomial):
                raise TypeError(f"generator {g!r} is not a Polynomial")
            if g.ring != ring:
                raise RingMismatchError(f"generator in {g.ring}, ideal in {ring}")
        self.ring = ring
        self.generators = tuple(g for g in gens if g)
        self._gb = {}

    @classmethod
    def parse(cls, texts, ring):
        if isinstance(texts, str):
            texts = [t for t in texts.split(",") if t.strip()]
        return cls([ring.parse(t) for t in texts], ring)

    @classmethod
    def from_groebner(cls, G: "GroebnerBasis") -> "Ideal":
        """Ideal generated by ``G`` with ``G`` cached as its basis for ``G.order``."""
        I = cls(G.elements, G.ring)
        I._gb[G.order] = G
        return I

    def groebner(self, order: MonomialOrder = DEGREVLEX) -> "GroebnerBasis":
        gb = self._gb.get(order)
        if gb is None:
            gb = self._gb[order] = buchberger(self, order)
        return gb

    def __add__(self, other):
        if isinstance(other, Ideal):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return Ideal(self.generators + other.generators, self.ring)
        return Ideal(self.generators + tuple(other), self.ring)

    def is_unit(self):
        return compact_groebner(self).is_unit()

    def is_zero(self):
        return not self.generators

    def contains(self, f):
        return compact_groebner(self).contains(f)

    __contains__ = contains

    def equals(self, other):
        return ideal_equal(self, other)

    def is_homogeneous(self):
        return all(g.is_homogeneous() for g in self.generators)

    def map_into(self, ring: PolyRing, positions=None):
        """Image under inclusion of variables; ``positions[i]`` is the index
        of this ring's variable ``i`` in ``ring`` (defaults to name match)."""
        if positions is None:
            positions = [ring.index(nm) for nm in self.ring.names]
        n = ring.nvars
        out = []
        for g in self.generators:
            terms = {}
            for m, c in g.terms.items():
                e = [0] * n
                for i, k in enumerate(m):
                    if k:
                        e[positions[i]] += k
                terms[tuple(e)] = c
            out.append(Polynomial(ring, terms))
        return Ideal(out, ring)

    def format(self, order: MonomialOrder = DEGREVLEX):
        return ", ".join(g.format(order) for g in self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __repr__(self):
        return f"Ideal([{self.format()}])"


class GroebnerBasis:
    """Reduced Groebner basis: monic elements sorted by leading monomial."""

    def __init__(self, elements, order: MonomialOrder, ring: PolyRing, reduced=True):
        self.elements = tuple(elements)
        self.order = order
        self.ring = ring
        self.reduced = reduced
        self._alg = _engine.CommutativeAlgebra(order)
        self._elts = [_engine.Element(g.leading_monomial(order), dict(g.terms))
                      for g in self.elements]

    @property
    def leading_monomials(self):
        return [e.lm for e in self._elts]

    def is_unit(self):
        return any(not any(lm) for lm in self.leading_monomials)

    def reduce(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise RingMismatchError(f"{f.ring} vs {self.ring}")
        return Polynomial._raw(self.ring, _engine.reduce(f.terms, self._elts, self._alg))

    def contains(self, f: Polynomial) -> bool:
        return not self.reduce(f)

    def ideal(self) -> Ideal:
        return Ideal(self.elements, self.ring)

    def is_groebner(self) -> bool:
        return _engine.is_groebner([dict(g.terms) for g in self.elements], self._alg)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"GroebnerBasis([{', '.join(str(g) for g in self.elements)}], {self.order!r})"


def _as_ideal(I, ring=None):
    if isinstance(I, Ideal):
        return I
    return Ideal(list(I), ring)


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    """Remainder of ``f`` on division by ``G``."""
    return G.reduce(f)


def buchberger(I, order: MonomialOrder = DEGREVLEX) -> GroebnerBasis:
    """Reduced Groebner basis of ``I``; the unit ideal gives ``[1]``."""
    I = _as_ideal(I)
    alg = _engine.CommutativeAlgebra(order)
    gb = _engine.buchberger([dict(g.terms) for g in I.generators], alg)
    return GroebnerBasis([Polynomial._raw(I.ring, t) for t in gb], order, I.ring)


def last_variable_orders(nvars):
    """Degrevlex orders: the ring order, then each variable moved to the end."""
    orders = [DEGREVLEX]
    for v in range(nvars):
        if v != nvars - 1:
            orders.append(MonomialOrder.degrevlex([i for i in range(nvars) if i != v] + [v]))
    return orders


def compact_groebner(I: Ideal) -> GroebnerBasis:
    """Reduced basis for whichever degrevlex variable order gives the cheapest run.

    Basis size and the cost of everything built on it (syzygy frames in
    particular) depend strongly on which variable is smallest.  The result is
    cached on ``I`` under its order.
    """
    if not I.generators:
        return I.groebner()
    orders = last_variable_orders(I.ring.nvars)
    for o in orders:
        if o in I._gb:
            return I._gb[o]
    algs = [_engine.CommutativeAlgebra(o) for o in orders]
    idx, gb = _engine.fastest_basis([dict(g.terms) for g in I.generators], algs)
    G = GroebnerBasis([Polynomial._raw(I.ring, t) for t in gb], orders[idx], I.ring)
    I._gb[orders[idx]] = G
    return G


def check_groebner(G: GroebnerBasis, generators=()) -> bool:
    """All S-pairs reduce to zero and every listed generator reduces to zero."""
    return G.is_groebner() and all(G.contains(g) for g in generators)


def weight_order(w, tie_breaker=None):
    return MonomialOrder.weighted(w, tie_breaker)


def initial_ideal(I: Ideal, w) -> Ideal:
    """``in_w(I)`` for a strictly positive weight ``w``."""
    w = [to_rational(x) for x in w]
    if len(w) != I.ring.nvars:
        raise UnsupportedWeightError(f"weight of length {len(w)} for {I.ring.nvars} variables")
    if any(x <= 0 for x in w):
        raise UnsupportedWeightError(f"weight entries must be positive, got {w}")
    G = I.groebner(weight_order(w))
    return Ideal([initial_form(g, w) for g in G.elements], I.ring)


def _var_indices(ring, vars_):
    out = []
    for v in vars_:
        out.append(v if isinstance(v, int) else ring.index(v))
    return sorted(set(out))


def subring(ring: PolyRing, drop) -> PolyRing:
    keep = [i for i in range(ring.nvars) if i not in set(drop)]
    names = [ring.names[i] for i in keep]
    grading = [[row[i] for i in keep] for row in ring.grading]
    return PolyRing(names, grading)


def eliminate(I: Ideal, drop_vars) -> Ideal:
    """``I`` intersected with the subring not containing ``drop_vars``.

    Uses the weight order putting weight 1 on the dropped variables,
    refined by degrevlex, which is an elimination order for them.  The
    degrevlex variable order is the cheapest of :func:`last_variable_orders`.
    """
    ring = I.ring
    drop = _var_indices(ring, drop_vars)
    w = [1 if i in drop else 0 for i in range(ring.nvars)]
    orders = [MonomialOrder.weighted(w, o) for o in last_variable_orders(ring.nvars)]
    if I.generators:
        algs = [_engine.CommutativeAlgebra(o) for o in orders]
        idx, gb = _engine.fastest_basis([dict(g.terms) for g in I.generators], algs)
        G = GroebnerBasis([Polynomial._raw(ring, t) for t in gb], orders[idx], ring)
    else:
        G = I.groebner(orders[0])
    sub = subring(ring, drop)
    keep = [i for i in range(ring.nvars) if i not in drop]
    out = []
    for g in G.elements:
        if all(not any(m[i] for i in drop) for m in g.terms):
            out.append(Polynomial._raw(sub, {tuple(m[i] for i in keep): c
                                             for m, c in g.terms.items()}))
    return Ideal(out, sub)


def _fresh_name(ring, base="t"):
    name = base
    k = 0
    while name in ring.names:
        k += 1
        name = f"{base}{k}"
    return name


def _lift(f: Polynomial, big: PolyRing, front=1):
    return Polynomial._raw(big, {(0,) * front + m: c for m, c in f.terms.items()})


def saturate(I: Ideal, f: Polynomial) -> Ideal:
    """``(I : f^infinity)`` via elimination of ``t`` from ``I + <1 - t f>``."""
    if not f:
        raise UndefinedInputError("saturation by the zero polynomial")
    ring = I.ring
    big = ring.extend([_fresh_name(ring)], front=True)
    gens = [_lift(g, big) for g in I.generators]
    tf = Polynomial._raw(big, {(1,) + m: -c for m, c in f.terms.items()})
    gens.append(tf + big.one())
    J = eliminate(Ideal(gens, big), [0])
    return Ideal(J.generators, ring)


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """``I`` intersected with ``J`` via ``t I + (1 - t) J``."""
    ring = I.ring
    if J.ring != ring:
        raise RingMismatchError(f"{I.ring} vs {J.ring}")
    big = ring.extend([_fresh_name(ring)], front=True)
    t = big.var(0)
    gens = [t * _lift(g, big) for g in I.generators]
    gens += [(big.one() - t) * _lift(g, big) for g in J.generators]
    K = eliminate(Ideal(gens, big), [0])
    return Ideal(K.generators, ring)


def divide_exact(g: Polynomial, f: Polynomial) -> Polynomial:
    alg = _engine.CommutativeAlgebra(DEGREVLEX)
    q = _engine.divide(dict(g.terms), dict(f.terms), alg)
    if q is None:
        raise ValueError(f"{f} does not divide {g}")
    return Polynomial._raw(g.ring, q)


def ideal_quotient(I: Ideal, f: Polynomial) -> Ideal:
    """``(I : f) = {g : g f in I}``."""
    if not f:
        raise UndefinedInputError("ideal quotient by the zero polynomial")
    if f.ring != I.ring:
        raise RingMismatchError(f"{f.ring} vs {I.ring}")
    K = intersect(I, Ideal([f], I.ring))
    return Ideal([divide_exact(g, f) for g in K.generators], I.ring)


def ideal_contains(I: Ideal, J: Ideal) -> bool:
    """True when ``J`` is contained in ``I``."""
    if I.ring != J.ring:
        raise RingMismatchError(f"{I.ring} vs {J.ring}")
    G = compact_groebner(I)
    return all(G.contains(g) for g in J.generators)


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    if I.ring != J.ring:
        raise RingMismatchError(f"{I.ring} vs {J.ring}")
    return ideal_contains(I, J) and ideal_contains(J, I)


def monomial_dimension(monomials, nvars, max_vars=MAX_DIMENSION_VARS) -> int:
    """Dimension of ``k[x]/<monomials>``.

    The largest set ``V`` of variables such that no generator is supported
    inside ``V``; found as ``n`` minus a smallest set hitting every support.
    Exhaustive over subsets, so rings are capped at ``max_vars`` variables.
    """
    if nvars > max_vars:
        raise ValueError(f"dimension search limited to {max_vars} variables, got {nvars}")
    supports = set()
    for m in monomials:
        s = frozenset(i for i, e in enumerate(m) if e)
        if not s:
            raise EmptyVarietyError("monomial ideal contains 1")
        supports.add(s)
    minimal = [s for s in supports if not any(t < s for t in supports)]
    masks = [sum(1 << i for i in s) for s in minimal]
    for k in range(nvars + 1):
        for cover in combinations(range(nvars), k):
            cm = sum(1 << i for i in cover)
            if all(cm & mk for mk in masks):
                return nvars - k
    raise AssertionError("unreachable: all variables hit every support")


def krull_dimension(I: Ideal, max_vars=MAX_DIMENSION_VARS) -> int:
    """Krull dimension of ``ring / I`` from a degrevlex initial ideal."""
    G = compact_groebner(I)
    if G.is_unit():
        raise EmptyVarietyError("unit ideal: the quotient ring is zero")
    return monomial_dimension(G.leading_monomials, I.ring.nvars, max_vars)


class RegularSequenceResult(NamedTuple):
    is_regular: bool
    failed_at: int | None  # 1-based index of the first failing element

    def __bool__(self):
        return self.is_regular


def is_regular_sequence(fs, I: Ideal) -> RegularSequenceResult:
    """Whether ``fs`` is a regular sequence on ``ring / I``.

    Element ``k`` fails when ``J = I + <f_1..f_{k-1}>`` has ``(J : f_k) != J``,
    or when adding it makes the quotient zero.
    """
    J = I
    for k, f in enumerate(fs, start=1):
        if J.is_unit():
            return RegularSequenceResult(False, k)
        Q = ideal_quotient(J, f)
        if not ideal_contains(J, Q):
            return RegularSequenceResult(False, k)
        J = J + [f]
    if J.is_unit():
        return RegularSequenceResult(False, len(fs))
    return RegularSequenceResult(True, None)
