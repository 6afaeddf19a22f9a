"""Shared fixtures data and independent oracles for the test suite."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from functools import lru_cache
from math import comb

import sympy

from gkzcm import IntegerMatrix, MatrixValidationError, Polynomial, classify

TABLE = [
    "0 1 2 2; 2 1 1 0",
    "0 1 2 3; 1 1 0 0",
    "0 1 2 3; 1 2 0 0",
    "0 1 2 3; 1 2 2 0",
    "1 2 3 4 5; 3 1 3 2 0",
]
# (C[NA], R/in I_A, S/in_(1,1) H_A(0)) per table row
TABLE_VERDICTS = [
    (True, True, True),
    (False, False, True),
    (False, False, False),
    (True, False, False),
    (True, False, True),
]
TWISTED_CUBIC = "1 1 1 1; 0 1 2 3"


@lru_cache(maxsize=None)
def report(text):
    return classify(IntegerMatrix.parse(text))


def random_matrices(count=20, seed=20261014, entries=(0, 4)):
    """Distinct valid 2x4 matrices with entries in ``entries``, drawn in a fixed order."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        rows = [[rng.randint(*entries) for _ in range(4)] for _ in range(2)]
        try:
            A = IntegerMatrix(rows)
        except MatrixValidationError:
            continue
        if str(A) not in out:
            out.append(str(A))
    return out


# ---------------------------------------------------------------------------
# polynomial oracles


def naive_product(f, g):
    out = {}
    for (m, a), (k, b) in itertools.product(f.items(), g.items()):
        e = tuple(x + y for x, y in zip(m, k))
        out[e] = out.get(e, 0) + a * b
    return {e: c for e, c in out.items() if c}


def to_sympy(f: Polynomial, symbols):
    expr = 0
    for m, c in f.terms.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for s, e in zip(symbols, m):
            term *= s ** e
        expr += term
    return expr


def sympy_reduced_basis(polys, ring):
    """Reduced degrevlex basis from sympy, as a set of monic term dicts."""
    syms = sympy.symbols(" ".join(ring.names))
    syms = syms if isinstance(syms, tuple) else (syms,)
    G = sympy.groebner([to_sympy(f, syms) for f in polys], *syms, order="grevlex")
    out = set()
    for p in G.polys:
        lc = p.LC(order="grevlex")
        terms = tuple(sorted((tuple(m), Fraction(int(c.p), int(c.q)) / Fraction(int(lc.p), int(lc.q)))
                             for m, c in p.terms()))
        out.add(terms)
    return out


def monic_set(polys):
    out = set()
    for f in polys:
        f = f.monic()
        out.add(tuple(sorted((m, Fraction(int(c.numerator), int(c.denominator)))
                             for m, c in f.terms.items())))
    return out


def _rank(rows):
    """Rank of a list of sparse rows (dicts) by exact elimination."""
    pivots = {}
    rank = 0
    for row in rows:
        r = {k: Fraction(v) for k, v in row.items() if v}
        while r:
            lead = max(r)
            if lead not in pivots:
                pivots[lead] = r
                rank += 1
                break
            p = pivots[lead]
            f = r[lead] / p[lead]
            for k, v in p.items():
                nv = r.get(k, 0) - f * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    return rank


def monomials_of_degree(nvars, t):
    for c in itertools.combinations_with_replacement(range(nvars), t):
        e = [0] * nvars
        for i in c:
            e[i] += 1
        yield tuple(e)


def hilbert_function(gens, nvars, t):
    """``dim (S/I)_t`` for homogeneous generators, by linear algebra in degree ``t``."""
    rows = []
    for g in gens:
        dg = g.total_degree()
        if dg > t:
            continue
        for m in monomials_of_degree(nvars, t - dg):
            rows.append({tuple(a + b for a, b in zip(m, k)): c for k, c in g.terms.items()})
    return comb(nvars - 1 + t, nvars - 1) - _rank(rows)


def hilbert_from_betti(betti, nvars, t):
    total = 0
    for (i, deg), v in betti.entries.items():
        j = deg[0]
        if t >= j:
            total += (-1) ** i * v * comb(nvars - 1 + t - j, nvars - 1)
    return total


def in_span(f, gens, nvars):
    """Whether ``f`` is a combination of monomial multiples of ``gens`` of degree at most ``deg f``.

    Exact membership for homogeneous inputs.
    """
    t = f.total_degree()
    rows = []
    for g in gens:
        dg = g.total_degree()
        for s in range(0, t - dg + 1):
            for m in monomials_of_degree(nvars, s):
                rows.append({tuple(a + b for a, b in zip(m, k)): c for k, c in g.terms.items()})
    target = dict(f.terms)
    return _rank(rows) == _rank(rows + [target])


# ---------------------------------------------------------------------------
# toric oracle


def binomial_oracle(A: IntegerMatrix, bound=12):
    """Spanning-forest binomials of all ``d^u - d^v`` with ``Au = Av`` and ``|u|+|v| <= bound``.

    Returns ``(edges, generated)`` where ``generated(u, v)`` tells whether
    ``d^u - d^v`` lies in the ideal of the edges.  For pure difference
    binomials that holds exactly when ``v`` is reachable from ``u`` by moves
    ``w -> w - a + b`` with ``w >= a`` for edges ``(a, b)`` in either direction.
    """
    n = A.n
    fibres = {}
    for t in range(bound + 1):
        for u in monomials_of_degree(n, t):
            key = tuple(sum(r[j] * u[j] for j in range(n)) for r in A.rows)
            fibres.setdefault(key, []).append(u)
    parent = {}

    def find(u):
        parent.setdefault(u, u)
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    edges = []
    for mons in fibres.values():
        pairs = [(u, v) for u, v in itertools.combinations(mons, 2) if sum(u) + sum(v) <= bound]
        pairs.sort(key=lambda p: (sum(p[0]) + sum(p[1]), p))
        for u, v in pairs:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                edges.append((u, v))
    moves = edges + [(b, a) for a, b in edges]

    def generated(u, v):
        # the fibre of a pointed A is finite, so the search ends
        seen, todo = {u}, [u]
        while todo:
            w = todo.pop()
            if w == v:
                return True
            for a, b in moves:
                if all(x >= y for x, y in zip(w, a)):
                    z = tuple(x - y + c for x, y, c in zip(w, a, b))
                    if z not in seen:
                        seen.add(z)
                        todo.append(z)
        return False

    return edges, generated
