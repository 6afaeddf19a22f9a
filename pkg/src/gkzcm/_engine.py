"""Buchberger kernel on raw term dicts, shared by commutative and Weyl code.

Polynomials here are plain ``{exponent tuple: mpq}`` dicts.  The ring
structure is supplied by an *algebra* object with

* ``key(m)``: order key of a monomial (larger key, larger monomial);
* ``mul_term(q, terms)``: iterable of ``(monomial, coeff)`` for the left
  product of the monomial ``q`` with ``terms``;
* ``commutative``: whether the product criterion may be used.

For every algebra used here the leading monomial of ``q * g`` is
``q + lm(g)`` with coefficient ``lc(g)``; reductions rely on that.
"""

from __future__ import annotations

import heapq

from gmpy2 import mpq

from .poly import mono_coprime, mono_div, mono_divides, mono_lcm


class CommutativeAlgebra:
    commutative = True

    def __init__(self, order):
        self.order = order
        self.key = order.key
        self._neg = {}

    def negkey(self, m):
        k = self._neg.get(m)
        if k is None:
            k = self._neg[m] = tuple(-x for x in self.key(m))
        return k

    def mul_term(self, q, terms):
        for m, c in terms.items():
            yield tuple(a + b for a, b in zip(q, m)), c


class Element:
    """A monic basis element with its leading monomial."""

    __slots__ = ("lm", "terms")

    def __init__(self, lm, terms):
        self.lm = lm
        self.terms = terms


def leading(terms, alg):
    return max(terms, key=alg.key)


def make_monic(terms, alg):
    lm = leading(terms, alg)
    c = mpq(terms[lm])
    if c != 1:
        terms = {m: v / c for m, v in terms.items()}
    return Element(lm, terms)


def reduce(p, basis, alg, full=True):
    """Normal form of ``p`` modulo the monic elements ``basis``.

    Always reduces the greatest reducible term and uses the first basis
    element (in list order) whose leading monomial divides it.  With
    ``full=False`` stops at the first irreducible term.
    """
    if not p or not basis:
        return dict(p)
    negkey = alg.negkey
    p = dict(p)
    heap = [(negkey(m), m) for m in p]
    heapq.heapify(heap)
    r = {}
    commutative = alg.commutative
    lms = [(b.lm, b.terms) for b in basis]
    while heap:
        m = heapq.heappop(heap)[1]
        c = p.pop(m, None)
        if c is None:
            continue
        for lm, gterms in lms:
            if mono_divides(lm, m):
                break
        else:
            r[m] = c
            if not full:
                r.update(p)
                return r
            continue
        q = mono_div(m, lm)
        if commutative:
            prods = ((tuple(a + b for a, b in zip(q, gm)), gc) for gm, gc in gterms.items())
        else:
            prods = alg.mul_term(q, gterms)
        for mm, gc in prods:
            if mm == m:
                continue
            v = p.get(mm)
            if v is None:
                p[mm] = -c * gc
                heapq.heappush(heap, (negkey(mm), mm))
            else:
                v -= c * gc
                if v:
                    p[mm] = v
                else:
                    del p[mm]
    return r


def lmul(q, terms, alg, coeff=1):
    """Left product ``coeff * q * terms`` as a fresh dict."""
    out = {}
    for mm, c in alg.mul_term(q, terms):
        v = out.get(mm, 0) + c * coeff
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    return out


def spoly(f: Element, g: Element, alg):
    lcm_ = mono_lcm(f.lm, g.lm)
    a = lmul(mono_div(lcm_, f.lm), f.terms, alg)
    for mm, c in alg.mul_term(mono_div(lcm_, g.lm), g.terms):
        v = a.get(mm, 0) - c
        if v:
            a[mm] = v
        else:
            a.pop(mm, None)
    return a


class _Basis:
    """Pair bookkeeping with the Gebauer-Moeller criteria."""

    def __init__(self, alg):
        self.alg = alg
        self.elts = []
        self.active = []
        self.pairs = {}

    def add(self, h: Element):
        alg = self.alg
        elts = self.elts
        hi = len(elts)
        lh = h.lm
        cands = [i for i in self.active]
        lcms = {i: mono_lcm(elts[i].lm, lh) for i in cands}
        coprime = {i: alg.commutative and mono_coprime(elts[i].lm, lh) for i in cands}
        kept = []
        todo = list(cands)
        while todo:
            i = todo.pop()
            li = lcms[i]
            if coprime[i] or not (any(mono_divides(lcms[j], li) for j in todo)
                                  or any(mono_divides(lcms[j], li) for j in kept)):
                kept.append(i)
        new_pairs = {}
        for (a, b), lab in self.pairs.items():
            if (mono_divides(lh, lab) and mono_lcm(elts[a].lm, lh) != lab
                    and mono_lcm(elts[b].lm, lh) != lab):
                continue
            new_pairs[(a, b)] = lab
        for i in kept:
            if not coprime[i]:
                new_pairs[(i, hi)] = lcms[i]
        self.pairs = new_pairs
        elts.append(h)
        self.active = [i for i in self.active if not mono_divides(lh, elts[i].lm)] + [hi]

    def pop_pair(self):
        key = self.alg.key
        best = min(self.pairs, key=lambda ab: (key(self.pairs[ab]), ab))
        del self.pairs[best]
        return best

    def reducers(self):
        return [self.elts[i] for i in self.active]


class BudgetExceeded(Exception):
    """Raised when a Buchberger run exceeds its S-pair reduction budget."""


def buchberger(polys, alg, max_reductions=None):
    """Reduced Groebner basis of the (left) ideal generated by ``polys``.

    Returns monic term dicts sorted by increasing leading monomial.
    """
    B = _Basis(alg)
    done = 0
    for p in polys:
        if not p:
            continue
        r = reduce(p, B.reducers(), alg)
        if r:
            h = make_monic(r, alg)
            if not any(h.lm):
                return [{h.lm: mpq(1)}]
            B.add(h)
    while B.pairs:
        if max_reductions is not None and done >= max_reductions:
            raise BudgetExceeded(done)
        done += 1
        i, j = B.pop_pair()
        s = spoly(B.elts[i], B.elts[j], alg)
        r = reduce(s, B.reducers(), alg)
        if r:
            h = make_monic(r, alg)
            if not any(h.lm):
                return [{h.lm: mpq(1)}]
            B.add(h)
    return interreduce(B.reducers(), alg)


def interreduce(elements, alg):
    """Minimalize and tail-reduce a Groebner basis; sorted by leading monomial."""
    key = alg.key
    elems = sorted(elements, key=lambda e: key(e.lm))
    minimal = []
    for e in elems:
        if not any(mono_divides(f.lm, e.lm) for f in minimal):
            minimal.append(e)
    out = []
    for idx, e in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        r = reduce(e.terms, others, alg)
        out.append(make_monic(r, alg))
    out.sort(key=lambda e: key(e.lm))
    return [e.terms for e in out]


def is_groebner(basis_terms, alg):
    """Check Buchberger's criterion over all pairs (no criteria skipped)."""
    elems = [make_monic(t, alg) for t in basis_terms if t]
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            s = spoly(elems[i], elems[j], alg)
            if reduce(s, elems, alg, full=False):
                return False
    return True


def divide(p, divisor_terms, alg):
    """Exact left quotient ``q`` with ``p = q * divisor``; None if inexact."""
    d = make_monic(divisor_terms, alg)
    scale = mpq(divisor_terms[d.lm])
    negkey = alg.negkey
    p = dict(p)
    q = {}
    while p:
        m = min(p, key=negkey)
        if not mono_divides(d.lm, m):
            return None
        c = p[m]
        qm = mono_div(m, d.lm)
        q[qm] = q.get(qm, 0) + c
        for mm, gc in alg.mul_term(qm, d.terms):
            v = p.get(mm, 0) - c * gc
            if v:
                p[mm] = v
            else:
                p.pop(mm, None)
    return {m: c / scale for m, c in q.items() if c}


def fastest_basis(polys, algs, start_budget=64):
    """Groebner basis under whichever of ``algs`` finishes with the fewest S-pairs.

    Candidates run with a doubling budget of S-pair reductions; among those
    finishing in the first successful round the smallest basis wins, ties
    going to the earlier candidate.  Returns ``(index, basis)``.
    """
    budget = start_budget
    while True:
        done = []
        for idx, alg in enumerate(algs):
            try:
                gb = buchberger(polys, alg, max_reductions=budget)
            except BudgetExceeded:
                continue
            done.append((len(gb), sum(len(g) for g in gb), idx, gb))
        if done:
            _, _, idx, gb = min(done, key=lambda t: t[:3])
            return idx, gb
        budget *= 2
