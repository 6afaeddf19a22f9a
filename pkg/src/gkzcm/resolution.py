"""Graded free resolutions via Schreyer frames, minimized by scalar pivoting.

Module elements are dicts ``{(component, monomial): coeff}``.  On level
``k`` of a frame each basis element ``e_p`` carries a total leading
monomial ``T_p`` (its image's leading monomial in the ring) and an index
chain; the induced (Schreyer) order compares ``m e_p`` by ``m + T_p``
under degrevlex and then by the chain, smaller indices being larger.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from typing import NamedTuple

from gmpy2 import mpq

from . import _engine
from .errors import EmptyVarietyError, GradingError
from .groebner import MAX_DIMENSION_VARS, Ideal, compact_groebner, krull_dimension
from .poly import DEGREVLEX, PolyRing, Polynomial, mono_div, mono_divides, mono_lcm


class GradedFreeModule(NamedTuple):
    rank: int
    shifts: tuple


class ResolutionStep(NamedTuple):
    """Matrix of a differential ``source -> target``; ``entries[r][c]`` is a Polynomial."""

    source: GradedFreeModule
    target: GradedFreeModule
    entries: tuple

    def column(self, c):
        return [row[c] for row in self.entries]

    def has_scalar_entry(self):
        return any(e.is_constant() and not e.is_zero() for row in self.entries for e in row)


class BettiTable:
    """Graded Betti numbers ``{(i, degree): count}``; degrees are tuples."""

    def __init__(self, entries):
        self.entries = {k: v for k, v in sorted(entries.items()) if v}

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries

    def __hash__(self):
        return hash(tuple(self.entries.items()))

    def __getitem__(self, key):
        i, deg = key
        if isinstance(deg, int):
            deg = (deg,)
        return self.entries.get((i, tuple(deg)), 0)

    @property
    def length(self):
        return max((i for i, _ in self.entries), default=0)

    def totals(self):
        out = [0] * (self.length + 1)
        for (i, _), v in self.entries.items():
            out[i] += v
        return out

    def triples(self):
        return [{"i": i, "degree": list(deg), "value": v} for (i, deg), v in self.entries.items()]

    def format(self):
        """Macaulay2-style staircase for a single grading; a list otherwise."""
        if not self.entries:
            return "0"
        if any(len(deg) != 1 for _, deg in self.entries):
            return "\n".join(f"{i}: {list(deg)} -> {v}" for (i, deg), v in self.entries.items())
        cols = range(self.length + 1)
        rows = sorted({deg[0] - i for i, deg in self.entries})
        cells = [[str(i) for i in cols], [str(t) for t in self.totals()]]
        labels = ["", "total:"]
        for r in rows:
            labels.append(f"{r}:")
            cells.append([str(self[i, r + i]) if self[i, r + i] else "." for i in cols])
        width = max(len(x) for row in cells for x in row)
        lw = max(len(x) for x in labels)
        lines = [f"{lab:>{lw}} " + " ".join(f"{x:>{width}}" for x in row).rstrip()
                 for lab, row in zip(labels, cells)]
        return "\n".join(line.rstrip() for line in lines)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"BettiTable({self.entries})"


class HomologicalSummary(NamedTuple):
    pd: int
    depth: int
    dim: int
    codim: int
    is_cm: bool
    numvars: int

    def as_dict(self):
        return self._asdict()


class Resolution(NamedTuple):
    steps: tuple
    betti: BettiTable

    @property
    def length(self):
        return len(self.steps)


# ---------------------------------------------------------------------------
# gradings


def _degree_fn(ring: PolyRing):
    rows = ring.grading

    def deg(m):
        return tuple(sum(r[i] * m[i] for i in range(len(m)) if m[i]) for r in rows)

    return deg


def _positive_functional(ring: PolyRing):
    """Integer ``c`` with ``c . deg(x_i) > 0`` for every variable, or None."""
    rows = ring.grading
    degs = [tuple(r[i] for r in rows) for i in range(ring.nvars)]
    if all(d[0] > 0 for d in degs):
        return (1,) + (0,) * (len(rows) - 1)
    # small search suffices for the gradings used here
    from itertools import product
    for bound in (1, 2, 4, 8):
        for c in product(range(-bound, bound + 1), repeat=len(rows)):
            if all(sum(a * b for a, b in zip(c, d)) > 0 for d in degs):
                return c
    return None


def _check_homogeneous(polys, ring):
    if _positive_functional(ring) is None:
        raise GradingError("the ring's grading is not positive")
    for f in polys:
        if not f.is_zero() and f.grading_degree() is None:
            raise GradingError(f"{f} is not homogeneous for the grading")


# ---------------------------------------------------------------------------
# Schreyer frames


def _module_reduce(vec, reducers, keyf):
    """Top-reduce ``vec`` to zero, returning the quotients ``{(p, m): c}``.

    ``reducers[comp]`` lists ``(mu, p, terms)`` for monic elements with
    leading term ``(comp, mu)``.  Raises if a term cannot be reduced.
    """
    cache = {}

    def nk(t):
        k = cache.get(t)
        if k is None:
            k = cache[t] = tuple(-x for x in keyf(t))
        return k

    v = dict(vec)
    heap = [(nk(t), t) for t in v]
    heapq.heapify(heap)
    quot = {}
    while heap:
        t = heapq.heappop(heap)[1]
        c = v.pop(t, None)
        if c is None:
            continue
        comp, m = t
        for mu, p, terms in reducers.get(comp, ()):
            if mono_divides(mu, m):
                break
        else:
            raise ArithmeticError(f"syzygy term {t} does not reduce")
        q = mono_div(m, mu)
        quot[(p, q)] = quot.get((p, q), 0) + c
        for (cc, mm), gc in terms.items():
            tt = (cc, tuple(a + b for a, b in zip(q, mm)))
            if tt == t:
                continue
            old = v.get(tt)
            if old is None:
                v[tt] = -c * gc
                heapq.heappush(heap, (nk(tt), tt))
            else:
                old -= c * gc
                if old:
                    v[tt] = old
                else:
                    del v[tt]
    return quot


def _shift(vec, q, coeff=1):
    return {(c, tuple(a + b for a, b in zip(q, m))): v * coeff for (c, m), v in vec.items()}


def _minimal_pairs(ps, leads):
    """For each p, the q > p whose lcm quotients minimally generate."""
    out = []
    for i, p in enumerate(ps):
        mu = leads[p][1]
        cands = []
        for q in ps[i + 1:]:
            cands.append((mono_div(mono_lcm(mu, leads[q][1]), mu), q))
        cands.sort(key=lambda t: (sum(t[0]), t[1]))
        kept = []
        for m, q in cands:
            if not any(mono_divides(k, m) for k, _ in kept):
                kept.append((m, q))
        out.extend((p, q, m) for m, q in kept)
    return out


def schreyer_frame(gb_terms, nvars, base_key=None):
    """Levels ``[(columns, T, chain)]`` of a Schreyer resolution.

    ``gb_terms`` is a monic Groebner basis (term dicts) of an ideal for the
    order ``base_key``.  Level ``k`` columns are vectors in ``F_{k-1}``.
    """
    base_key = base_key or DEGREVLEX.key
    zero = (0,) * nvars
    prevT, prevchain = [zero], [()]
    V = [{(0, m): mpq(c) for m, c in g.items()} for g in gb_terms]
    levels = []
    k = 1
    while V:
        def keyf(t, prevT=prevT, prevchain=prevchain):
            c, m = t
            return base_key(tuple(a + b for a, b in zip(m, prevT[c]))) + prevchain[c]

        leads = [max(v, key=keyf) for v in V]
        var = k - 1
        order = sorted(range(len(V)), key=lambda p: (
            leads[p][0], -leads[p][1][var] if var < nvars else 0,
            tuple(-x for x in keyf(leads[p]))))
        V = [V[p] for p in order]
        leads = [leads[p] for p in order]
        T = [tuple(a + b for a, b in zip(mu, prevT[c])) for c, mu in leads]
        chain = [prevchain[c] + (-p,) for p, (c, _) in enumerate(leads)]
        levels.append((V, T, chain))

        reducers = defaultdict(list)
        groups = defaultdict(list)
        for p, (c, mu) in enumerate(leads):
            reducers[c].append((mu, p, V[p]))
            groups[c].append(p)
        newV = []
        for c in sorted(groups):
            for p, q, m in _minimal_pairs(groups[c], leads):
                mq = mono_div(tuple(a + b for a, b in zip(m, leads[p][1])), leads[q][1])
                s = _shift(V[p], m)
                for t, val in _shift(V[q], mq).items():
                    nv = s.get(t, 0) - val
                    if nv:
                        s[t] = nv
                    else:
                        s.pop(t, None)
                quot = _module_reduce(s, reducers, keyf)
                w = {(p, m): mpq(1), (q, mq): mpq(-1)}
                for t, val in quot.items():
                    nv = w.get(t, 0) - val
                    if nv:
                        w[t] = nv
                    else:
                        w.pop(t, None)
                newV.append(w)
        prevT, prevchain = T, chain
        V = newV
        k += 1
    return levels


# ---------------------------------------------------------------------------
# minimization


def _poly_mul(f, g):
    out = {}
    for m, a in f.items():
        for mm, b in g.items():
            t = tuple(x + y for x, y in zip(m, mm))
            v = out.get(t, 0) + a * b
            if v:
                out[t] = v
            else:
                out.pop(t, None)
    return out


class _Sparse:
    """Sparse polynomial matrix with row and column indices."""

    def __init__(self):
        self.cols = defaultdict(dict)
        self.rows = defaultdict(set)

    def set(self, r, c, f):
        if f:
            self.cols[c][r] = f
            self.rows[r].add(c)
        else:
            self.cols[c].pop(r, None)
            self.rows[r].discard(c)

    def drop_col(self, c):
        for r in self.cols.pop(c, {}):
            self.rows[r].discard(c)

    def drop_row(self, r):
        for c in self.rows.pop(r, set()):
            self.cols[c].pop(r, None)


def _to_sparse(columns):
    M = _Sparse()
    for c, vec in enumerate(columns):
        entries = defaultdict(dict)
        for (r, m), v in vec.items():
            entries[r][m] = v
        for r, f in entries.items():
            M.set(r, c, f)
    return M


def _is_unit(f):
    return len(f) == 1 and not any(next(iter(f)))


def minimize(levels, nvars):
    """Prune a frame to a minimal resolution; returns ``(mats, alive)``."""
    mats = [_to_sparse(cols) for cols, _, _ in levels]
    alive = [set(range(len(cols))) for cols, _, _ in levels]
    for k, M in enumerate(mats):
        while True:
            pivots = [(len(M.cols[c]) + len(M.rows[r]), c, r)
                      for c in list(M.cols) for r, f in M.cols[c].items() if _is_unit(f)]
            if not pivots:
                break
            _, b, a = min(pivots)
            u = next(iter(M.cols[b][a].values()))
            colb = dict(M.cols[b])
            for c in list(M.rows[a]):
                if c == b:
                    continue
                f_ac = M.cols[c][a]
                scale = {m: v / u for m, v in f_ac.items()}
                for r, f_rb in colb.items():
                    if r == a:
                        continue
                    prod = _poly_mul(f_rb, scale)
                    cur = dict(M.cols[c].get(r, {}))
                    for m, v in prod.items():
                        nv = cur.get(m, 0) - v
                        if nv:
                            cur[m] = nv
                        else:
                            cur.pop(m, None)
                    M.set(r, c, cur)
            M.drop_col(b)
            M.drop_row(a)
            alive[k].discard(b)
            if k > 0:
                mats[k - 1].drop_col(a)
                alive[k - 1].discard(a)
            else:
                raise EmptyVarietyError("resolving the unit ideal")
            if k + 1 < len(mats):
                mats[k + 1].drop_row(b)
    return mats, alive


# ---------------------------------------------------------------------------
# public operations


def _gb(I: Ideal):
    G = compact_groebner(I)
    if G.is_unit():
        raise EmptyVarietyError("the quotient by the unit ideal is zero")
    return G


def minimal_free_resolution(I: Ideal) -> Resolution:
    """Minimal graded free resolution of ``ring / I``."""
    ring = I.ring
    _check_homogeneous(I.generators, ring)
    deg = _degree_fn(ring)
    g0 = len(ring.grading)
    F0 = GradedFreeModule(1, ((0,) * g0,))
    if I.is_zero():
        return Resolution((), BettiTable({(0, (0,) * g0): 1}))
    G = _gb(I)
    levels = schreyer_frame([dict(g.terms) for g in G.elements], ring.nvars, G.order.key)
    mats, alive = minimize(levels, ring.nvars)
    betti = defaultdict(int)
    betti[(0, (0,) * g0)] = 1
    steps = []
    target = F0
    prev_index = [0]
    for k, ((cols, T, _), M, keep) in enumerate(zip(levels, mats, alive)):
        idx = sorted(keep)
        if not idx:
            break
        shifts = tuple(deg(T[p]) for p in idx)
        for s in shifts:
            betti[(k + 1, s)] += 1
        source = GradedFreeModule(len(idx), shifts)
        pos = {r: i for i, r in enumerate(prev_index)}
        entries = [[ring.zero() for _ in idx] for _ in prev_index]
        for j, c in enumerate(idx):
            for r, f in M.cols.get(c, {}).items():
                entries[pos[r]][j] = Polynomial._raw(ring, dict(f))
        steps.append(ResolutionStep(source, target, tuple(tuple(r) for r in entries)))
        target = source
        prev_index = idx
    return Resolution(tuple(steps), BettiTable(dict(betti)))


def betti_table(I: Ideal) -> BettiTable:
    return minimal_free_resolution(I).betti


def homological_summary(I: Ideal, max_vars=MAX_DIMENSION_VARS, resolution=None) -> HomologicalSummary:
    res = resolution or minimal_free_resolution(I)
    N = I.ring.nvars
    pd = res.length
    dim = krull_dimension(I, max_vars=max_vars)
    depth = N - pd
    return HomologicalSummary(pd, depth, dim, N - dim, depth == dim, N)


def is_cohen_macaulay_quotient(I: Ideal) -> bool:
    return homological_summary(I).is_cm


def composes_to_zero(res: Resolution) -> bool:
    """Check ``d_k o d_{k+1} = 0`` for all consecutive differentials."""
    for A, B in zip(res.steps, res.steps[1:]):
        for c in range(B.source.rank):
            for r in range(A.target.rank):
                acc = None
                for m in range(A.source.rank):
                    a, b = A.entries[r][m], B.entries[m][c]
                    if a.is_zero() or b.is_zero():
                        continue
                    acc = a * b if acc is None else acc + a * b
                if acc is not None and not acc.is_zero():
                    return False
    return True


def is_minimal(res: Resolution) -> bool:
    return not any(step.has_scalar_entry() for step in res.steps)


def extend_ring(I: Ideal, name="h") -> Ideal:
    """``I`` extended to ``ring[name]`` (new standard-degree variable last)."""
    ring = I.ring
    big = ring.extend([name])
    return I.map_into(big, list(range(ring.nvars)))


# ---------------------------------------------------------------------------
# syzygies of arbitrary generators


def _tracked_groebner(polys, ring):
    """Groebner basis with each element written in terms of ``polys``."""
    alg = _engine.CommutativeAlgebra(DEGREVLEX)
    m = len(polys)
    basis = []   # (Element, representation dict {i: poly terms})

    def reduce_tracked(p, rep):
        p = dict(p)
        rep = {i: dict(f) for i, f in rep.items()}
        out = {}
        while p:
            lm = max(p, key=alg.key)
            c = p[lm]
            for e, er in basis:
                if mono_divides(e.lm, lm):
                    q = mono_div(lm, e.lm)
                    for mm, gc in alg.mul_term(q, e.terms):
                        v = p.get(mm, 0) - c * gc
                        if v:
                            p[mm] = v
                        else:
                            p.pop(mm, None)
                    for i, f in er.items():
                        tgt = rep.setdefault(i, {})
                        for mm, gc in alg.mul_term(q, f):
                            v = tgt.get(mm, 0) - c * gc
                            if v:
                                tgt[mm] = v
                            else:
                                tgt.pop(mm, None)
                    break
            else:
                out[lm] = c
                del p[lm]
        return out, {i: f for i, f in rep.items() if f}

    def add(p, rep):
        r, rr = reduce_tracked(p, rep)
        if r:
            e = _engine.make_monic(r, alg)
            c = mpq(r[e.lm])
            basis.append((e, {i: {mm: v / c for mm, v in f.items()} for i, f in rr.items()}))
            return True
        return False

    zero = (0,) * ring.nvars
    for i, f in enumerate(polys):
        add(dict(f.terms), {i: {zero: mpq(1)}})
    done = set()
    while True:
        pair = next(((i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))
                     if (i, j) not in done), None)
        if pair is None:
            break
        done.add(pair)
        (ei, ri), (ej, rj) = basis[pair[0]], basis[pair[1]]
        l = mono_lcm(ei.lm, ej.lm)
        qi, qj = mono_div(l, ei.lm), mono_div(l, ej.lm)
        s = _engine.spoly(ei, ej, alg)
        rep = {}
        for r, q, sign in ((ri, qi, 1), (rj, qj, -1)):
            for i, f in r.items():
                tgt = rep.setdefault(i, {})
                for mm, c in alg.mul_term(q, f):
                    v = tgt.get(mm, 0) + sign * c
                    if v:
                        tgt[mm] = v
                    else:
                        tgt.pop(mm, None)
        add(s, rep)
    return basis, reduce_tracked


def _vec_sub(a, b, coeff=1):
    out = dict(a)
    for t, v in b.items():
        nv = out.get(t, 0) - coeff * v
        if nv:
            out[t] = nv
        else:
            out.pop(t, None)
    return out


def _module_nf(vec, gb, key):
    """Full reduction of a module vector by a monic module GB."""
    v = dict(vec)
    r = {}
    while v:
        t = max(v, key=key)
        c = v[t]
        for lt, g in gb:
            if lt[0] == t[0] and mono_divides(lt[1], t[1]):
                q = mono_div(t[1], lt[1])
                v = _vec_sub(v, _shift(g, q), c)
                break
        else:
            r[t] = c
            del v[t]
    return r


def _module_groebner(vecs, key):
    gb = []

    def add(v):
        r = _module_nf(v, gb, key)
        if r:
            lt = max(r, key=key)
            c = r[lt]
            gb.append((lt, {t: x / c for t, x in r.items()}))

    for v in vecs:
        add(v)
    i = 0
    done = set()
    while True:
        pair = next(((a, b) for a in range(len(gb)) for b in range(a + 1, len(gb))
                     if (a, b) not in done and gb[a][0][0] == gb[b][0][0]), None)
        if pair is None:
            break
        done.add(pair)
        (la, ga), (lb, gbb) = gb[pair[0]], gb[pair[1]]
        l = mono_lcm(la[1], lb[1])
        add(_vec_sub(_shift(ga, mono_div(l, la[1])), _shift(gbb, mono_div(l, lb[1]))))
        i += 1
    return gb


def syzygies(gens) -> ResolutionStep:
    """Minimal generators of the syzygy module of ``gens``.

    S-pair reduction traces over a tracked Groebner basis give generators;
    graded Nakayama in increasing degree removes the redundant ones.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("no generators")
    ring = gens[0].ring
    _check_homogeneous(gens, ring)
    deg = _degree_fn(ring)
    m = len(gens)
    nz = [i for i, g in enumerate(gens) if not g.is_zero()]
    zero = (0,) * ring.nvars
    cands = [{(i, zero): mpq(1)} for i in range(m) if gens[i].is_zero()]
    if nz:
        basis, reduce_tracked = _tracked_groebner([gens[i] for i in nz], ring)
        # S-pair traces: lcm quotients minus reduction quotients
        elems = [e for e, _ in basis]
        for a in range(len(basis)):
            for b in range(a + 1, len(basis)):
                ea, ra = basis[a]
                eb, rb = basis[b]
                l = mono_lcm(ea.lm, eb.lm)
                s = _engine.spoly(ea, eb, _engine.CommutativeAlgebra(DEGREVLEX))
                vec = {}
                for r, q, sign in ((ra, mono_div(l, ea.lm), 1), (rb, mono_div(l, eb.lm), -1)):
                    for i, f in r.items():
                        for mm, c in f.items():
                            t = (nz[i], tuple(x + y for x, y in zip(q, mm)))
                            v = vec.get(t, 0) + sign * c
                            vec[t] = v
                _, rep = reduce_tracked(s, {})
                # reduce_tracked subtracts, so rep holds minus the quotients
                for i, f in rep.items():
                    for mm, c in f.items():
                        t = (nz[i], mm)
                        vec[t] = vec.get(t, 0) + c
                vec = {t: v for t, v in vec.items() if v}
                if vec:
                    cands.append(vec)
        # original generators against their GB expressions
        for k, i in enumerate(nz):
            r, rep = reduce_tracked(dict(gens[i].terms), {})
            vec = {(i, zero): mpq(1)}
            for j, f in rep.items():
                for mm, c in f.items():
                    t = (nz[j], mm)
                    vec[t] = vec.get(t, 0) + c
            vec = {t: v for t, v in vec.items() if v}
            if vec != {(i, zero): mpq(1)} and vec:
                cands.append(vec)
        del elems
    gdeg = [deg(gens[i].leading_monomial(DEGREVLEX)) if not gens[i].is_zero() else (0,) * len(ring.grading)
            for i in range(m)]

    def vdeg(v):
        c, mono = next(iter(v))
        return tuple(a + b for a, b in zip(deg(mono), gdeg[c]))

    def key(t):
        return DEGREVLEX.key(t[1]) + (-t[0],)

    cands.sort(key=lambda v: (_positive_weight(vdeg(v), ring), sorted(v.items())))
    kept = []
    for v in cands:
        gb = _module_groebner(kept, key)
        if _module_nf(v, gb, key):
            kept.append(v)
    shifts = tuple(vdeg(v) for v in kept)
    entries = [[ring.zero() for _ in kept] for _ in range(m)]
    for j, v in enumerate(kept):
        per = defaultdict(dict)
        for (c, mono), val in v.items():
            per[c][mono] = val
        for c, f in per.items():
            entries[c][j] = Polynomial(ring, f)
    source = GradedFreeModule(len(kept), shifts)
    target = GradedFreeModule(m, tuple(gdeg))
    return ResolutionStep(source, target, tuple(tuple(r) for r in entries))


def _positive_weight(deg, ring):
    c = _positive_functional(ring)
    return sum(a * b for a, b in zip(c, deg))
