"""Integer matrices, toric ideals, affine semigroups and umbrellas."""

from __future__ import annotations

from fractions import Fraction
from functools import reduce as _fold
from itertools import combinations, product
from math import gcd
from typing import NamedTuple

from .errors import (
    InconclusiveError,
    MatrixValidationError,
    UnsupportedDimensionError,
)
from .groebner import Ideal, initial_ideal, ideal_contains, krull_dimension, saturate
from .poly import PolyRing, Polynomial, to_rational

MAX_COLUMNS = 12
MAX_ROWS = 4


# ---------------------------------------------------------------------------
# exact integer linear algebra


def _det(rows):
    """Bareiss determinant of a square integer matrix."""
    m = [list(r) for r in rows]
    k = len(m)
    if k == 0:
        return 1
    sign, prev = 1, 1
    for i in range(k - 1):
        if m[i][i] == 0:
            for r in range(i + 1, k):
                if m[r][i]:
                    m[i], m[r] = m[r], m[i]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(i + 1, k):
            for c in range(i + 1, k):
                m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]) // prev
        prev = m[i][i]
    return sign * m[k - 1][k - 1]


def _rank(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def _normal(cols):
    """Integer normal to ``d-1`` vectors in Q^d (generalized cross product)."""
    d = len(cols) + 1
    out = []
    for i in range(d):
        minor = [[v[k] for k in range(d) if k != i] for v in cols]
        out.append((-1) ** i * _det(minor))
    g = _fold(gcd, out, 0)
    return [x // g for x in out] if g else out


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _integer_kernel(rows, n):
    """Z-basis of the integer kernel via unimodular row reduction of [A^T | I]."""
    d = len(rows)
    work = [[rows[i][j] for i in range(d)] + [int(j == k) for k in range(n)] for j in range(n)]
    piv = 0
    for c in range(d):
        while True:
            nz = [r for r in range(piv, n) if work[r][c]]
            if not nz:
                break
            best = min(nz, key=lambda r: abs(work[r][c]))
            work[piv], work[best] = work[best], work[piv]
            done = True
            for r in range(piv + 1, n):
                if work[r][c]:
                    q = work[r][c] // work[piv][c]
                    work[r] = [a - q * b for a, b in zip(work[r], work[piv])]
                    if work[r][c]:
                        done = False
            if done:
                break
        if any(work[r][c] for r in range(piv, n)):
            piv += 1
    basis = [row[d:] for row in work[piv:]]
    return _size_reduce(basis)


def _size_reduce(basis):
    """Cheap pairwise reduction to keep kernel vectors short; stays a Z-basis."""
    basis = [list(b) for b in basis]
    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            for j in range(len(basis)):
                if i == j:
                    continue
                bj = basis[j]
                nn = _dot(bj, bj)
                q = round(Fraction(_dot(basis[i], bj), nn))
                if q:
                    cand = [a - q * b for a, b in zip(basis[i], bj)]
                    if _dot(cand, cand) < _dot(basis[i], basis[i]):
                        basis[i] = cand
                        changed = True
    out = []
    for b in basis:
        lead = next(x for x in b if x)
        out.append(tuple(-x for x in b) if lead < 0 else tuple(b))
    return out


# ---------------------------------------------------------------------------
# the matrix type


class IntegerMatrix:
    """A ``d x n`` integer matrix; validated on construction unless ``check=False``.

    Validation enforces rank ``d``, nonzero columns, a pointed semigroup
    and ``ZA = Z^d``, plus the size caps ``n <= 12`` and ``d <= 4``.
    """

    __slots__ = ("rows", "_positive")

    def __init__(self, rows, check=True):
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise MatrixValidationError("empty", "matrix has no entries")
        if len({len(r) for r in rows}) != 1:
            raise MatrixValidationError("ragged", f"row lengths {[len(r) for r in rows]}")
        for r in rows:
            for x in r:
                if isinstance(x, bool) or not isinstance(x, int):
                    try:
                        ok = int(x) == x
                    except (TypeError, ValueError):
                        ok = False
                    if not ok:
                        raise MatrixValidationError("token", f"non-integer entry {x!r}")
        self.rows = tuple(tuple(int(x) for x in r) for r in rows)
        self._positive = None
        if check:
            self.validate()

    @classmethod
    def parse(cls, text, check=True):
        """Parse ``"0 1 2 2; 2 1 1 0"``."""
        if not text or not text.strip():
            raise MatrixValidationError("empty", "empty matrix text")
        rows = []
        for chunk in text.strip().strip(";").split(";"):
            toks = chunk.split()
            if not toks:
                raise MatrixValidationError("empty", f"empty row in {text!r}")
            row = []
            for t in toks:
                try:
                    row.append(int(t))
                except ValueError:
                    raise MatrixValidationError("token", f"non-integer token {t!r}") from None
            rows.append(row)
        return cls(rows, check=check)

    @property
    def d(self):
        return len(self.rows)

    @property
    def n(self):
        return len(self.rows[0])

    @property
    def columns(self):
        return [tuple(r[j] for r in self.rows) for j in range(self.n)]

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def submatrix(self, cols):
        return IntegerMatrix([[r[j] for j in cols] for r in self.rows], check=False)

    def tolist(self):
        return [list(r) for r in self.rows]

    def validate(self):
        if self.n > MAX_COLUMNS or self.d > MAX_ROWS:
            raise MatrixValidationError(
                "size", f"{self.d}x{self.n} exceeds the cap {MAX_ROWS}x{MAX_COLUMNS}")
        for j, col in enumerate(self.columns):
            if not any(col):
                raise MatrixValidationError("zero-column", f"column {j + 1} is zero")
        if _rank(self.rows) != self.d:
            raise MatrixValidationError("rank", f"rank is below d={self.d}")
        if self.positive_functional() is None:
            raise MatrixValidationError("pointed", "the semigroup NA is not pointed")
        if self.lattice_index() != 1:
            raise MatrixValidationError("lattice", "ZA is a proper sublattice of Z^d")

    def lattice_index(self):
        """``[Z^d : ZA]`` as the gcd of the maximal minors (0 if rank deficient)."""
        g = 0
        for cols in combinations(range(self.n), self.d):
            g = gcd(g, _det([[r[j] for j in cols] for r in self.rows]))
            if g == 1:
                break
        return g

    def facet_normals(self):
        """Inner normals of the facets of the cone spanned by the columns."""
        cols = self.columns
        d = self.d
        if d == 1:
            signs = {1 if c[0] > 0 else -1 for c in cols}
            return [(s,) for s in signs] if len(signs) == 1 else [(1,), (-1,)]
        found = []
        for sub in combinations(range(self.n), d - 1):
            vecs = [cols[j] for j in sub]
            if _rank(vecs) != d - 1:
                continue
            nv = _normal(vecs)
            vals = [_dot(nv, c) for c in cols]
            if all(v >= 0 for v in vals):
                cand = tuple(nv)
            elif all(v <= 0 for v in vals):
                cand = tuple(-x for x in nv)
            else:
                continue
            if cand not in found:
                found.append(cand)
        return sorted(found)

    def positive_functional(self):
        """Integer ``c`` with ``c . a_j > 0`` for every column, or None if NA is not pointed."""
        if self._positive is None:
            normals = self.facet_normals()
            c = tuple(sum(v[i] for v in normals) for i in range(self.d)) if normals else None
            if c is not None and all(_dot(c, a) > 0 for a in self.columns):
                self._positive = c
            else:
                self._positive = False
        return self._positive or None

    def __eq__(self, other):
        return isinstance(other, IntegerMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __str__(self):
        return "; ".join(" ".join(str(x) for x in r) for r in self.rows)

    def __repr__(self):
        return f"IntegerMatrix({str(self)!r})"


def as_matrix(A, check=True):
    if isinstance(A, IntegerMatrix):
        return A
    if isinstance(A, str):
        return IntegerMatrix.parse(A, check=check)
    return IntegerMatrix(A, check=check)


# ---------------------------------------------------------------------------
# toric ideals


def lattice_kernel(A):
    """Z-basis of ``{u in Z^n : Au = 0}``."""
    A = as_matrix(A, check=False)
    return _integer_kernel(A.rows, A.n)


def toric_ring(A, graded=True) -> PolyRing:
    """``R = Q[d1..dn]``, A-graded when ``graded``."""
    A = as_matrix(A, check=False)
    names = [f"d{j + 1}" for j in range(A.n)]
    return PolyRing(names, grading=A.tolist() if graded else None)


def _binomial(u, ring):
    plus = tuple(max(x, 0) for x in u)
    minus = tuple(max(-x, 0) for x in u)
    return Polynomial(ring, {plus: 1, minus: -1} if plus != minus else {})


def toric_ideal(A, ring=None) -> Ideal:
    """``I_A``: the lattice ideal of ``ker A`` saturated by ``d1*...*dn``.

    Returned as the ideal of its reduced degrevlex Groebner basis.
    """
    A = as_matrix(A, check=False)
    R = ring or toric_ring(A)
    gens = [_binomial(u, R) for u in lattice_kernel(A)]
    L = Ideal(gens, R)
    if not gens:
        return L
    prod_all = Polynomial(R, {(1,) * A.n: 1})
    sat = saturate(L, prod_all)
    return Ideal(sat.groebner().elements, R)


# ---------------------------------------------------------------------------
# semigroups


def semigroup_membership(A, b, box=None) -> bool:
    """Decide ``b in NA``.

    Search recurses on ``b - a_j`` with a positive functional strictly
    decreasing, so it is finite and exact.  With ``box`` (a bound on the
    absolute value of coordinates) a search that would step outside the box
    raises :class:`InconclusiveError` instead of answering.
    """
    A = as_matrix(A)
    b = tuple(int(x) for x in b)
    if len(b) != A.d:
        raise ValueError(f"vector of length {len(b)} for d={A.d}")
    cols = A.columns
    normals = A.facet_normals()
    c = A.positive_functional()
    seen = {}

    def member(p):
        if not any(p):
            return True
        if box is not None and any(abs(x) > box for x in p):
            raise InconclusiveError(f"search left the box at {p}")
        if _dot(c, p) <= 0 or any(_dot(v, p) < 0 for v in normals):
            return False
        hit = seen.get(p)
        if hit is None:
            hit = False
            for a in cols:
                if member(tuple(x - y for x, y in zip(p, a))):
                    hit = True
                    break
            seen[p] = hit
        return hit

    import sys
    limit = sys.getrecursionlimit()
    need = _dot(c, b) // min(_dot(c, a) for a in cols) + 100
    if need > limit:
        sys.setrecursionlimit(need)
    try:
        return member(b)
    finally:
        sys.setrecursionlimit(limit)


def extreme_columns(A):
    """Indices ``(i, j)`` of one column on each extreme ray (d = 2)."""
    A = as_matrix(A)
    if A.d != 2:
        raise UnsupportedDimensionError("extreme rays are computed for d = 2 only")
    cols = A.columns
    normals = A.facet_normals()
    rays = []
    for v in normals:
        on = [j for j, a in enumerate(cols) if _dot(v, a) == 0]
        # shortest column on the ray
        rays.append(min(on, key=lambda j: (abs(cols[j][0]) + abs(cols[j][1]), j)))
    r1, r2 = sorted(rays)
    return r1, r2


class SemigroupCMResult(NamedTuple):
    is_cm: bool
    rays: tuple
    apery: tuple
    index: int
    hole: tuple | None


def apery_set(A, r1, r2):
    """Elements of NA from which neither ray generator can be subtracted."""
    A = as_matrix(A)
    cols = A.columns
    a1, a2 = cols[r1], cols[r2]
    D = abs(a1[0] * a2[1] - a1[1] * a2[0])
    others = [cols[j] for j in range(A.n) if j not in (r1, r2)]
    pts = set()
    for ns in product(range(D), repeat=len(others)):
        pts.add(tuple(sum(k * a[i] for k, a in zip(ns, others)) for i in range(2)))
    out = []
    for p in sorted(pts):
        down1 = tuple(x - y for x, y in zip(p, a1))
        down2 = tuple(x - y for x, y in zip(p, a2))
        if not semigroup_membership(A, down1) and not semigroup_membership(A, down2):
            out.append(p)
    return out, D


def semigroup_cm_dim2(A, region=None, detail=False):
    """Cohen-Macaulay test for ``Q[NA]`` with ``d = 2``.

    Checks ``p in (NA - N r1) & (NA - N r2)  =>  p in NA`` for every lattice
    point ``p`` of the cone inside ``[-region, region]^2`` (default
    ``10 * max|a_ij| * n``).  Membership in the localizations is decided from
    the Apery set of NA over ``N r1 + N r2``.  A hole proves ``False``; the
    answer ``True`` is only returned when the region covers the parallelogram
    where a hole would have to appear, otherwise the result is inconclusive.
    """
    A = as_matrix(A)
    if A.d != 2:
        raise UnsupportedDimensionError("the semigroup criterion is implemented for d = 2")
    if region is None:
        region = 10 * max(abs(x) for r in A.rows for x in r) * A.n
    r1, r2 = extreme_columns(A)
    cols = A.columns
    basis = [cols[r1], cols[r2]]
    B, D = apery_set(A, r1, r2)
    (x1, y1), (x2, y2) = basis
    det = x1 * y2 - x2 * y1

    def scaled(p):
        # det times the coordinates of p in the ray basis
        return p[0] * y2 - p[1] * x2, x1 * p[1] - y1 * p[0]

    Bco = [scaled(b) for b in B]

    def split(p):
        """Per Apery element in p's coset: integer coords of p - b."""
        ps, pt = scaled(p)
        out = []
        for bs, bt in Bco:
            ds, rs = divmod(ps - bs, det)
            dt, rt = divmod(pt - bt, det)
            if not rs and not rt:
                out.append((ds, dt))
        return out

    half_normals = A.facet_normals()
    hole = None
    for p in product(range(-region, region + 1), repeat=2):
        if any(_dot(v, p) < 0 for v in half_normals):
            continue
        offs = split(p)
        loc1 = any(dt >= 0 for ds, dt in offs)   # p + k r1 in NA
        loc2 = any(ds >= 0 for ds, dt in offs)   # p + k r2 in NA
        if loc1 and loc2 and not any(ds >= 0 and dt >= 0 for ds, dt in offs):
            hole = p
            break
    if hole is None:
        smax = max(Fraction(bc[0], det) for bc in Bco)
        tmax = max(Fraction(bc[1], det) for bc in Bco)
        corners = [tuple(s * x + t * y for x, y in zip(*basis)) for s in (0, smax) for t in (0, tmax)]
        if any(abs(x) > region for c in corners for x in c):
            raise InconclusiveError(
                f"region {region} does not cover the possible holes up to {corners}")
    result = SemigroupCMResult(hole is None, (r1 + 1, r2 + 1), tuple(B), D, hole)
    return result if detail else result.is_cm


# ---------------------------------------------------------------------------
# umbrellas


class Umbrella(NamedTuple):
    """Faces of ``conv(0, a_j / L_j)`` avoiding the origin, with witnesses.

    ``faces`` maps each face (a frozenset of 1-based column indices) to a
    covector ``c`` with ``c . a_j/L_j = 1`` on the face and ``< 1`` off it.
    """

    faces: dict
    top_faces: tuple
    d: int


def _scaled_columns(A, L):
    # through int: Fraction(mpq) keeps mpz parts, which later breaks mixed arithmetic
    L = [Fraction(int(q.numerator), int(q.denominator)) for q in map(to_rational, L)]
    if len(L) != A.n:
        raise ValueError(f"weight of length {len(L)} for n={A.n}")
    if any(x <= 0 for x in L):
        raise ValueError("umbrella weights must be positive")
    return [tuple(Fraction(a) / l for a in col) for col, l in zip(A.columns, L)]


def _solve(rows, rhs):
    """Solve a square rational system; None if singular."""
    k = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for c in range(k):
        piv = next((r for r in range(c, k) if m[r][c]), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        for r in range(k):
            if r != c and m[r][c]:
                f = m[r][c] / m[c][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return [m[i][k] / m[i][i] for i in range(k)]


def umbrella(A, L=None) -> Umbrella:
    A = as_matrix(A)
    L = L or [1] * A.n
    P = _scaled_columns(A, L)
    d, n = A.d, A.n
    # facets of conv(0, P): c.y <= 1 (avoid 0) and c.y <= 0 (through 0)
    facets = []
    for sub in combinations(range(n), d):
        c = _solve([P[j] for j in sub], [1] * d)
        if c is None:
            continue
        vals = [_dot(c, p) for p in P]
        if all(v <= 1 for v in vals):
            on = frozenset(j for j in range(n) if vals[j] == 1)
            facets.append((on, tuple(c), False))
    if d > 1:
        for sub in combinations(range(n), d - 1):
            if _rank([P[j] for j in sub]) != d - 1:
                continue
            # scaling columns by positive L keeps their span
            nv = [Fraction(x) for x in _normal([A.column(j) for j in sub])]
            vals = [_dot(nv, p) for p in P]
            if all(v >= 0 for v in vals):
                nv = [-x for x in nv]
                vals = [-v for v in vals]
            elif not all(v <= 0 for v in vals):
                continue
            on = frozenset(j for j in range(n) if vals[j] == 0)
            facets.append((on, tuple(nv), True))
    uniq = {}
    for on, c, origin in facets:
        uniq.setdefault((on, origin), c)
    facets = [(on, c, origin) for (on, origin), c in uniq.items()]

    faces = {on for on, _, origin in facets if not origin}
    frontier = set(faces)
    while frontier:
        nxt = set()
        for f in frontier:
            for on, _, _ in facets:
                g = f & on
                if g and g != f and g not in faces:
                    nxt.add(g)
        faces |= nxt
        frontier = nxt

    out = {}
    for tau in faces:
        containing = [(c, origin) for on, c, origin in facets if tau <= on]
        m = sum(1 for _, origin in containing if not origin)
        phi = [sum(c[i] for c, _ in containing) for i in range(d)]
        cov = tuple(x / m for x in phi)
        vals = [_dot(cov, p) for p in P]
        assert all((v == 1) if j in tau else (v < 1) for j, v in enumerate(vals)), tau
        out[frozenset(j + 1 for j in tau)] = cov
    top = tuple(sorted((t for t in out if _rank([P[j - 1] for j in t]) == d),
                       key=lambda t: sorted(t)))
    return Umbrella(out, top, d)


class UmbrellaCheck(NamedTuple):
    ok: bool
    contained: dict
    dimension: int
    facet_count: int


def umbrella_consistency_check(A, L=None) -> UmbrellaCheck:
    """Check ``in_L I_A`` lies in ``R I_tau + J_tau`` for every top face ``tau``."""
    A = as_matrix(A)
    L = L or [1] * A.n
    R = toric_ring(A, graded=False)
    IA = toric_ideal(A, R)
    inL = initial_ideal(IA, L) if IA.generators else IA
    U = umbrella(A, L)
    contained = {}
    for tau in U.top_faces:
        cols = sorted(tau)
        sub = A.submatrix([j - 1 for j in cols])
        Rt = toric_ring(sub, graded=False)
        It = toric_ideal(sub, Rt)
        gens = list(It.map_into(R, [j - 1 for j in cols]).generators)
        gens += [R.var(j) for j in range(A.n) if j + 1 not in tau]
        contained[tau] = ideal_contains(Ideal(gens, R), inL)
    dim = krull_dimension(inL)
    ok = all(contained.values()) and dim == A.d
    return UmbrellaCheck(ok, contained, dim, len(U.top_faces))
