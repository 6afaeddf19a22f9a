from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import TABLE, TWISTED_CUBIC
from gkzcm import (
    Ideal,
    InconclusiveError,
    IntegerMatrix,
    MatrixValidationError,
    UnsupportedDimensionError,
    ideal_equal,
    is_cohen_macaulay_quotient,
    krull_dimension,
    saturate,
)
from gkzcm.toric import (
    extreme_columns,
    lattice_kernel,
    semigroup_cm_dim2,
    semigroup_membership,
    toric_ideal,
    umbrella,
    umbrella_consistency_check,
)

IDENTITY = [[1, 0], [0, 1]]


def apply(A, u):
    return [sum(a * x for a, x in zip(row, u)) for row in A.rows]


def test_lattice_kernel_examples():
    assert lattice_kernel(IDENTITY) == []
    assert [tuple(abs(x) for x in u) for u in lattice_kernel([[1, 2]])] == [(2, 1)]


@pytest.mark.parametrize("text", TABLE)
def test_lattice_kernel_rank(text):
    A = IntegerMatrix.parse(text)
    basis = lattice_kernel(A)
    assert len(basis) == A.n - A.d
    for u in basis:
        assert apply(A, u) == [0] * A.d


def test_toric_ideal_examples():
    assert toric_ideal(IDENTITY).is_zero()
    I = toric_ideal([[1, 2]])
    assert ideal_equal(I, Ideal.parse(["d1^2 - d2"], I.ring))


def test_twisted_cubic_toric_ideal():
    I = toric_ideal(TWISTED_CUBIC)
    expected = {"d1*d3 - d2^2", "d2*d4 - d3^2", "d1*d4 - d2*d3"}
    assert ideal_equal(I, Ideal.parse(sorted(expected), I.ring))
    assert len(I.generators) == 3


@pytest.mark.parametrize("text", TABLE)
def test_toric_ideal_invariants(text):
    A = IntegerMatrix.parse(text)
    I = toric_ideal(A)
    for g in I.generators:
        degs = {tuple(apply(A, m)) for m in g.terms}
        assert len(degs) == 1
    assert krull_dimension(I) == A.d


def test_toric_ideal_is_saturated():
    I = toric_ideal(TABLE[0])
    product_of_vars = I.ring.parse("d1*d2*d3*d4")
    assert ideal_equal(saturate(I, product_of_vars), I)


def test_semigroup_membership_examples():
    A = IntegerMatrix.parse(TABLE[0])
    assert semigroup_membership(A, (0, 0))
    a1, a2 = A.column(0), A.column(1)
    assert semigroup_membership(A, tuple(x + y for x, y in zip(a1, a2)))
    # (1, 0) is in the cone and in ZA but not a sum of columns
    assert not semigroup_membership(TABLE[1], (1, 0))


def test_semigroup_membership_box_too_small():
    with pytest.raises(InconclusiveError):
        semigroup_membership(TABLE[1], (9, 9), box=3)


def brute_semigroup(A, bound):
    """All points of NA reached with at most ``bound`` copies of each column."""
    pts = set()
    for coeffs in product(range(bound + 1), repeat=A.n):
        pts.add(tuple(apply(A, coeffs)))
    return pts


@pytest.mark.parametrize("text", TABLE[:4])
def test_semigroup_membership_matches_enumeration(text):
    A = IntegerMatrix.parse(text)
    reached = brute_semigroup(A, 4)
    for b in product(range(5), repeat=2):
        assert semigroup_membership(A, b) == (b in reached), b


def test_semigroup_cm_examples():
    assert semigroup_cm_dim2(IDENTITY)
    assert semigroup_cm_dim2(TABLE[3])
    assert not semigroup_cm_dim2(TABLE[1])


def test_semigroup_cm_rejects_other_dimensions():
    with pytest.raises(UnsupportedDimensionError):
        semigroup_cm_dim2([[1, 2]])
    with pytest.raises(UnsupportedDimensionError):
        semigroup_cm_dim2([[1, 1, 1], [0, 1, 0], [0, 0, 1]])


def test_semigroup_cm_reports_a_hole():
    res = semigroup_cm_dim2(TABLE[1], detail=True)
    assert not res.is_cm and res.hole is not None


def test_extreme_columns():
    assert set(extreme_columns(TABLE[1])) == {0, 2}
    assert set(extreme_columns(TWISTED_CUBIC)) == {0, 3}


def test_umbrella_examples():
    assert umbrella([[1]]).top_faces == (frozenset({1}),)
    assert umbrella([[1, 2]]).top_faces == (frozenset({2}),)
    assert umbrella(TWISTED_CUBIC).top_faces == (frozenset({1, 2, 3, 4}),)


def brute_top_faces(A, L):
    """Faces spanned by d columns whose covector puts every other column strictly below 1."""
    cols = [[Fraction(a, l) for a in col] for col, l in zip(A.columns, L)]
    faces = set()
    for sub in combinations(range(A.n), A.d):
        (p, q), (r, s) = cols[sub[0]], cols[sub[1]]
        det = p * s - q * r
        if det == 0:
            continue
        c = ((s - q) / det, (p - r) / det)
        vals = [c[0] * a + c[1] * b for a, b in cols]
        if all(v <= 1 for v in vals):
            faces.add(frozenset(j + 1 for j, v in enumerate(vals) if v == 1))
    return faces


@pytest.mark.parametrize("text", TABLE)
@pytest.mark.parametrize("L", [None, (3, 1, 2, 1, 2)])
def test_umbrella_top_faces_match_brute_force(text, L):
    A = IntegerMatrix.parse(text)
    L = (L or (1,) * 5)[: A.n]
    U = umbrella(A, L)
    assert set(U.top_faces) == brute_top_faces(A, L)
    cols = [[Fraction(a, l) for a in col] for col, l in zip(A.columns, L)]
    for tau, c in U.faces.items():
        assert tau
        for j, col in enumerate(cols):
            v = sum(x * y for x, y in zip(c, col))
            assert v == 1 if j + 1 in tau else v < 1


def test_umbrella_rejects_bad_weights():
    with pytest.raises(ValueError):
        umbrella([[1, 2]], [1, 0])


def test_umbrella_consistency_examples():
    check = umbrella_consistency_check(IDENTITY)
    assert check.ok and check.facet_count == 1
    assert umbrella_consistency_check(TWISTED_CUBIC).ok


@pytest.mark.parametrize("text, violation", [
    ("1 2; 3", "ragged"),
    ("1 x", "token"),
    ("", "empty"),
    ("1 2; 2 4", "rank"),
    ("1 0 1; 0 0 1", "zero-column"),
    ("1 -1", "pointed"),
    ("2 4", "lattice"),
    (" ".join(["1"] * 13), "size"),
])
def test_matrix_validation(text, violation):
    with pytest.raises(MatrixValidationError) as err:
        IntegerMatrix.parse(text)
    assert err.value.violation == violation


def test_matrix_print_parse_round_trip():
    for text in TABLE:
        A = IntegerMatrix.parse(text)
        assert IntegerMatrix.parse(str(A)) == A


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=3, max_size=4, unique=True))
def test_semigroup_criterion_matches_resolution(cols):
    try:
        A = IntegerMatrix([[c[0] for c in cols], [c[1] for c in cols]])
    except MatrixValidationError:
        return
    assert semigroup_cm_dim2(A) == is_cohen_macaulay_quotient(toric_ideal(A))
