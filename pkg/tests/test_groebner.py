import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from helpers import TABLE, in_span, monic_set, sympy_reduced_basis
from gkzcm import (
    EmptyVarietyError,
    Ideal,
    PolyRing,
    Polynomial,
    RingMismatchError,
    UndefinedInputError,
    UnsupportedWeightError,
    buchberger,
    check_groebner,
    eliminate,
    ideal_contains,
    ideal_equal,
    ideal_quotient,
    initial_ideal,
    is_regular_sequence,
    krull_dimension,
    normal_form,
    saturate,
)
from gkzcm.gkz import initial_toric
from gkzcm.poly import DEGREVLEX, MonomialOrder
from gkzcm.toric import toric_ideal, toric_ring

R2 = PolyRing("x1 x2")
R4 = PolyRing("x1 x2 x3 x4")
TWISTED = ["x1*x3 - x2^2", "x1*x4 - x2*x3", "x2*x4 - x3^2"]


def ideal(gens, ring):
    return Ideal.parse(gens, ring)


def test_buchberger_small():
    G = buchberger(ideal(["x1", "x1 + x2"], R2), DEGREVLEX)
    assert set(G.elements) == {R2.parse("x1"), R2.parse("x2")}


def test_buchberger_single_generator():
    R = PolyRing("d1 d2")
    G = buchberger(ideal(["d1^2 - d2"], R), DEGREVLEX)
    assert list(G.elements) == [R.parse("d1^2 - d2")]


def test_buchberger_unit_ideal():
    G = buchberger(ideal(["x1 + 1", "x1"], R2), DEGREVLEX)
    assert G.is_unit()
    assert list(G.elements) == [R2.one()]


def test_twisted_cubic_basis_checks_exhaustively():
    I = ideal(TWISTED, R4)
    G = I.groebner()
    assert check_groebner(G, I.generators)
    assert monic_set(G.elements) == sympy_reduced_basis(I.generators, R4)


def test_reduced_basis_is_reduced():
    I = ideal(["x1^3 - x2*x3*x4", "x1*x2 - x3^2 + x4", "x2^2*x4 - x1"], R4)
    G = I.groebner()
    lms = G.leading_monomials
    for g in G.elements:
        assert g.leading_coefficient() == 1
        for m in g.terms:
            for lm in lms:
                if lm != g.leading_monomial(DEGREVLEX):
                    assert not all(a >= b for a, b in zip(m, lm))


def test_normal_form_examples():
    G = buchberger(ideal(["x1"], R2), DEGREVLEX)
    assert normal_form(R2.parse("x1^2"), G).is_zero()
    assert normal_form(R2.parse("x1 + x2"), G) == R2.parse("x2")


def test_normal_form_ring_mismatch():
    G = buchberger(ideal(["x1"], R2), DEGREVLEX)
    with pytest.raises(RingMismatchError):
        normal_form(R4.parse("x1"), G)


def test_initial_ideal_examples():
    R = PolyRing("d1 d2")
    I = ideal(["d1^2 - d2"], R)
    assert ideal_equal(initial_ideal(I, [1, 1]), ideal(["d1^2"], R))
    H = ideal(TWISTED, R4)
    assert ideal_equal(initial_ideal(H, [1, 1, 1, 1]), H)


def test_initial_ideal_rejects_nonpositive_weight():
    with pytest.raises(UnsupportedWeightError):
        initial_ideal(ideal(["x1 - x2"], R2), [1, 0])


def test_initial_ideal_row2_not_cm():
    from gkzcm import is_cohen_macaulay_quotient

    assert not is_cohen_macaulay_quotient(initial_toric(TABLE[1]))


def test_eliminate_examples():
    R = PolyRing("t x1 x2")
    assert eliminate(ideal(["t - x1"], R), ["t"]).is_zero()
    J = eliminate(ideal(["t*x1 - 1", "t*x2"], R), ["t"])
    assert ideal_equal(J, ideal(["x2"], J.ring))


def test_eliminate_matches_bounded_membership():
    # twisted cubic as the kernel of d_i -> s^(3-i) t^i
    R = PolyRing("s t x1 x2 x3 x4")
    I = ideal(["x1 - s^3", "x2 - s^2*t", "x3 - s*t^2", "x4 - t^3"], R)
    J = eliminate(I, ["s", "t"])
    S = J.ring
    expected = [S.parse(g) for g in TWISTED]
    assert all(J.contains(g) for g in expected)
    for g in J.generators:
        assert in_span(g, expected, S.nvars)


def test_saturate_examples():
    I = ideal(["x1*x2"], R2)
    assert ideal_equal(saturate(I, R2.parse("x1")), ideal(["x2"], R2))
    assert saturate(ideal(["x1^2"], R2), R2.parse("x1")).is_unit()
    with pytest.raises(UndefinedInputError):
        saturate(I, R2.zero())


def test_saturate_lattice_ideal_of_one_row():
    R = toric_ring([[1, 2]])
    L = ideal(["d1^2 - d2"], R)
    assert ideal_equal(saturate(L, R.parse("d1*d2")), L)


def test_ideal_quotient_examples():
    I = ideal(["x1*x2"], R2)
    assert ideal_equal(ideal_quotient(I, R2.parse("x2")), ideal(["x1"], R2))
    J = ideal(["x1"], R2)
    assert ideal_equal(ideal_quotient(J, R2.parse("x2")), J)
    with pytest.raises(UndefinedInputError):
        ideal_quotient(J, R2.zero())


def test_containment_and_equality():
    assert ideal_equal(ideal(["x1", "x2"], R2), ideal(["x2", "x1 + x2"], R2))
    big, small = ideal(["x1"], R2), ideal(["x1^2"], R2)
    assert ideal_contains(big, small)
    assert not ideal_contains(small, big)
    with pytest.raises(RingMismatchError):
        ideal_contains(big, ideal(["x1"], R4))


def test_krull_dimension_examples():
    assert krull_dimension(Ideal([], R4)) == 4
    assert krull_dimension(ideal(["x1*x2"], R2)) == 1
    with pytest.raises(EmptyVarietyError):
        krull_dimension(ideal(["1"], R2))


@pytest.mark.parametrize("A", TABLE)
def test_initial_toric_has_dimension_two(A):
    assert krull_dimension(initial_toric(A)) == 2


def test_regular_sequence_examples():
    zero = Ideal([], R2)
    x1, x2 = R2.parse("x1"), R2.parse("x2")
    assert is_regular_sequence([x1, x2], zero).is_regular
    res = is_regular_sequence([x1, x1], zero)
    assert not res.is_regular and res.failed_at == 2


def test_regular_sequence_is_scale_invariant():
    I = ideal(["x1*x2"], R2)
    f = R2.parse("x1 + x2")
    assert is_regular_sequence([f], I).is_regular == is_regular_sequence([f.scale(-7)], I).is_regular


def test_dimension_agrees_with_positive_weight_degeneration():
    for A in TABLE[:4]:
        R = toric_ring(A, graded=False)
        IA = toric_ideal(A, R)
        assert krull_dimension(initial_ideal(IA, [1] * R.nvars)) == krull_dimension(IA)


def test_initial_ideal_independent_of_presentation():
    I = ideal(["x1^2 - x2*x3", "x3^3 - x1*x4 + x2", "x1*x2*x3 - x4^2"], R4)
    w = [1, 2, 1, 3]
    first = initial_ideal(I, w)
    again = initial_ideal(Ideal(I.groebner(MonomialOrder.weighted(w)).elements, R4), w)
    assert ideal_equal(first, again)


def test_saturation_is_idempotent():
    I = ideal(["x1*x2^2 - x3*x4", "x1^2*x3 - x2*x4^2"], R4)
    f = R4.parse("x1*x2")
    S1 = saturate(I, f)
    assert ideal_contains(S1, I)
    assert ideal_equal(saturate(S1, f), S1)


# ---------------------------------------------------------------------------
# properties

R3 = PolyRing("x1 x2 x3")
small_terms = st.dictionaries(st.tuples(*[st.integers(0, 2)] * 3),
                              st.integers(-3, 3).filter(bool), min_size=1, max_size=3)


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.lists(small_terms, min_size=1, max_size=3))
def test_basis_matches_sympy(gens):
    polys = [Polynomial(R3, t) for t in gens]
    polys = [p for p in polys if not p.is_zero()]
    I = Ideal(polys, R3)
    G = I.groebner()
    assert check_groebner(G, I.generators)
    assert monic_set(G.elements) == sympy_reduced_basis(polys, R3)


@settings(max_examples=25, deadline=None)
@given(st.lists(small_terms, min_size=1, max_size=3), small_terms)
def test_normal_form_zero_iff_member(gens, f):
    polys = [Polynomial(R3, t) for t in gens]
    I = Ideal(polys, R3)
    G = I.groebner()
    g = Polynomial(R3, f)
    member = sum((p * g for p in polys[:1]), R3.zero())
    assert normal_form(member, G).is_zero()
    r = normal_form(g, G)
    assert normal_form(g - r, G).is_zero()
    for m in r.terms:
        assert not any(all(a >= b for a, b in zip(m, lm)) for lm in G.leading_monomials)
