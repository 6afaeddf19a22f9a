"""GKZ systems ``H_A(beta)`` and the three Cohen-Macaulay verdicts."""

from __future__ import annotations

import logging
from typing import NamedTuple

from .errors import InconclusiveError
from .groebner import (
    MAX_DIMENSION_VARS,
    Ideal,
    ideal_contains,
    ideal_equal,
    initial_ideal,
    is_regular_sequence,
    krull_dimension,
)
from .poly import PolyRing, Polynomial, to_rational
from .resolution import homological_summary, minimal_free_resolution
from .toric import IntegerMatrix, as_matrix, semigroup_cm_dim2, toric_ideal, toric_ring, umbrella_consistency_check
from .weyl import (
    AdmissibleWeight,
    WeylAlgebra,
    WeylElement,
    WeylIdeal,
    euler_operator,
    homogenize_ideal,
    gr_initial_ideal,
)

log = logging.getLogger(__name__)


class EulerOperators(NamedTuple):
    operators: tuple
    beta: tuple


def _beta(A, beta):
    if beta is None:
        return (to_rational(0),) * A.d
    beta = tuple(to_rational(b) for b in beta)
    if len(beta) != A.d:
        raise ValueError(f"beta has length {len(beta)}, expected d={A.d}")
    return beta


def weyl_algebra(A, homogenized=False) -> WeylAlgebra:
    return WeylAlgebra(as_matrix(A, check=False).n, homogenized)


def euler_operators(A, beta=None, algebra=None) -> EulerOperators:
    """``E_i - beta_i`` with ``E_i = sum_j a_ij x_j d_j``."""
    A = as_matrix(A)
    beta = _beta(A, beta)
    D = algebra or weyl_algebra(A)
    ops = tuple(euler_operator(row, D, b) for row, b in zip(A.rows, beta))
    return EulerOperators(ops, beta)


def _in_weyl(f: Polynomial, D: WeylAlgebra) -> WeylElement:
    """A polynomial in ``d1..dn`` read as an operator in ``D``."""
    n = D.n
    pad = (0,) * (D.nvars - 2 * n)
    return WeylElement(D, {(0,) * n + m + pad: c for m, c in f.terms.items()})


def gkz_ideal(A, beta=None) -> WeylIdeal:
    """``D <I_A, E - beta>`` with ``I_A`` given by its reduced Groebner basis."""
    A = as_matrix(A)
    D = weyl_algebra(A)
    IA = toric_ideal(A)
    gens = [_in_weyl(g, D) for g in IA.generators]
    gens += list(euler_operators(A, beta, D).operators)
    return WeylIdeal(gens, D)


def gr_gkz(A, beta=None, ideal=None) -> Ideal:
    """``in_(1,1) H_A(beta)`` in ``S = Q[x, d]``."""
    H = ideal or gkz_ideal(A, beta)
    return gr_initial_ideal(H, AdmissibleWeight.ones(H.algebra.n))


def gr_gkz_homogenized(A, beta=None, ideal=None) -> Ideal:
    """``in_(1,1,0)`` of the homogenized GKZ ideal, in ``S[h]``."""
    H = homogenize_ideal(ideal or gkz_ideal(A, beta))
    return gr_initial_ideal(H, AdmissibleWeight.ones(H.algebra.n))


def _lift_to_S(I: Ideal, S: PolyRing, n) -> Ideal:
    """Extend an ideal of ``Q[d1..dn]`` to ``S = Q[x1..xn, d1..dn]``."""
    return I.map_into(S, list(range(n, 2 * n)))


def euler_forms(A, S: PolyRing):
    """The ``E_i`` as commutative polynomials in ``S``."""
    A = as_matrix(A)
    n = A.n
    out = []
    for row in A.rows:
        terms = {}
        for j, a in enumerate(row):
            if a:
                e = [0] * S.nvars
                e[j] = e[n + j] = 1
                terms[tuple(e)] = a
        out.append(Polynomial(S, terms))
    return out


def initial_toric(A) -> Ideal:
    """``in_(1) I_A`` in the standard-graded ring ``R``."""
    A = as_matrix(A)
    R = toric_ring(A, graded=False)
    IA = toric_ideal(A, R)
    return initial_ideal(IA, [1] * A.n) if IA.generators else IA


def toric_plus_euler(A) -> Ideal:
    """``in_(1) I_A * S + <E>``."""
    A = as_matrix(A)
    S = weyl_algebra(A).graded_ring()
    base = _lift_to_S(initial_toric(A), S, A.n)
    return base + euler_forms(A, S)


class CMReport(NamedTuple):
    matrix: IntegerMatrix
    beta: tuple
    verdict_semigroup_ring: bool
    verdict_groebner_deformation: bool
    verdict_gkz: bool
    summaries: dict
    betti: dict
    diagnostics: dict

    @property
    def verdicts(self):
        return (self.verdict_semigroup_ring, self.verdict_groebner_deformation, self.verdict_gkz)


def _summary(name, I, max_vars):
    log.info("resolving %s in %d variables", name, I.ring.nvars)
    res = minimal_free_resolution(I)
    return homological_summary(I, max_vars, resolution=res), res.betti


def classify(A, beta=None, box=None, umbrella_check=True, max_vars=MAX_DIMENSION_VARS) -> CMReport:
    """Three Cohen-Macaulay verdicts for ``A`` and supporting data.

    (i) ``R/I_A`` under the A-grading, (ii) ``R/in_(1) I_A`` and
    (iii) ``S/in_(1,1) H_A(beta)``, both under the standard grading.
    """
    A = as_matrix(A)
    beta = _beta(A, beta)
    n = A.n

    IA = toric_ideal(A)
    s1, b1 = _summary("I_A", IA, max_vars)
    inIA = initial_toric(A)
    s2, b2 = _summary("in I_A", inIA, max_vars)
    H = gkz_ideal(A, beta)
    gr = gr_gkz(A, beta, ideal=H)
    s3, b3 = _summary("gr H_A", gr, max_vars)

    S = gr.ring
    base = _lift_to_S(inIA, S, n)
    E = euler_forms(A, S)
    shadow = base + E
    diagnostics = {}
    rs = is_regular_sequence(E, base)
    diagnostics["euler_regular_sequence"] = rs.is_regular
    diagnostics["euler_regular_failed_at"] = rs.failed_at
    diagnostics["dim_R_in_IA"] = s2.dim
    diagnostics["dim_S_gr"] = s3.dim
    diagnostics["dim_S_in_IA_E"] = krull_dimension(shadow, max_vars)
    diagnostics["gr_contains_in_IA_E"] = ideal_contains(gr, shadow)
    diagnostics["gr_equals_in_IA_E"] = diagnostics["gr_contains_in_IA_E"] and ideal_contains(shadow, gr)
    if umbrella_check:
        uc = umbrella_consistency_check(A)
        diagnostics["umbrella_top_faces"] = uc.facet_count
        diagnostics["umbrella_consistent"] = uc.ok
    if A.d == 2:
        try:
            diagnostics["semigroup_criterion"] = semigroup_cm_dim2(A, region=box)
        except InconclusiveError as exc:
            log.warning("semigroup criterion inconclusive: %s", exc)
            diagnostics["semigroup_criterion"] = "inconclusive"
    return CMReport(
        A, beta, s1.is_cm, s2.is_cm, s3.is_cm,
        {"semigroup_ring": s1, "groebner_deformation": s2, "gkz": s3},
        {"semigroup_ring": b1, "groebner_deformation": b2, "gkz": b3},
        diagnostics,
    )


def homogenized_betti_check(A, beta=None):
    """Betti tables of ``S[h]/in H^(h)`` and of ``S/in H`` extended by ``h``."""
    from .resolution import extend_ring

    H = gkz_ideal(A, beta)
    gr = gr_gkz(A, beta, ideal=H)
    grh = gr_gkz_homogenized(A, beta, ideal=H)
    ext = extend_ring(gr, grh.ring.names[-1])
    same_ideal = ideal_equal(ext, grh)
    return minimal_free_resolution(grh).betti, minimal_free_resolution(ext).betti, same_ideal
