import math
import random
from fractions import Fraction as F

import pytest
from mpmath import mp

from lacunary.bautin import assemble_matrix, matrix_stats, minor_abs2, named_minor_rows
from lacunary.bounds import (
    BernsteinParams,
    bernstein_zero_bound,
    c_estimate,
    check_cauchy,
    closed_invariants,
    unit_radius_zero_bound,
    normalize_curve,
    sigma_bar,
    general_zero_bound,
    zero_bound_report,
)
from lacunary.errors import PreconditionError, UnsupportedError
from lacunary.lacunarity import LacunarityDiagram, align_diagram, check_condition, geometric_diagram
from lacunary.poly import ParamCurve, UniPoly

from _gen import conditioned_pairs

A = ParamCurve.from_polys(UniPoly([0, 0, 0, 1]), UniPoly([0, 0, 1]))
B = ParamCurve.from_polys(UniPoly([0, 1, 1]), UniPoly([0, 1, -1]))
D = ParamCurve.from_polys(UniPoly([0, 2, 2]), UniPoly([0, 1, 1]))
DIAG_A = LacunarityDiagram.build([1], [[1, 2]])
DIAG_B = LacunarityDiagram.build([1, 3], [[1, 2], [1, 3]])

with mp.workdps(40):
    UNIT_Z = 15 * mp.log(2) + 5 * mp.log(2 + 4 * mp.sqrt(8) / 3)
    UNIT_RHO = min(mp.mpf(1) / 2, 3 / (4 * mp.sqrt(8))) / 512


def test_normalize_examples():
    n = normalize_curve(A)
    assert n.scale == 1 and n.curve.p1 == A.p1 and n.curve.p2 == A.p2
    n = normalize_curve(ParamCurve.from_polys(UniPoly([0, 2]), UniPoly([0, 1])))
    assert n.scale == 2 and n.curve.p1 == UniPoly([0, 1]) and n.curve.p2 == UniPoly([0, F(1, 2)])


def test_normalize_radius():
    n = normalize_curve(B, big_r=F(1, 2))
    # P(z/2) for z(1+z) has max 3/4 on the unit circle
    assert abs(float(n.scale) - 0.75) < 1e-8
    assert n.curve.alpha0 == B.alpha0 / 2 / n.scale


def test_sigma_bar_examples():
    assert sigma_bar(1, sigma=5) == 5
    assert sigma_bar(0.25, sigma=400) <= 4 / 3
    assert sigma_bar(0.5, basis_rows=[0], b=2) == 0.25


def test_bernstein_examples():
    count, _ = bernstein_zero_bound(BernsteinParams(r=0.5, alpha=0.5, big_k=1.0), 1)
    assert count == 0
    assert c_estimate(1, 0.25, 1, 1, 3) == 4
    assert math.isclose(c_estimate(2, 1, 1, 1, 3), 2 * math.sqrt(2))
    assert math.isclose(c_estimate(2, 0.5, 1, 1, 3), 4 * math.sqrt(2))


def test_unit_radius_numbers():
    z, rho = unit_radius_zero_bound(3, 2, 1)
    assert UNIT_Z - 1e-15 <= z <= UNIT_Z + 1e-12
    assert UNIT_RHO - 1e-15 <= rho <= UNIT_RHO + 1e-18
    assert abs(float(z) - 19.16) < 0.01 and abs(float(rho) - 5.18e-4) < 1e-6


def test_general_form_at_unit_radius_is_finite():
    z, rho = general_zero_bound(3, 2, 1.0)
    assert z > 3 and 0 < rho < 1


def test_fixture_a_report():
    rep = zero_bound_report(normalize_curve(A), DIAG_A)
    assert (rep.b, rep.sigma, rep.case_tag, rep.condition_used) == (3, 2, "distinct_mult", "L1")
    assert rep.z_bound_refined >= UNIT_Z - 1e-15 and abs(float(rep.z_bound_refined) - 19.16) < 0.01
    assert rep.z_bound_int == 20
    assert rep.z_bound == min(rep.z_bound_generic, rep.z_bound_refined)
    assert abs(float(rep.rho_lb) - 5.18e-4) < 1e-6
    assert rep.delta_lb == 1


def test_closed_invariants_match_fixtures():
    for curve, diag in ((A, DIAG_A), (B, DIAG_B), (D, geometric_diagram(2, 2, 2))):
        tag = check_condition(diag, curve, "L1")
        inv = closed_invariants(curve, diag, None, tag)
        st = matrix_stats(assemble_matrix(curve, diag))
        assert (inv.b, inv.sigma) == (st.b, st.sigma)
        rows, cols = named_minor_rows(curve, diag)
        assert minor_abs2(assemble_matrix(curve, diag).rows, rows, cols) >= inv.delta.abs2()
    inv = closed_invariants(B, DIAG_B, None, check_condition(DIAG_B, B, "L1"))
    assert (inv.b, inv.sigma) == (4, 4)


def test_unit_initial_coefficients_drop_log_terms():
    # alpha0 = a0 = 1, distinct case: delta bound is exactly 1
    inv = closed_invariants(A, DIAG_A, None, check_condition(DIAG_A, A, "L1"))
    assert inv.delta.abs2() == 1


def test_z_at_least_b_everywhere():
    for curve, diag in conditioned_pairs(21, 30):
        norm = normalize_curve(curve)
        try:
            rep = zero_bound_report(norm, diag)
        except UnsupportedError:
            continue
        assert rep.z_bound >= rep.b and rep.z_bound_int >= rep.b


def test_monotone_in_initial_coefficients():
    diag = LacunarityDiagram.build([1, 3], [[1, 2], [1, 2]])
    zs = []
    for a0 in (F(1, 4), F(1, 2), F(1)):
        c = ParamCurve.from_polys(UniPoly([0, 0, 1]), UniPoly([0, a0]))
        zs.append(zero_bound_report(c, diag).z_bound)
    assert zs[0] >= zs[1] >= zs[2]


def test_unnormalized_rejected():
    with pytest.raises(PreconditionError):
        zero_bound_report(ParamCurve.from_polys(UniPoly([0, 3]), UniPoly([0, 0, 1])), DIAG_A)


def test_condition_failure_is_precondition():
    with pytest.raises(PreconditionError):
        zero_bound_report(normalize_curve(B), LacunarityDiagram.build([1, 2], [[1], [1]]), "l1")


def test_cauchy_check():
    c = ParamCurve.from_polys(UniPoly([0, 1]), UniPoly([0, 0, 1]), UniPoly([F(1, 2), 1]))
    with pytest.raises(PreconditionError):
        check_cauchy(c)


def test_proportional_report():
    diag = geometric_diagram(2, 2, 2)
    rep = zero_bound_report(normalize_curve(D), diag)
    assert rep.case_tag == "proportional" and rep.sigma == 3 and rep.b == diag.d


def test_headline_numbers_are_certified_directions():
    rep = zero_bound_report(normalize_curve(B), DIAG_B)
    assert rep.z_bound_int == int(mp.ceil(rep.z_bound))
    assert rep.rho_lb <= rep.rho_lb_generic or rep.rho_lb <= rep.rho_lb_refined
