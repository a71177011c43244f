"""Acceptance criteria, one test each, at the stated tolerances.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import json
import math
import random
import time
from fractions import Fraction as F

import pytest

from lacunary.bautin import (
    assemble_matrix,
    build_block,
    closed_form_block,
    closed_form_entry,
    column_poly,
    determinant,
    diagonal_closed_form,
    kappa_matrix,
    mat_mul,
    matrix_stats,
    minor_abs2,
    named_minor_rows,
    triangulated,
)
from lacunary.bounds import asymptotic_slope, closed_invariants, normalize_curve, zero_bound_report
from lacunary.cli import main
from lacunary.lacunarity import align_diagram, check_condition, geometric_diagram
from lacunary.lemmas import run_all
from lacunary.poly import ZERO, ExactComplex, ParamCurve, UniPoly, jet_proportionality
from lacunary.rational import rational_bautin_rows
from lacunary.report import emit, parse
from lacunary.verifier import multiplicity_witness, valuation_of, verify_run

from _gen import conditioned_pairs, l1_diagram, random_curve, random_t_set, regular_equal_curve, singular_curve

ONE = ExactComplex(1)


class Clock:
    def __init__(self, limit):
        self.limit = limit
        self.start = time.perf_counter()

    def check(self):
        elapsed = time.perf_counter() - self.start
        assert elapsed < self.limit, f"took {elapsed:.1f} s, limit {self.limit} s"


@pytest.mark.criterion(1, "triangulation exactness on 200 regular fixtures")
def test_triangulation_exactness():
    clock = Clock(60)
    rng = random.Random(101)
    for _ in range(200):
        curve = regular_equal_curve(rng, max_d=6)
        n = rng.randint(0, 8)
        t_set = random_t_set(rng, n)
        blk = build_block(curve, n, t_set)
        tri = triangulated(curve, blk)
        tau = blk.t_set.size
        for i in range(tau):
            assert all(not tri[i][j] for j in range(i + 1, tau)), (curve, n, t_set)
            assert tri[i][i] == diagonal_closed_form(curve, n, blk.t_set, i + 1), (curve, n, t_set, i)
    clock.check()


def _equal_fixture(rng):
    curve = random_curve(rng, "equal", max_d=6, bound=20)
    n = rng.randint(0, 8)
    return curve, n, random_t_set(rng, n, 4)


@pytest.mark.criterion(2, "closed-form entries equal the exact product on 100 fixtures")
def test_full_coefficient_formula():
    clock = Clock(120)
    rng = random.Random(202)
    for index in range(100):
        curve, n, t_set = _equal_fixture(rng)
        blk = build_block(curve, n, t_set)
        # direct route: block times the column-operation matrix, by plain matrix product
        direct = mat_mul([list(r) for r in blk.entries], kappa_matrix(blk.t_set, curve.alpha0, curve.a0))
        closed = closed_form_block(curve, n, t_set, len(direct))
        assert closed == direct, (curve, n, t_set)
        if index % 10 == 0:
            r = rng.randint(1, len(direct))
            c = rng.randint(1, blk.t_set.size)
            assert closed_form_entry(curve, n, t_set, r, c) == direct[r - 1][c - 1]
    clock.check()


@pytest.mark.criterion(3, "singular triangulation on 50 fixtures with k in {1,2,3}")
def test_singular_case():
    rng = random.Random(303)
    for index in range(50):
        k = 1 + index % 3
        curve, mu = singular_curve(rng, k, nu=rng.randint(1, 2), extra=3)
        n = rng.randint(1, 5)
        tau = rng.randint(1, min(3, n + 1))
        t_set = tuple(sorted(rng.sample(range(1, n + 2), tau)))
        blk = build_block(curve, n, t_set)
        tri = triangulated(curve, blk)
        gap = curve.alpha_at(k + 1) - mu * curve.a_at(k + 1)
        for c in range(1, tau + 1):
            lead = (k + 1) * c - k  # 1-based row of the first nonzero entry
            assert lead <= len(tri)
            assert all(not tri[r - 1][c - 1] for r in range(1, lead)), (curve, t_set, c)
            t_c = t_set[c - 1]
            inv_k = math.prod(t_c - t for t in t_set[: c - 1])  # 1 / K for the prefix
            expect = (F(inv_k, math.factorial(c - 1)) * mu ** (t_c - c)
                      * curve.a0 ** (n - c + 1) * gap ** (c - 1))
            assert tri[lead - 1][c - 1] == expect, (curve, t_set, c)


@pytest.mark.criterion(4, "combinatorial lemma suites, exhaustive default ranges")
def test_lemma_suites():
    clock = Clock(120)
    results = run_all()
    for r in results:
        assert r.ok and r.checks > 0, (r.name, r.failures[:3])
    clock.check()


PAIRS = conditioned_pairs(505, 100)


@pytest.mark.criterion(5, "closed invariants match linear algebra on 100 conditioned pairs")
def test_closed_forms_vs_linear_algebra():
    geometric = 0
    for curve, diag in PAIRS:
        tag = check_condition(diag, curve, "L1")
        assert tag.holds
        inv = closed_invariants(curve, diag, None, tag)
        matrix = assemble_matrix(curve, diag)
        stats = matrix_stats(matrix)
        assert (inv.b, inv.sigma) == (stats.b, stats.sigma), (curve, diag)
        rows, cols = named_minor_rows(curve, diag)
        assert minor_abs2(matrix.rows, rows, cols) >= inv.delta.abs2(), (curve, diag)
        geometric += len(set(diag.degrees)) > 1 and all(
            diag.degrees[i + 1] > diag.degrees[i] for i in range(len(diag.degrees) - 1))
    assert geometric > 0


def _verification_fixtures(count):
    out = []
    for curve, diag in PAIRS:
        if jet_proportionality(curve).fully_proportional or diag.m < 2:
            continue
        out.append((curve, diag))
        if len(out) == count:
            break
    return out


@pytest.mark.criterion(6, "no violations in 500-sample runs on 20 normalized fixtures")
def test_bound_verification():
    clock = Clock(300)
    cases = set()
    for index, (curve, diag) in enumerate(_verification_fixtures(20)):
        norm = normalize_curve(curve)
        rep = zero_bound_report(norm, diag)
        run = verify_run(norm, diag, rep, 500, seed=index)
        cases.add(rep.case_tag)
        assert run.passed, (curve, diag, run.violations)
        assert run.max_count_quarter <= rep.z_bound_int and run.max_count_rho <= rep.b
        assert run.certified >= 450
    assert {"distinct_mult", "equal_mult"} <= cases
    clock.check()


@pytest.mark.criterion(7, "multiplicity witness has valuation exactly b >= m - 1")
def test_multiplicity_witness():
    checked = 0
    for curve, diag in PAIRS:
        if jet_proportionality(curve).fully_proportional:
            continue
        tag = check_condition(diag, curve, "L1")
        inv = closed_invariants(curve, diag, None, tag)
        matrix = assemble_matrix(curve, diag)
        w = multiplicity_witness(matrix, inv.b)
        assert valuation_of(matrix, w.exact) == inv.b
        assert diag.m - 1 <= inv.b
        checked += 1
    assert checked >= 60


def _inverse_series(w: list, order: int) -> list:
    s = [ONE / w[0]]
    for k in range(1, order + 1):
        acc = ZERO
        for j in range(1, min(k, len(w) - 1) + 1):
            acc = acc + w[j] * s[k - j]
        s.append(-acc / w[0])
    return s


@pytest.mark.criterion(8, "rational factorization and minor scaling on 50 fixtures")
def test_rational_factorization():
    rng = random.Random(808)
    done = 0
    while done < 50:
        base = random_curve(rng, rng.choice(("distinct", "equal")), max_d=3, bound=5)
        dv = rng.randint(1, 3)
        v = UniPoly([ExactComplex(rng.choice([1, -2, 3, F(3, 2)]))]
                    + [ExactComplex(F(rng.randint(-4, 4), rng.randint(1, 3))) for _ in range(dv)])
        if v.degree != dv:
            continue
        curve = ParamCurve.from_polys(base.p1, base.p2, v)
        diag = l1_diagram(rng, curve, rng.randint(1, 2), max_top=10)
        if diag is None:
            continue
        rat = rational_bautin_rows(curve, diag)
        poly = rat.poly_matrix
        b = matrix_stats(poly).b
        offsets = poly.column_offsets
        for blk, off in zip(poly.blocks, offsets):
            n = blk.degree
            size = rat.row_cap + 1
            s = _inverse_series([(v ** n).coeff(i) for i in range((v ** n).degree + 1)], size - 1)
            g = [[s[i - j] if i >= j else ZERO for j in range(size)] for i in range(size)]
            for j in range(blk.t_set.size):
                col = [poly.row(r)[off + j] for r in range(size)]
                product = [sum((g[i][q] * col[q] for q in range(i + 1)), ZERO) for i in range(b + 1)]
                assert product == [rat.rows[i][off + j] for i in range(b + 1)], (curve, diag, n)
            assert s[0] == ONE / v.coeff(0) ** n
        # per-block witness minors scale by s0^tau
        jet = jet_proportionality(curve.polynomial_part())
        rows, cols = named_minor_rows(curve.polynomial_part(), diag, jet)
        pos = 0
        for blk in poly.blocks:
            count = blk.t_set.size
            r_idx, c_idx = rows[pos:pos + count], cols[pos:pos + count]
            pos += count
            sub = lambda m: [[m[r][c] for c in c_idx] for r in r_idx]
            s0 = ONE / v.coeff(0) ** blk.degree
            assert determinant(sub(rat.rows)) == determinant(sub(poly.rows)) * s0 ** count
            assert determinant(sub(poly.rows))
        done += 1


def _z_over(curve, tau, depth):
    norm = normalize_curve(curve)
    diag = align_diagram(curve, geometric_diagram(curve.bigD, tau, depth, "highest"))
    return zero_bound_report(norm, diag).z_bound, diag.d


@pytest.mark.criterion(9, "geometric-diagram asymptotics and the usefulness threshold")
def test_asymptotics():
    half = F(1, 2)
    for p1, p2, tau in ((UniPoly([0, 0, half, half]), UniPoly([0, 1]), 2),
                        (UniPoly([0, half, half]), UniPoly([0, 1]), 1)):
        curve = ParamCurve.from_polys(p1, p2)
        slope = asymptotic_slope(curve, tau)
        ratios = []
        for j in range(2, 6):
            z, d = _z_over(curve, tau, j)
            ratios.append(float(z) / d)
        assert abs(ratios[-1] - slope) <= 0.05 * slope, (ratios, slope)
        assert ratios == sorted(ratios, reverse=True)
    # Z against d D on both sides of D = 5 (nu log 2 + tau log(1/|alpha0 a0|))
    big_d = 4
    fast = ParamCurve.from_polys(UniPoly([0, F(19, 20), 0, 0, F(1, 20)]), UniPoly([0, 1]))
    slow = ParamCurve.from_polys(UniPoly([0, half, 0, 0, half]), UniPoly([0, 1]))
    assert asymptotic_slope(fast, 1) < big_d < asymptotic_slope(slow, 1)
    for j in (3, 4):
        z, d = _z_over(fast, 1, j)
        assert z < d * big_d
    for j in (2, 3, 4):
        z, d = _z_over(slow, 1, j)
        assert z > d * big_d


@pytest.mark.criterion(10, "CLI round trip, determinism and fault injection")
def test_cli_contract(tmp_path, capsys):
    cfg = tmp_path / "a.json"
    cfg.write_text(json.dumps({"curve": {"p1": ["0", "0", "0", "1"], "p2": ["0", "0", "1"]},
                               "diagram": {"degrees": [1], "selections": [[1, 2]]},
                               "options": {"samples": 500, "seed": 7}}))
    outs = [tmp_path / "r1.json", tmp_path / "r2.json"]
    for out in outs:
        assert main(["verify", "--config", str(cfg), "--out", str(out)]) == 0
    text = outs[0].read_text()
    assert outs[1].read_text() == text
    assert emit(parse(text)) == text
    assert main(["bound", "--config", str(cfg), "--out", str(tmp_path / "b.json")]) == 0
    b_text = (tmp_path / "b.json").read_text()
    assert emit(parse(b_text)) == b_text
    small = ["check-lemmas", "--max-point", "5", "--max-degree", "4"]
    assert main(small) == 0
    assert main(small + ["--inject-fault"]) != 0
    capsys.readouterr()


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
