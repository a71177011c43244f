import random
from fractions import Fraction as F

import pytest

from lacunary.errors import CaseError, StructureError
from lacunary.lacunarity import (
    LacunarityDiagram,
    aggregates,
    align_diagram,
    check_condition,
    geometric_diagram,
    resolve_condition,
)
from lacunary.poly import ParamCurve, UniPoly

from _gen import l1_diagram, random_curve

A = ParamCurve.from_polys(UniPoly([0, 0, 0, 1]), UniPoly([0, 0, 1]))
B = ParamCurve.from_polys(UniPoly([0, 1, 1]), UniPoly([0, 1, -1]))


def test_aggregates_fixture_a():
    agg = aggregates(LacunarityDiagram.build([1], [[1, 2]]), A)
    assert (agg.t_bar, agg.tau_n_bar, agg.nu_tilde) == (3, 2, (3,))


def test_aggregates_single_constant_block():
    agg = aggregates(LacunarityDiagram.build([0], [[1]]), A)
    assert agg.t_bar == 1 and agg.c_bar == 1


def test_aggregates_fixture_b():
    agg = aggregates(LacunarityDiagram.build([1, 3], [[1, 2], [1, 3]]), B)
    assert (agg.t_bar, agg.tau_n_bar) == (7, 8)


def test_l1_examples():
    assert check_condition(LacunarityDiagram.build([1, 3], [[1], [1]]), B, "L1").holds
    tag = check_condition(LacunarityDiagram.build([1, 2], [[1], [1]]), B, "L1")
    assert not tag.holds and tag.witness == (0, 1)
    single = LacunarityDiagram.build([4], [[1, 2]])
    for kind in ("L1", "L2a", "L3a"):
        assert check_condition(single, B, kind).holds


def test_case_mismatch():
    with pytest.raises(CaseError):
        check_condition(LacunarityDiagram.build([1], [[1]]), A, "L2a")
    with pytest.raises(CaseError):
        check_condition(LacunarityDiagram.build([1], [[1]]), B, "L3b")


def test_geometric_examples():
    assert geometric_diagram(2, 2, 3).degrees == (0, 1, 3, 9)
    assert geometric_diagram(1, 1, 2).degrees == (0, 1, 2)
    assert geometric_diagram(5, 1, 1).degrees == (0, 1)
    assert geometric_diagram(3, 2, 2, "highest").selections[-1].values == (4, 5)
    assert geometric_diagram(3, 3, 2, "spread").selections[-1].values == (1, 3, 5)


def test_geometric_satisfies_l1():
    rng = random.Random(2)
    for _ in range(30):
        c = random_curve(rng, rng.choice(["distinct", "equal"]))
        d = align_diagram(c, geometric_diagram(c.bigD, rng.randint(1, 3), rng.randint(1, 4)))
        assert check_condition(d, c, "L1").holds


def test_invalid_diagrams():
    with pytest.raises(StructureError):
        LacunarityDiagram.build([2, 1], [[1], [1]])
    with pytest.raises(StructureError):
        LacunarityDiagram.build([1], [[3]])


def test_mirror_round_trip():
    d = LacunarityDiagram.build([1, 4], [[1], [2, 5]])
    assert d.mirrored().mirrored() == d
    assert d.mirrored().selections[1].values == (1, 4)
    assert LacunarityDiagram.from_dict(d.to_dict()) == d


def test_l1_implies_l2():
    rng = random.Random(9)
    seen = 0
    while seen < 40:
        c = random_curve(rng, rng.choice(["distinct", "equal"]))
        d = l1_diagram(rng, c, rng.randint(2, 3))
        if d is None or not check_condition(d, c, "L1").holds:
            continue
        seen += 1
        kind = "L2a" if c.nu1 == c.nu2 else "L2b"
        assert check_condition(d, c, kind).holds


def test_witness_really_violates():
    rng = random.Random(4)
    for _ in range(50):
        c = random_curve(rng, "equal")
        degs = sorted(rng.sample(range(1, 12), 3))
        d = LacunarityDiagram.build(degs, [[1]] * 3)
        tag = check_condition(d, c, "L1")
        if not tag.holds:
            l, l1 = tag.witness
            assert not c.nu * degs[l1] > degs[l] * c.bigD


def test_resolve_auto_falls_back():
    d = LacunarityDiagram.build([1, 2], [[1], [1]])
    assert resolve_condition(d, B, "auto").kind == "L2a"
    assert not resolve_condition(d, B, "l1").holds
