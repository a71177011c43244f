"""Rational parametrizations (P1/V, P2/V): Bautin rows of g = Q(P/V) through
the Toeplitz factorization M(g) = G M(f)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bautin import BautinMatrix, assemble_matrix, column_poly, minor_abs2, named_minor_rows
from .errors import DomainError, SingularDenominatorError, StructureError
from .lacunarity import ConditionTag, LacunarityDiagram
from .poly import (
    ZERO,
    ExactComplex,
    ParamCurve,
    jet_proportionality,
    series_divide,
    series_inverse_power,
)


@dataclass(frozen=True)
class GMatrix:
    """Lower-triangular Toeplitz matrix with (i, j) entry s_{i-j}."""

    s: tuple[ExactComplex, ...]

    @property
    def size(self) -> int:
        return len(self.s)

    def entry(self, i: int, j: int) -> ExactComplex:
        return self.s[i - j] if i >= j else ZERO

    def dense(self) -> list[list[ExactComplex]]:
        return [[self.entry(i, j) for j in range(self.size)] for i in range(self.size)]

    def apply(self, column: list[ExactComplex]) -> list[ExactComplex]:
        n = self.size
        col = list(column[:n]) + [ZERO] * max(0, n - len(column))
        out = []
        for i in range(n):
            acc = ZERO
            for j in range(i + 1):
                x = col[j]
                if x:
                    acc = acc + self.s[i - j] * x
            out.append(acc)
        return out


def g_matrix(v, degree: int, size: int) -> GMatrix:
    return GMatrix(tuple(series_inverse_power(v, degree, size - 1)))


@dataclass
class RationalBautinRows:
    rows: list[list[ExactComplex]]  # rows 0..row_cap of M(g)
    poly_matrix: BautinMatrix  # M(f) for the numerators
    g_by_degree: dict[int, GMatrix]
    row_cap: int

    def as_matrix(self) -> BautinMatrix:
        return BautinMatrix(self.poly_matrix.blocks, self.rows, self.poly_matrix.column_offsets)


def rational_bautin_rows(curve: ParamCurve, diagram: LacunarityDiagram,
                         row_cap: int | None = None) -> RationalBautinRows:
    """Rows 0..row_cap of the Bautin matrix of Q(P1/V, P2/V).

    Each column is computed by direct series division and through the
    Toeplitz factorization; the two must agree exactly.
    """
    if curve.v is None:
        raise DomainError("curve has no denominator")
    v = curve.v
    if not v.coeff(0):
        raise SingularDenominatorError("V(0) = 0")
    numerators = curve.polynomial_part()
    poly = assemble_matrix(numerators, diagram)
    if row_cap is None:
        row_cap = poly.total_rows + max(b.n_rows for b in poly.blocks)
    size = row_cap + 1
    m = poly.m
    rows = [[ZERO] * m for _ in range(size)]
    gs: dict[int, GMatrix] = {}
    for blk, off in zip(poly.blocks, poly.column_offsets):
        n = blk.degree
        if n not in gs:
            gs[n] = g_matrix(v, n, size)
        g = gs[n]
        vn = v ** n
        for j, t in enumerate(blk.t_set):
            col_poly = [poly.rows[r][off + j] if r < poly.total_rows else ZERO for r in range(size)]
            via_g = g.apply(col_poly)
            num = column_poly(numerators, n, t)
            direct = series_divide(num, vn, row_cap)
            if via_g != direct:
                raise StructureError(f"factorization mismatch in degree {n}, column {t}")
            for r in range(size):
                rows[r][off + j] = direct[r]
    return RationalBautinRows(rows, poly, gs, row_cap)


def block_minor_scaling(curve: ParamCurve, diagram: LacunarityDiagram,
                        rational: RationalBautinRows) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Per block: (|rational minor|^2, |polynomial minor|^2, |s0|^(2 tau)).

    The minor uses the rows named blockwise by the closed-form analysis.
    """
    jet = jet_proportionality(curve.polynomial_part())
    rows, cols = named_minor_rows(curve, diagram, jet)
    out = []
    pos = 0
    for n, s in diagram.blocks():
        count = 1 if jet.fully_proportional else s.size
        r_idx = rows[pos:pos + count]
        c_idx = cols[pos:pos + count]
        pos += count
        rat = minor_abs2(rational.rows, r_idx, c_idx)
        pol = minor_abs2(rational.poly_matrix.rows, r_idx, c_idx)
        s0 = rational.g_by_degree[n].s[0]
        out.append((rat, pol, s0.abs2() ** count))
    return out


def rational_bound_report(curve, diagram: LacunarityDiagram, condition: str | ConditionTag = "auto"):
    """Zero-count report for a normalized rational curve."""
    from .bounds import NormalizedCurve, zero_bound_report

    base = curve.curve if isinstance(curve, NormalizedCurve) else curve
    if base.v is None:
        raise DomainError("rational_bound_report needs a denominator")
    return zero_bound_report(curve, diagram, condition)
