"""Bautin blocks, the Vandermonde column triangulation and exact rank data.

Row indices are global powers of z.  A block of degree n with selection T
has one column per t in T holding the Taylor coefficients of
P1^(t-1) P2^(n-t+1), starting at z^(nu_bar) where nu_bar is the valuation of
its first column.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .combinatorics import (
    ColumnSet,
    elementary_symmetric_all,
    last_weight,
    vandermonde_weights,
)
from .errors import (
    CaseError,
    ColumnIndexError,
    DegenerateError,
    DomainError,
    ShapeError,
    StructureError,
)
from .lacunarity import LacunarityDiagram
from .poly import (
    DEFAULT_MAX_SLOTS,
    ONE,
    ZERO,
    ExactComplex,
    JetData,
    ParamCurve,
    UniPoly,
    compose_monomial,
    jet_proportionality,
)

Matrix = list  # list of rows, each a list of ExactComplex

__all__ = [
    "BautinBlock", "BautinMatrix", "MatrixStats", "jet_proportionality",
    "column_poly", "build_block", "kappa_matrix", "mat_mul", "triangulate_block",
    "triangulated", "diagonal_closed_form", "singular_entry_closed_form",
    "closed_form_entry", "closed_form_block", "assemble_matrix", "matrix_stats", "named_minor_rows",
    "minor_abs2", "determinant",
]


@dataclass(frozen=True)
class BautinBlock:
    degree: int
    t_set: ColumnSet
    entries: tuple[tuple[ExactComplex, ...], ...]  # rows x tau
    row_offset: int
    n_i_lengths: tuple[int, ...]

    @property
    def n_rows(self) -> int:
        return len(self.entries)

    @property
    def tau(self) -> int:
        return self.t_set.size

    def column(self, j: int) -> list[ExactComplex]:
        return [row[j] for row in self.entries]

    def upper_square(self) -> list[list[ExactComplex]]:
        return [list(row) for row in self.entries[: self.tau]]


def column_poly(curve: ParamCurve, degree: int, t: int,
                max_slots: int = DEFAULT_MAX_SLOTS) -> UniPoly:
    """P1^(t-1) P2^(degree-t+1), the image of X^(t-1) Y^(degree-t+1)."""
    if not 1 <= t <= degree + 1:
        raise ColumnIndexError(f"column {t} outside 1..{degree + 1}")
    return compose_monomial(curve, t - 1, degree - t + 1, max_slots)


def build_block(curve: ParamCurve, degree: int, t_set,
                max_slots: int = DEFAULT_MAX_SLOTS) -> BautinBlock:
    t_set = t_set if isinstance(t_set, ColumnSet) else ColumnSet(tuple(t_set))
    for t in t_set:
        if not 1 <= t <= degree + 1:
            raise ColumnIndexError(f"column {t} outside 1..{degree + 1}")
    polys = [column_poly(curve, degree, t, max_slots) for t in t_set]
    t1 = t_set[0]
    offset = (t1 - 1) * curve.nu1 + (degree - t1 + 1) * curve.nu2
    top = max(p.degree for p in polys)
    n_rows = top - offset + 1
    entries = tuple(
        tuple(p.coeff(offset + r) for p in polys) for r in range(n_rows)
    )
    lengths = tuple(
        (degree - (t - 1)) * curve.d2 + (t - 1) * curve.d1 - curve.nu * degree for t in t_set
    )
    return BautinBlock(degree, t_set, entries, offset, lengths)


def kappa_matrix(t_set, alpha0, a0) -> list[list[ExactComplex]]:
    """Upper unitriangular column-operation matrix of the triangulation."""
    t_set = t_set if isinstance(t_set, ColumnSet) else ColumnSet(tuple(t_set))
    alpha0 = ExactComplex.coerce(alpha0)
    a0 = ExactComplex.coerce(a0)
    if not a0:
        raise DomainError("a0 must be nonzero")
    ratio = alpha0 / a0
    tau = t_set.size
    out = [[ZERO] * tau for _ in range(tau)]
    for j in range(tau):
        prefix = t_set.prefix(j + 1)
        w = vandermonde_weights(prefix)
        wj = w[t_set[j]]
        for i in range(j + 1):
            scale = w[t_set[i]] / wj
            out[i][j] = (ratio ** (t_set[j] - t_set[i])) * scale
    return out


def mat_mul(a: Sequence[Sequence[ExactComplex]], b: Sequence[Sequence[ExactComplex]]) -> Matrix:
    if not a:
        return []
    if len(a[0]) != len(b):
        raise ShapeError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0]) if b else 0}")
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        new = []
        for j in range(cols):
            acc = ZERO
            for x, brow in zip(row, b):
                y = brow[j]
                if x and y:
                    acc = acc + x * y
            new.append(acc)
        out.append(new)
    return out


def triangulate_block(block: BautinBlock, kappa) -> Matrix:
    """Return block . kappa (exact)."""
    if len(kappa) != block.tau or any(len(r) != block.tau for r in kappa):
        raise ShapeError(f"kappa must be {block.tau}x{block.tau}")
    return mat_mul(block.entries, kappa)


def triangulated(curve: ParamCurve, block: BautinBlock) -> Matrix:
    return triangulate_block(block, kappa_matrix(block.t_set, curve.alpha0, curve.a0))


def diagonal_closed_form(curve: ParamCurve, degree: int, t_set: ColumnSet, r: int) -> ExactComplex:
    """Diagonal entry at row r (1-based) of the triangulated block, regular case."""
    t_r = t_set[r - 1]
    num = 1
    for i in range(r - 1):
        num *= t_r - t_set[i]
    alpha0, a0 = curve.alpha0, curve.a0
    cross = curve.alpha_at(1) * a0 - alpha0 * curve.a_at(1)
    return (Fraction(num, math.factorial(r - 1)) * (alpha0 ** (t_r - r))
            * (a0 ** (degree - (t_r + r - 2))) * (cross ** (r - 1)))


def singular_entry_closed_form(curve: ParamCurve, jet: JetData, degree: int,
                               t_set: ColumnSet, c: int) -> ExactComplex:
    """Entry at row (k+1)c - k, column c of the triangulated block."""
    if jet.fully_proportional:
        raise CaseError("no leading singular entry for proportional curves")
    t_c = t_set[c - 1]
    k_c = last_weight(t_set.prefix(c))
    coef = 1 / (math.factorial(c - 1) * k_c)
    return (coef * (jet.mu ** (t_c - c)) * (curve.a0 ** (degree - c + 1))
            * (jet.delta_bar_k ** (c - 1)))


def _truncated_powers(coeffs: Sequence[ExactComplex], max_power: int, order: int) -> list[list[ExactComplex]]:
    """[x^w] (sum_{i>=1} coeffs[i] x^i)^L / L! for L <= max_power, w <= order."""
    base = [ZERO] + [coeffs[i] if i < len(coeffs) else ZERO for i in range(1, order + 1)]
    out = [[ONE] + [ZERO] * order]
    cur = out[0]
    for L in range(1, max_power + 1):
        nxt = [ZERO] * (order + 1)
        for i, x in enumerate(cur):
            if not x:
                continue
            for j in range(1, order + 1 - i):
                if base[j]:
                    nxt[i + j] = nxt[i + j] + x * base[j]
        cur = nxt
        out.append([v * Fraction(1, math.factorial(L)) for v in cur])
    return out


def _moment_ratios(t_set: ColumnSet, c: int, p_hi: int) -> dict[int, Fraction]:
    """k_p = sum_t t^p K_t / K_{t_c} over the prefix of size c, for p = c-1 .. p_hi."""
    w = vandermonde_weights(t_set.prefix(c))
    k_last = w[t_set[c - 1]]
    out = {c - 1: 1 / k_last}
    for p in range(c, p_hi + 1):
        out[p] = sum((Fraction(t) ** p * kt for t, kt in w.items()), Fraction(0)) / k_last
    return out


def _mono(A, B, l1: int, l2: int, w1: int) -> ExactComplex:
    """[x^w1] of the product of the two truncated power tables."""
    acc = ZERO
    for wa in range(0, w1 + 1):
        x = A[l1][wa]
        y = B[l2][w1 - wa]
        if x and y:
            acc = acc + x * y
    return acc


def _entry(curve: ParamCurve, n: int, t_set: ColumnSet, r: int, c: int, A, B, k_p,
           monos: dict | None = None) -> ExactComplex:
    t_c = t_set[c - 1]
    w1 = max_pow = r - 1
    alpha0, a0 = curve.alpha0, curve.a0
    total = ZERO
    for big_l1 in range(0, min(max_pow, t_c - 1) + 1):  # Lambda
        lam0 = t_c - 1 - big_l1
        for big_l2 in range(0, max_pow + 1):  # L
            s = big_l1 + big_l2
            if c >= s + 2:
                continue
            if monos is None:
                mono = _mono(A, B, big_l1, big_l2, w1)
            else:
                key = (big_l1, big_l2, w1)
                if key not in monos:
                    monos[key] = _mono(A, B, big_l1, big_l2, w1)
                mono = monos[key]
            if not mono:
                continue
            l0 = n + 1 - t_c - big_l2
            values = list(range(1, big_l1 + 1)) + list(range(n + 2 - big_l2, n + 2))
            sig = elementary_symmetric_all(values, s)
            f = Fraction(0)
            for p in range(c - 1, s + 1):
                term = sig[s - p] * k_p[p]
                f += term if (big_l1 - p) % 2 == 0 else -term
            if not f:
                continue
            total = total + mono * f * (alpha0 ** lam0) * (a0 ** l0)
    return total


def _check_entry_args(curve: ParamCurve, t_set) -> ColumnSet:
    t_set = t_set if isinstance(t_set, ColumnSet) else ColumnSet(tuple(t_set))
    if curve.nu1 != curve.nu2:
        raise CaseError("closed-form entries need equal multiplicities")
    return t_set


def closed_form_entry(curve: ParamCurve, degree: int, t_set, r: int, c: int) -> ExactComplex:
    """Entry (r, c) (1-based) of the triangulated block from the symmetric-function
    expansion, without forming the block."""
    t_set = _check_entry_args(curve, t_set)
    if not 1 <= c <= t_set.size or r < 1:
        raise ColumnIndexError(f"entry ({r}, {c}) out of range")
    A = _truncated_powers(curve.alpha, r - 1, r - 1)
    B = _truncated_powers(curve.a, r - 1, r - 1)
    return _entry(curve, degree, t_set, r, c, A, B, _moment_ratios(t_set, c, 2 * (r - 1)))


def closed_form_block(curve: ParamCurve, degree: int, t_set, n_rows: int) -> Matrix:
    """Rows 1..n_rows of the triangulated block, sharing the series tables."""
    t_set = _check_entry_args(curve, t_set)
    top = max(n_rows - 1, 0)
    A = _truncated_powers(curve.alpha, top, top)
    B = _truncated_powers(curve.a, top, top)
    moments = [_moment_ratios(t_set, c, 2 * top) for c in range(1, t_set.size + 1)]
    monos: dict = {}
    return [[_entry(curve, degree, t_set, r, c, A, B, moments[c - 1], monos)
             for c in range(1, t_set.size + 1)] for r in range(1, n_rows + 1)]


@dataclass
class BautinMatrix:
    blocks: list[BautinBlock]
    rows: list[list[ExactComplex]]
    column_offsets: list[int]
    overlaps: list[tuple[int, int]] = field(default_factory=list)

    @property
    def total_rows(self) -> int:
        return len(self.rows)

    @property
    def m(self) -> int:
        return sum(b.tau for b in self.blocks)

    def row(self, k: int) -> list[ExactComplex]:
        if 0 <= k < len(self.rows):
            return self.rows[k]
        return [ZERO] * self.m


def assemble_matrix(curve: ParamCurve, diagram: LacunarityDiagram,
                    max_slots: int = DEFAULT_MAX_SLOTS) -> BautinMatrix:
    if diagram is None or not diagram.degrees:
        raise StructureError("empty diagram")
    blocks = [build_block(curve, n, s, max_slots) for n, s in diagram.blocks()]
    m = sum(b.tau for b in blocks)
    total = max(b.row_offset + b.n_rows for b in blocks)
    rows = [[ZERO] * m for _ in range(total)]
    offsets = []
    col = 0
    for b in blocks:
        offsets.append(col)
        for r, entry_row in enumerate(b.entries):
            target = rows[b.row_offset + r]
            for j, v in enumerate(entry_row):
                target[col + j] = v
        col += b.tau
    overlaps = []
    for i, bi in enumerate(blocks):
        for j in range(i + 1, len(blocks)):
            bj = blocks[j]
            if bi.row_offset + bi.n_rows > bj.row_offset and bj.row_offset + bj.n_rows > bi.row_offset:
                overlaps.append((i, j))
    return BautinMatrix(blocks, rows, offsets, overlaps)


@dataclass(frozen=True)
class MatrixStats:
    b: int
    sigma: int
    basis_rows: tuple[int, ...]
    pivot_cols: tuple[int, ...]
    delta_abs2: Fraction  # |det|^2 of the witness minor


def determinant(mat: Sequence[Sequence[ExactComplex]]) -> ExactComplex:
    a = [list(r) for r in mat]
    n = len(a)
    det = ONE
    for i in range(n):
        piv = next((r for r in range(i, n) if a[r][i]), None)
        if piv is None:
            return ZERO
        if piv != i:
            a[i], a[piv] = a[piv], a[i]
            det = -det
        det = det * a[i][i]
        inv = a[i][i].inverse()
        for r in range(i + 1, n):
            if a[r][i]:
                f = a[r][i] * inv
                a[r] = [x - f * y if y else x for x, y in zip(a[r], a[i])]
    return det


def minor_abs2(rows: Sequence[Sequence[ExactComplex]], row_idx, col_idx) -> Fraction:
    sub = [[rows[r][c] for c in col_idx] for r in row_idx]
    return determinant(sub).abs2()


def matrix_stats(matrix: BautinMatrix) -> MatrixStats:
    """Greedy top-down elimination: basis rows, rank, Bautin index, witness minor."""
    m = matrix.m
    basis: list[tuple[int, list[ExactComplex]]] = []  # (pivot col, reduced row with pivot 1)
    basis_rows: list[int] = []
    pivots: list[int] = []
    b = None
    for k, row in enumerate(matrix.rows):
        vec = list(row)
        if not any(vec):
            continue
        for pc, brow in basis:
            f = vec[pc]
            if f:
                vec = [x - f * y if y else x for x, y in zip(vec, brow)]
        pc = next((j for j, x in enumerate(vec) if x), None)
        if pc is None:
            continue
        inv = vec[pc].inverse()
        vec = [x * inv for x in vec]
        # keep the basis fully reduced on pivot columns
        basis = [(q, [x - brow[pc] * y for x, y in zip(brow, vec)] if brow[pc] else brow)
                 for q, brow in basis]
        basis.append((pc, vec))
        basis_rows.append(k)
        pivots.append(pc)
        b = k
        if len(basis) == m:
            break
    if b is None:
        raise DegenerateError("the Bautin matrix is zero")
    cols = sorted(pivots)
    delta = minor_abs2(matrix.rows, basis_rows, cols)
    return MatrixStats(b, len(basis_rows), tuple(basis_rows), tuple(cols), delta)


def named_minor_rows(curve: ParamCurve, diagram: LacunarityDiagram,
                     jet: JetData | None = None) -> tuple[list[int], list[int]]:
    """Rows and columns of the maximal minor built blockwise from the
    leading entries of each (triangulated) block."""
    jet = jet or jet_proportionality(curve)
    rows, cols = [], []
    col = 0
    for n, s in diagram.blocks():
        t1 = s[0]
        nu_bar = (t1 - 1) * curve.nu1 + (n - t1 + 1) * curve.nu2
        if jet.fully_proportional:
            rows.append(nu_bar)
            cols.append(col)
        elif curve.nu1 != curve.nu2:
            for j, t in enumerate(s):
                rows.append((t - 1) * curve.nu1 + (n - t + 1) * curve.nu2)
                cols.append(col + j)
        else:
            for i in range(1, s.size + 1):
                rows.append(nu_bar + (jet.k + 1) * (i - 1))
                cols.append(col + i - 1)
        col += s.size
    return rows, cols
