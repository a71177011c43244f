"""Empirical checks of the zero bounds: root counts of sampled f_lambda in
the discs of radius 1/4 and rho, and the maximal-multiplicity witness."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from mpmath import mp

from .bautin import BautinMatrix, assemble_matrix, matrix_stats
from .bounds import BoundReport, NormalizedCurve
from .errors import ConvergenceError, DomainError, StructureError
from .kernels import BACKEND, aberth_roots, winding_count
from .lacunarity import LacunarityDiagram
from .poly import ZERO, ExactComplex
from .rational import rational_bautin_rows

log = logging.getLogger(__name__)

EPS = np.finfo(float).eps
STRATEGIES = ("uniform_sphere", "coordinate", "witness_perturbed")
MAX_REDRAWS = 8


@dataclass
class LambdaSample:
    values: np.ndarray
    strategy: str
    exact: tuple[ExactComplex, ...] | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if not np.any(self.values):
            raise DomainError("parameter vector is zero")
        if self.strategy not in STRATEGIES + ("witness",):
            raise DomainError(f"unknown strategy {self.strategy!r}")


@dataclass(frozen=True)
class DiscCount:
    count: int
    certified: bool
    origin_multiplicity: int
    winding: int | None

    def __iter__(self):
        return iter((self.count, self.certified))


def _strip_noise(coeffs: np.ndarray, noise: np.ndarray | None = None) -> tuple[np.ndarray, int]:
    """Drop leading and trailing coefficients at noise level.

    noise, when given, is a per-coefficient error bound; otherwise the
    threshold is 64 eps times the largest coefficient.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    mags = np.abs(c)
    tol = 64 * EPS * (mags.max() if len(c) else 0.0) if noise is None else np.asarray(noise, dtype=float)
    if not np.any(mags > tol):
        raise DomainError("polynomial is zero to working precision")
    lo = int(np.argmax(mags > tol))
    hi = len(c) - int(np.argmax(mags[::-1] > tol))
    return c[lo:hi], lo


def _clusters(roots: np.ndarray, tol: float) -> list[list[int]]:
    """Single-linkage groups of roots closer than tol."""
    n = len(roots)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    if n:
        close = np.abs(roots[:, None] - roots[None, :]) < tol
        for i, j in zip(*np.nonzero(np.triu(close, 1))):
            parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _rouche_empty(q: np.ndarray, radius: float) -> bool:
    """|q(0)| beats the rest of q on |z| = radius, so q has no zeros inside."""
    powers = radius ** np.arange(1, len(q))
    tail = float(np.sum(np.abs(q[1:]) * powers)) if len(q) > 1 else 0.0
    return abs(q[0]) > 2 * tail


def roots_in_disc(coeffs, radius: float, boundary_margin: float | None = None,
                  backend: str | None = None, noise=None) -> DiscCount:
    """Zeros of sum c_k z^k in |z| <= radius, with multiplicity.

    Trailing zeros count as roots at the origin; ``noise`` is an optional
    per-coefficient error bound deciding which coefficients are zero.  The
    count is certified when
    no root cluster lies within the margin of the circle and the winding
    number of the deflated polynomial agrees.
    """
    if radius <= 0:
        raise DomainError("radius must be positive")
    margin = 1e-6 * radius if boundary_margin is None else boundary_margin
    q, origin = _strip_noise(coeffs, noise)
    if len(q) == 1:
        return DiscCount(origin, True, origin, 0)
    if _rouche_empty(q, radius):
        return DiscCount(origin, True, origin, 0)
    roots = aberth_roots(q, backend=backend)
    inside = 0
    certified = True
    for group in _clusters(roots, 10 * math.sqrt(EPS) * radius):
        centre = abs(roots[group].mean())
        if abs(centre - radius) <= margin:
            certified = False
        if centre <= radius:
            inside += len(group)
    winding = None
    if certified:
        try:
            winding = winding_count(q, radius, backend=backend)
        except ConvergenceError:
            certified = False
        else:
            certified = winding == inside
    return DiscCount(origin + inside, certified, origin, winding)


# --------------------------------------------------------------------------
# witness


def exact_kernel(rows, n_cols: int | None = None) -> list[list[ExactComplex]]:
    """Basis of the right kernel of an exact matrix.

    n_cols is needed only when there are no rows.
    """
    if n_cols is None:
        if not rows:
            raise DomainError("column count unknown for an empty matrix")
        n_cols = len(rows[0])
    m = n_cols
    mat = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = mat[r][c].inverse()
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    basis = []
    for free in (c for c in range(m) if c not in pivots):
        vec = [ZERO] * m
        vec[free] = ExactComplex(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -mat[i][free]
        basis.append(vec)
    return basis


def _dot(row, vec) -> ExactComplex:
    acc = ZERO
    for x, y in zip(row, vec):
        if x and y:
            acc = acc + x * y
    return acc


def multiplicity_witness(matrix: BautinMatrix, b: int | None = None) -> LambdaSample:
    """lambda* spanning the kernel of rows 0..b-1; f_lambda* vanishes to order exactly b."""
    if b is None:
        b = matrix_stats(matrix).b
    kernel = exact_kernel([matrix.row(k) for k in range(b)], matrix.m)
    if len(kernel) != 1:
        raise StructureError(f"kernel of the first {b} rows has dimension {len(kernel)}, expected 1")
    vec = kernel[0]
    if not _dot(matrix.row(b), vec):
        raise StructureError("witness does not have valuation b")
    return LambdaSample(_to_unit_complex(vec, [0] * len(vec), Fraction(1)), "witness", tuple(vec))


def _to_unit_complex(vec, degrees, scale: Fraction) -> np.ndarray:
    """lambda_i * scale^{n_i}, normalized to max modulus 1, as doubles."""
    with mp.workprec(120):
        s = mp.mpf(scale.numerator) / scale.denominator
        vals = [mp.mpc(mp.mpf(x.re.numerator) / x.re.denominator,
                       mp.mpf(x.im.numerator) / x.im.denominator) * s ** n
                for x, n in zip(vec, degrees)]
        top = max(abs(v) for v in vals)
        return np.array([complex(v / top) for v in vals], dtype=np.complex128)


def valuation_of(matrix: BautinMatrix, vec) -> int:
    for k in range(matrix.total_rows):
        if _dot(matrix.row(k), vec):
            return k
    raise StructureError("f_lambda vanishes on all computed rows")


# --------------------------------------------------------------------------
# runs


@dataclass
class VerificationRun:
    report: BoundReport
    samples: int
    max_count_quarter: int
    max_count_rho: int
    witness_multiplicity: int | None
    violations: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    certified: int = 0
    strategy_counts: dict = field(default_factory=dict)
    backend: str = BACKEND

    @property
    def passed(self) -> bool:
        return not self.violations


class _Family:
    """Float columns of the normalized curve, times V^{d - n} for rational curves."""

    def __init__(self, norm: NormalizedCurve, diagram: LacunarityDiagram):
        cv = norm.curve
        p1, p2 = cv.p1.to_complex(), cv.p2.to_complex()
        v = cv.v.to_complex() if cv.v is not None and cv.v.degree > 0 else None
        if cv.v is not None and cv.v.degree == 0:
            c0 = complex(cv.v.coeff(0))
            p1, p2 = p1 / c0, p2 / c0
        pows = {}

        def power(key, base, e):
            if (key, e) not in pows:
                if e == 0:
                    pows[(key, e)] = np.ones(1, dtype=np.complex128)
                elif e == 1:
                    pows[(key, e)] = base
                else:
                    half = power(key, base, e // 2)
                    out = np.convolve(half, half)
                    if e % 2:
                        out = np.convolve(out, base)
                    pows[(key, e)] = out
            return pows[(key, e)]

        def column(n, t, x, y, w):
            col = np.convolve(power(x, bases[x], t - 1), power(y, bases[y], n - t + 1))
            if v is not None:
                col = np.convolve(col, power(w, bases[w], d - n))
            return col

        # the |.| columns bound the rounding error of each float coefficient
        bases = {"x": p1, "y": p2, "|x|": np.abs(p1), "|y|": np.abs(p2)}
        if v is not None:
            bases.update({"v": v, "|v|": np.abs(v)})
        d = diagram.d
        cols, abs_cols = [], []
        self.degrees = []
        for n, s in diagram.blocks():
            for t in s:
                cols.append(column(n, t, "x", "y", "v"))
                abs_cols.append(column(n, t, "|x|", "|y|", "|v|"))
                self.degrees.append(n)
        width = max(len(c) for c in cols)
        self.columns = np.zeros((len(cols), width), dtype=np.complex128)
        self.abs_columns = np.zeros((len(cols), width))
        for i, (c, a) in enumerate(zip(cols, abs_cols)):
            self.columns[i, : len(c)] = c
            self.abs_columns[i, : len(a)] = a.real
        self.m = len(cols)
        self.rounding = 4 * width * EPS
        self.constant_column = 0 if diagram.degrees[0] == 0 else None

    def compose(self, lam: np.ndarray) -> np.ndarray:
        return lam @ self.columns

    def noise(self, lam: np.ndarray) -> np.ndarray:
        return self.rounding * (np.abs(lam) @ self.abs_columns)


def _unit_sphere(rng: np.random.Generator, m: int) -> np.ndarray:
    z = rng.normal(size=m) + 1j * rng.normal(size=m)
    return z / np.linalg.norm(z)


def _draw(rng: np.random.Generator, family: _Family, witness: np.ndarray | None) -> LambdaSample:
    u = rng.random()
    if u < 0.8 or (u >= 0.9 and witness is None):
        return LambdaSample(_unit_sphere(rng, family.m), "uniform_sphere")
    if u < 0.9:
        lam = np.zeros(family.m, dtype=np.complex128)
        lam[rng.integers(family.m)] = np.exp(2j * np.pi * rng.random())
        return LambdaSample(lam, "coordinate")
    eps = 10.0 ** (-rng.uniform(3, 12))
    lam = witness.copy()
    if family.constant_column is not None:
        lam[family.constant_column] += eps * np.exp(2j * np.pi * rng.random())
    else:
        lam += eps * _unit_sphere(rng, family.m)
    return LambdaSample(lam, "witness_perturbed")


def _run_sample(index, seq, family, witness, rho, z_int, b, backend):
    rng = np.random.default_rng(seq)
    last = None
    for _ in range(MAX_REDRAWS):
        sample = _draw(rng, family, witness)
        coeffs = family.compose(sample.values)
        noise = family.noise(sample.values)
        try:
            quarter = roots_in_disc(coeffs, 0.25, backend=backend, noise=noise)
            small = roots_in_disc(coeffs, rho, backend=backend, noise=noise)
        except (ConvergenceError, DomainError) as exc:
            last = str(exc)
            continue
        if quarter.certified and small.certified:
            return index, sample.strategy, quarter.count, small.count, None
        last = "uncertified"
    return index, None, None, None, last


def witness_for(norm: NormalizedCurve, diagram: LacunarityDiagram) -> tuple[np.ndarray | None, int | None]:
    """Float witness for the normalized family and its exact valuation."""
    orig = norm.original
    if orig.v is None:
        matrix = assemble_matrix(orig, diagram)
    else:
        matrix = rational_bautin_rows(orig, diagram).as_matrix()
    stats = matrix_stats(matrix)
    if stats.sigma != matrix.m:
        return None, None
    try:
        w = multiplicity_witness(matrix, stats.b)
    except StructureError:
        return None, None
    degrees = [n for n, s in diagram.blocks() for _ in s]
    return _to_unit_complex(w.exact, degrees, norm.scale), stats.b


def verify_run(curve: NormalizedCurve, diagram: LacunarityDiagram, report: BoundReport,
               n_samples: int, seed: int, workers: int = 1, backend: str | None = None) -> VerificationRun:
    """Sample lambda, count certified zeros in the two discs, compare with the report."""
    if n_samples < 0:
        raise DomainError("n_samples must be nonnegative")
    family = _Family(curve, diagram)
    if family.m != report.m:
        raise DomainError("report does not match the diagram")
    witness, mult = witness_for(curve, diagram)
    rho = float(report.rho_lb)
    seqs = np.random.SeedSequence(seed).spawn(n_samples)
    args = [(i, s, family, witness, rho, report.z_bound_int, report.b, backend) for i, s in enumerate(seqs)]
    if workers > 1 and n_samples > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda a: _run_sample(*a), args))
    else:
        results = [_run_sample(*a) for a in args]
    run = VerificationRun(report, n_samples, 0, 0, mult,
                          strategy_counts={s: 0 for s in STRATEGIES},
                          backend=backend or BACKEND)
    for index, strategy, quarter, small, reason in sorted(results, key=lambda r: r[0]):
        if strategy is None:
            run.skipped.append((index, reason))
            log.info("sample %d skipped: %s", index, reason)
            continue
        run.certified += 1
        run.strategy_counts[strategy] += 1
        run.max_count_quarter = max(run.max_count_quarter, quarter)
        run.max_count_rho = max(run.max_count_rho, small)
        if quarter > report.z_bound_int:
            run.violations.append((index, "quarter", quarter))
        if small > report.b:
            run.violations.append((index, "rho", small))
    return run
