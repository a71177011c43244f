"""Vandermonde extraction weights and the symmetric-function identities
used by the triangulation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

from .errors import ArityError, DomainError


@dataclass(frozen=True)
class ColumnSet:
    """Strictly increasing integers t_1 < ... < t_tau.

    Column selections of a diagram are >= 1; the lemma suites also use 0,
    so only nonnegativity is enforced here.
    """

    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise DomainError("column set must be nonempty")
        if vals[0] < 0:
            raise DomainError(f"column indices must be nonnegative, got {vals}")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise DomainError(f"column set must be strictly increasing, got {vals}")

    @classmethod
    def of(cls, values: Iterable[int]) -> "ColumnSet":
        return cls(tuple(values))

    @property
    def size(self) -> int:
        return len(self.values)

    def prefix(self, c: int) -> "ColumnSet":
        return ColumnSet(self.values[:c])

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]


def _as_colset(t_set) -> ColumnSet:
    return t_set if isinstance(t_set, ColumnSet) else ColumnSet(tuple(t_set))


def vandermonde_weights(t_set) -> dict[int, Fraction]:
    """K_{T,t} = 1 / prod_{s in T, s != t} (t - s)."""
    ts = _as_colset(t_set).values
    out = {}
    for t in ts:
        den = 1
        for s in ts:
            if s != t:
                den *= t - s
        out[t] = Fraction(1, den)
    return out


def last_weight(t_set) -> Fraction:
    """K_{T,t_max}, the weight at the largest point of T."""
    ts = _as_colset(t_set).values
    den = 1
    for s in ts[:-1]:
        den *= ts[-1] - s
    return Fraction(1, den)


def power_sum_weight(t_set, q: int, weights: Mapping[int, Fraction] | None = None) -> Fraction:
    """sum_{t in T} t^q K_{T,t}."""
    w = vandermonde_weights(t_set) if weights is None else weights
    return sum((Fraction(t) ** q * k for t, k in w.items()), Fraction(0))


def extract_coefficient(poly_values: Mapping, t_set, poly_degree: int,
                        high_coeffs: Sequence = ()):
    """Weighted sum sum_{t in T} P(t) K_{T,t}.

    With c = |T| - 1 this is coeff_{X^c}(P) when deg P <= c.  For larger
    degrees the caller supplies coeff_{X^{c+1}}..coeff_{X^deg} in
    ``high_coeffs`` (only their count is checked here); the sum then picks up
    sum_{q>c} coeff_q * power_sum_weight(T, q).
    """
    cs = _as_colset(t_set)
    if set(poly_values) != set(cs.values):
        raise ArityError(f"values given at {sorted(poly_values)} but T = {cs.values}")
    c = cs.size - 1
    expected_high = max(poly_degree - c, 0)
    if len(high_coeffs) != expected_high:
        raise ArityError(f"expected {expected_high} high coefficients, got {len(high_coeffs)}")
    w = vandermonde_weights(cs)
    acc = None
    for t in cs.values:
        term = poly_values[t] * w[t]
        acc = term if acc is None else acc + term
    return acc


def multinomial(parts: Sequence[int]) -> int:
    total = 0
    out = 1
    for p in parts:
        total += p
        out *= math.comb(total, p)
    return out


def multivariate_alternating_sum(p_values: Callable, box: Sequence[int],
                                 total_degree: int | None = None):
    """sum over the box prod [0, w_j] of (-1)^{|i|} prod binom(w_j, i_j) P(i).

    Vanishes whenever P has total degree < sum(w).
    """
    if any(w < 0 for w in box):
        raise DomainError("box sides must be nonnegative")
    acc = 0
    for idx in product(*(range(w + 1) for w in box)):
        coef = 1
        for w, i in zip(box, idx):
            coef *= math.comb(w, i)
        if sum(idx) % 2:
            coef = -coef
        acc = acc + coef * p_values(*idx)
    return acc


def elementary_symmetric(values: Sequence, p: int):
    """sigma_p(values) by the prefix recurrence; 0 when p > len(values)."""
    if p < 0:
        raise DomainError("p must be nonnegative")
    if p > len(values):
        return 0
    e = [1] + [0] * p
    for x in values:
        for j in range(p, 0, -1):
            e[j] = e[j] + x * e[j - 1]
    return e[p]


def elementary_symmetric_all(values: Sequence, p_max: int) -> list:
    """[sigma_0, ..., sigma_{p_max}] of ``values`` in one pass."""
    e = [1] + [0] * p_max
    for x in values:
        for j in range(p_max, 0, -1):
            e[j] = e[j] + x * e[j - 1]
    return e


def symmetric_shift_value(p: int, big_r: int, big_n: int, n: int) -> int:
    """sigma_p(1, ..., R-n, N-n, ..., N)."""
    if not (0 <= p <= big_r < big_n):
        raise DomainError(f"need 0 <= p <= R < N, got p={p}, R={big_r}, N={big_n}")
    if not 0 <= n <= big_r:
        raise DomainError(f"n must lie in [0, R], got {n}")
    values = list(range(1, big_r - n + 1)) + list(range(big_n - n, big_n + 1))
    return elementary_symmetric(values, p)
