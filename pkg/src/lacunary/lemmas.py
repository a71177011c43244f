"""Exhaustive exact checks of the extraction, alternating-sum and
shift-polynomial identities.  Used by the test suite and ``check-lemmas``."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .combinatorics import (
    multivariate_alternating_sum,
    power_sum_weight,
    symmetric_shift_value,
    vandermonde_weights,
)


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, ok: bool, detail) -> None:
        self.checks += 1
        if not ok and len(self.failures) < 20:
            self.failures.append(detail)


def _weights(t_set, fault: bool):
    w = vandermonde_weights(t_set)
    if fault:
        # negative control: flip the sign of the last weight
        last = max(w)
        w[last] = -w[last]
    return w


def extraction_suite(max_point: int = 8, max_degree: int = 6, seed: int = 0,
                     fault: bool = False) -> SuiteResult:
    """For all nonempty T in {0..max_point}: sum t^q K_t = [q == c] for q <= c,
    and the weighted sum of a random polynomial equals its coefficient of
    X^c plus the power-sum corrections of its higher coefficients."""
    res = SuiteResult("extraction")
    rng = random.Random(seed)
    points = range(max_point + 1)
    for size in range(1, max_point + 2):
        for ts in combinations(points, size):
            c = size - 1
            w = _weights(ts, fault)
            psum = {q: sum((Fraction(t) ** q * k for t, k in w.items()), Fraction(0))
                    for q in range(max(c, max_degree) + 1)}
            for q in range(c + 1):
                res.record(psum[q] == (1 if q == c else 0), ("part1", ts, q))
            for deg in range(max_degree + 1):
                coeffs = [Fraction(rng.randint(-20, 20), rng.randint(1, 20)) for _ in range(deg + 1)]
                lhs = sum((k * sum((cf * Fraction(t) ** j for j, cf in enumerate(coeffs)), Fraction(0))
                           for t, k in w.items()), Fraction(0))
                rhs = coeffs[c] if c <= deg else Fraction(0)
                for q in range(c + 1, deg + 1):
                    rhs += coeffs[q] * power_sum_weight(ts, q)
                res.record(lhs == rhs, ("part2", ts, deg))
    return res


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _exponents(k: int, max_total: int):
    """All exponent vectors in k variables with total degree <= max_total."""
    if k == 0:
        yield ()
        return
    for e in range(max_total + 1):
        for rest in _exponents(k - 1, max_total - e):
            yield (e,) + rest


def multivariate_suite(max_total: int = 6, fault: bool = False) -> SuiteResult:
    """Alternating binomial sums over every box with sum(w) <= max_total kill
    every monomial of total degree < sum(w)."""
    res = SuiteResult("multivariate")
    for s in range(1, max_total + 1):
        for k in range(1, s + 1):
            for box in _compositions(s, k):
                for ex in _exponents(k, s - 1):
                    def mono(*idx, ex=ex):
                        v = 1
                        for i, e in zip(idx, ex):
                            v *= i ** e
                        return v
                    val = multivariate_alternating_sum(mono, box, s - 1)
                    if fault and box == (1,) and ex == (0,):
                        val += 1
                    res.record(val == 0, (box, ex))
    return res


def shift_suite(max_r: int = 6, max_n: int = 10, fault: bool = False) -> SuiteResult:
    """n -> sigma_p(1..R-n, N-n..N) has vanishing (p+1)-th differences on [0, R]."""
    res = SuiteResult("shift")
    for big_r in range(0, max_r + 1):
        for big_n in range(max_r + 1, max_n + 1):
            for p in range(0, big_r + 1):
                vals = [symmetric_shift_value(p, big_r, big_n, n) for n in range(big_r + 1)]
                if fault and p == 0:
                    vals[-1] += 1
                diffs = vals
                for _ in range(p + 1):
                    diffs = [b - a for a, b in zip(diffs, diffs[1:])]
                res.record(all(x == 0 for x in diffs), (p, big_r, big_n))
    return res


def run_all(max_point: int = 8, max_degree: int = 6, max_total: int = 6,
            max_r: int = 6, max_n: int = 10, fault: bool = False) -> list[SuiteResult]:
    return [
        extraction_suite(max_point, max_degree, fault=fault),
        multivariate_suite(max_total),
        shift_suite(max_r, max_n),
    ]
