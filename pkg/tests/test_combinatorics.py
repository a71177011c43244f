from fractions import Fraction as F
from itertools import combinations

import pytest

from lacunary.combinatorics import (
    ColumnSet,
    elementary_symmetric,
    elementary_symmetric_all,
    extract_coefficient,
    multivariate_alternating_sum,
    power_sum_weight,
    symmetric_shift_value,
    vandermonde_weights,
)
from lacunary.errors import ArityError
from lacunary.lemmas import extraction_suite, multivariate_suite, run_all, shift_suite


@pytest.mark.parametrize("t_set,expected", [
    ((0, 1, 2), {0: F(1, 2), 1: F(-1), 2: F(1, 2)}),
    ((1, 2), {1: F(-1), 2: F(1)}),
    ((1, 2, 4), {1: F(1, 3), 2: F(-1, 2), 4: F(1, 6)}),
])
def test_weights(t_set, expected):
    assert vandermonde_weights(t_set) == expected


def test_column_set_validation():
    with pytest.raises(ValueError):
        ColumnSet((2, 1))
    assert ColumnSet((1, 3, 4)).prefix(2).values == (1, 3)


def test_extract_examples():
    t = (0, 1, 2)
    assert extract_coefficient({x: x * x for x in t}, t, 2) == 1
    assert extract_coefficient({x: x for x in t}, t, 1) == 0
    assert extract_coefficient({x: x ** 3 for x in t}, t, 3, high_coeffs=(1,)) == 3
    assert power_sum_weight(t, 3) == 3
    with pytest.raises(ArityError):
        extract_coefficient({0: 1}, t, 2)


def test_multivariate_examples():
    assert multivariate_alternating_sum(lambda i: i, (2,)) == 0
    assert multivariate_alternating_sum(lambda i, j: i + j, (1, 1)) == 0
    assert multivariate_alternating_sum(lambda i: 1, (1,)) == 0


def test_shift_examples():
    assert [symmetric_shift_value(1, 2, 4, n) for n in range(3)] == [7, 8, 9]
    assert symmetric_shift_value(0, 3, 5, 1) == 1
    assert symmetric_shift_value(2, 2, 4, 0) == 14


def _sigma_enum(values, p):
    total = 0
    for sub in combinations(values, p):
        prod = 1
        for x in sub:
            prod *= x
        total += prod
    return total


def test_elementary_symmetric_examples():
    assert elementary_symmetric((1, 2, 3), 2) == 11
    assert elementary_symmetric((4, 5), 0) == 1
    assert elementary_symmetric((5,), 1) == 5
    assert elementary_symmetric((1, 2), 3) == 0


def test_elementary_symmetric_against_enumeration():
    values = [3, -1, F(1, 2), 7, 2, 0, 5]
    table = elementary_symmetric_all(values, 7)
    for p in range(8):
        assert table[p] == _sigma_enum(values, p) == elementary_symmetric(values, p)


def test_small_suites_pass():
    assert extraction_suite(max_point=5, max_degree=4).ok
    assert multivariate_suite(max_total=4).ok
    assert shift_suite(max_r=4, max_n=7).ok


def test_fault_is_caught():
    assert not extraction_suite(max_point=3, max_degree=3, fault=True).ok
    assert not multivariate_suite(max_total=2, fault=True).ok
    assert not shift_suite(max_r=2, max_n=4, fault=True).ok
    assert not all(r.ok for r in run_all(3, 3, 2, 2, 4, fault=True))
