"""The xi weight family: closed form, recurrence, and semigroup structure."""

import math

import pytest
from hypothesis import given, strategies as st

from treeshift import DomainError, xi_cumulative, xi_eval, xi_next
from treeshift.xi import check_unit_lower_bound

GRID = [1.0, 1.05, 1.1, math.sqrt(2.0), 2.0, 5.0]


def test_known_values():
    # x = sqrt(2): xi_n = sqrt((n+2)/(n+1))
    for n in range(10):
        assert xi_eval(n, math.sqrt(2.0)) == pytest.approx(math.sqrt((n + 2) / (n + 1)), abs=1e-14)
    assert xi_eval(0, 1.7) == 1.7
    assert xi_eval(3, 1.0) == 1.0


def test_recurrence_matches_closed_form():
    for x in GRID:
        beta = x
        for n in range(1, 25):
            beta = xi_next(beta)
            assert beta == pytest.approx(xi_eval(n, x), abs=1e-12)


def test_composition_identity():
    for x in GRID:
        for m in range(6):
            for n in range(6):
                lhs = xi_eval(m + n, x)
                rhs = xi_eval(m, xi_eval(n, x))
                assert lhs == pytest.approx(rhs, abs=1e-12)


def test_cumulative_product():
    for x in GRID:
        prod = 1.0
        for n in range(15):
            assert prod == pytest.approx(xi_cumulative(n, x), abs=1e-12)
            prod *= xi_eval(n, x)


def test_fixed_point_and_monotonicity():
    for x in GRID:
        if x == 1.0:
            continue
        vals = [xi_eval(n, x) for n in range(20)]
        assert all(v > 1.0 for v in vals)
        assert all(a > b for a, b in zip(vals, vals[1:]))
    assert all(xi_eval(n, 1.0) == 1.0 for n in range(20))


@given(st.floats(min_value=1.0, max_value=10.0), st.integers(0, 30), st.integers(0, 30))
def test_composition_property(x, m, n):
    assert xi_eval(m + n, x) == pytest.approx(xi_eval(m, xi_eval(n, x)), rel=1e-10, abs=1e-10)


@given(st.floats(min_value=1.0, max_value=10.0), st.integers(0, 50))
def test_range_property(x, n):
    v = xi_eval(n, x)
    assert 1.0 <= v <= x + 1e-12


def test_domain_errors():
    with pytest.raises(DomainError):
        xi_eval(1, 0.5)
    with pytest.raises(DomainError):
        check_unit_lower_bound(0.9)
    # values a hair under 1 are clamped, not rejected
    assert check_unit_lower_bound(1.0 - 1e-13) == 1.0
