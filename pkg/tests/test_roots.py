"""Tests for real root isolation of polynomials."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from volsplit.config import RootSettings
from volsplit.errors import DomainError
from volsplit.numerics import find_roots


def test_simple_roots():
    assert find_roots([-1.0, 0.0, 1.0], (-2.0, 2.0)) == pytest.approx([-1.0, 1.0])


def test_roots_outside_interval_are_dropped():
    assert find_roots([-1.0, 0.0, 1.0], (0.0, 2.0)) == pytest.approx([1.0])


def test_double_root_without_sign_change():
    roots = find_roots([0.09, -0.6, 1.0], (0.0, 1.0))
    assert roots == pytest.approx([0.3], abs=1e-6)


def test_constant_has_no_roots():
    assert find_roots([3.0], (0.0, 1.0)) == []


def test_zero_leading_coefficient():
    with pytest.raises(DomainError):
        find_roots([1.0, 2.0, 0.0], (0.0, 1.0))


def test_degree_cap():
    with pytest.raises(DomainError):
        find_roots([0.0] * 4 + [1.0], (0.0, 1.0), RootSettings(max_degree=3))


def test_empty_interval():
    with pytest.raises(DomainError):
        find_roots([0.0, 1.0], (1.0, 1.0))


@given(st.lists(st.floats(min_value=0.05, max_value=0.95), min_size=1, max_size=5, unique=True))
@settings(max_examples=50, deadline=None)
def test_recovers_separated_roots(points):
    points = sorted(points)
    if min(np.diff(points), default=1.0) < 0.05:
        return
    coeffs = np.polynomial.polynomial.polyfromroots(points)
    assert find_roots(coeffs, (0.0, 1.0)) == pytest.approx(points, abs=1e-8)
