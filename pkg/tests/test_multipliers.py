"""Tests for pointwise multipliers between weighted Sobolev spaces."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from volsplit.criteria import CriterionEntry
from volsplit.errors import DomainError
from volsplit.multipliers import (
    MULTIPLIER,
    NOT_APPLICABLE,
    NOT_MULTIPLIER,
    MultiplierProblem,
    MultiplierReport,
    check_multiplier,
    sobolev_norm,
    sup_ratio,
    verify_leibniz_representation,
)
from volsplit.numerics import as_weight
from volsplit.weights import DoublingReport


class TestProblem:
    def test_derivative_chains(self):
        problem = MultiplierProblem.from_sources("x^2", "1", "1", 2, 2)
        chain = problem.derivatives()[1]
        assert [d(1.0) for d in chain] == pytest.approx([1.0, 3.0, 6.0])

    @pytest.mark.parametrize("l, m", [(0, 0), (1, 2), (2, -1)])
    def test_orders(self, l, m):  # noqa: E741
        with pytest.raises(DomainError):
            MultiplierProblem.from_sources("1", "1", "1", l, m)


class TestSupRatio:
    def test_interior_maximum(self, coarse_supremum):
        result = sup_ratio(as_weight("x * exp(-x)"), as_weight("1"), as_weight("1"), coarse_supremum)
        assert result.value == pytest.approx(math.exp(-1.0), rel=1e-8)
        assert result.argmax == pytest.approx(1.0, rel=1e-3)

    def test_growth(self, coarse_supremum):
        result = sup_ratio(as_weight("x"), as_weight("1"), as_weight("1"), coarse_supremum)
        assert not result.finite
        assert result.reason == "growth-at-infinity"

    def test_zero_multiplier(self, coarse_supremum):
        assert sup_ratio(as_weight("0"), as_weight("1"), as_weight("1"), coarse_supremum).value == 0.0


class TestCheckMultiplier:
    def test_decaying_multiplier(self, coarse_supremum, coarse_doubling, rule):
        problem = MultiplierProblem.from_sources("exp(-x)", "1", "1", 1, 0)
        report = check_multiplier(
            problem, settings=coarse_supremum, doubling_settings=coarse_doubling, rule=rule
        )
        assert report.doubling_weight_verdict == MULTIPLIER
        assert report.integrable_weight_verdict == NOT_APPLICABLE
        assert report.verdict == MULTIPLIER
        assert report.weighted_norms[0] == pytest.approx(math.sqrt(0.5))

    def test_constant_is_not_a_multiplier(self, coarse_supremum, coarse_doubling, rule):
        problem = MultiplierProblem.from_sources("1", "1", "1", 1, 0)
        report = check_multiplier(
            problem, settings=coarse_supremum, doubling_settings=coarse_doubling, rule=rule
        )
        assert report.verdict == NOT_MULTIPLIER
        assert report.weighted_norms == [math.inf]

    def test_without_stamp(self, coarse_supremum, rule):
        problem = MultiplierProblem.from_sources("exp(-x)", "1", "1", 1, 0)
        report = check_multiplier(problem, stamp=False, settings=coarse_supremum, rule=rule)
        assert report.doubling is None
        assert report.verdict == NOT_APPLICABLE
        assert report.to_dict()["hypotheses"]["doubling"] is None


def _entry(supremum: float) -> CriterionEntry:
    empty = np.empty(0)
    return CriterionEntry(0, "k=0", supremum, None, None, empty, empty, empty)


def _member() -> DoublingReport:
    return DoublingReport(weight="1", delta=0.0, family="concentric", D=2.0, samples=[], verdict="member")


class TestVerdictPrecedence:
    problem = MultiplierProblem.from_sources("1", "1", "1", 1, 0)

    def test_doubling_verdict_wins(self):
        report = MultiplierReport(self.problem, [1.0], [_entry(math.inf)], None, True, True, _member())
        assert report.integrable_weight_verdict == MULTIPLIER
        assert report.doubling_weight_verdict == NOT_MULTIPLIER
        assert report.verdict == NOT_MULTIPLIER
        assert report.reduction_consistent is False

    def test_integrable_verdict_without_doubling(self):
        report = MultiplierReport(self.problem, [1.0], [_entry(math.inf)], None, True, True, None)
        assert report.verdict == MULTIPLIER

    def test_v_inverse_not_local(self):
        report = MultiplierReport(self.problem, [1.0], [_entry(1.0)], None, True, False, _member())
        assert report.verdict == NOT_APPLICABLE


class TestLeibniz:
    def test_known_case(self):
        assert verify_leibniz_representation([0.0, 1.0], [0.0, 0.0, 1.0], 2, 1) < 1e-10

    def test_m_equals_l(self):
        assert verify_leibniz_representation([1.0, 2.0], [0.0, 0.0, 3.0, 1.0], 2, 2) < 1e-9

    def test_g_must_vanish(self):
        with pytest.raises(DomainError):
            verify_leibniz_representation([1.0], [1.0, 0.0, 1.0], 2, 1)


@given(
    phi=st.lists(st.floats(min_value=-2, max_value=2), min_size=1, max_size=4),
    high=st.lists(st.floats(min_value=-2, max_value=2), min_size=1, max_size=3),
    l=st.integers(min_value=1, max_value=4),
    data=st.data(),
)
@settings(max_examples=100, deadline=None)
def test_leibniz_representation_on_random_polynomials(phi, high, l, data):  # noqa: E741
    m = data.draw(st.integers(min_value=0, max_value=l))
    g = [0.0] * l + high
    grid = np.linspace(0.1, 2.0, 20)
    residual = verify_leibniz_representation(phi, g, l, m, grid=grid)
    scale = 1.0 + sum(abs(c) for c in phi) * sum(abs(c) for c in g) * 2.0 ** (len(phi) + len(g)) * 50
    assert residual <= 1e-10 * scale


def test_sobolev_norm(rule):
    expected = math.sqrt((1 - math.exp(-2.0)) / 2) + 1 / math.sqrt(2)
    assert sobolev_norm("exp(-x)", "1", 1, rule) == pytest.approx(expected, rel=1e-10)
