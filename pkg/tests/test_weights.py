"""Tests for doubling scans, ratio envelopes and closure."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from volsplit.config import DoublingSettings, QuadratureSettings
from volsplit.errors import DomainError
from volsplit.numerics import QuadratureRule
from volsplit.weights import (
    MEMBER,
    VIOLATED,
    closure_check,
    doubling_constant,
    ratio_bounds_check,
    weak_doubling_check,
)


class TestDoublingConstant:
    def test_constant_weight(self, coarse_doubling, rule):
        report = doubling_constant("1", settings=coarse_doubling, rule=rule)
        assert report.D == pytest.approx(2.0, rel=1e-9)
        assert report.verdict == MEMBER
        assert report.family == "concentric"
        assert report.empirical_alpha == pytest.approx(1.0, rel=1e-9)
        assert report.alpha == pytest.approx(math.log2(1 + 1 / 16))
        assert report.beta == pytest.approx(math.log(4) / math.log(1.5))

    def test_power_weight(self, coarse_doubling, rule):
        report = doubling_constant("x^2", settings=coarse_doubling, rule=rule)
        assert report.is_member
        assert report.D == pytest.approx(32 / 13, rel=1e-3)

    def test_fast_decay_is_violated(self, coarse_doubling, rule):
        report = doubling_constant("(1+x)^-4", settings=coarse_doubling, rule=rule)
        assert report.verdict == VIOLATED
        assert report.witness is not None
        assert len(report.growth_trail) >= 2

    def test_exponential_is_violated(self, coarse_doubling, rule):
        assert doubling_constant("exp(x)", settings=coarse_doubling, rule=rule).verdict == VIOLATED

    def test_intervals_stay_in_half_line(self, coarse_doubling, rule):
        report = doubling_constant("1", delta=1.0, settings=coarse_doubling, rule=rule)
        assert all(s.interval[0] >= 0 for s in report.samples)
        assert all(s.interval[1] - s.interval[0] >= 1.0 for s in report.samples)

    def test_negative_delta(self):
        with pytest.raises(DomainError):
            doubling_constant("1", delta=-1.0)

    def test_to_dict_without_samples(self, coarse_doubling, rule):
        data = doubling_constant("1", settings=coarse_doubling, rule=rule).to_dict(include_samples=False)
        assert "samples" not in data
        assert data["verdict"] == MEMBER
        assert data["sample_count"] > 0


def test_weak_doubling_accepts_fast_decay(coarse_doubling, rule):
    report = weak_doubling_check("(1+x)^-4", settings=coarse_doubling, rule=rule)
    assert report.family == "origin"
    assert report.is_member
    assert report.D <= 2.0 + 1e-9


class TestRatioBounds:
    def test_fitted_constants_pass(self, coarse_doubling, rule):
        report = doubling_constant("1", settings=coarse_doubling, rule=rule)
        bounds = ratio_bounds_check("1", report, [((0.0, 1.0), (0.0, 4.0))], rule=rule)
        assert bounds.fitted
        assert bounds.passed
        assert bounds.pairs[0].mass_ratio == pytest.approx(4.0)
        assert bounds.pairs[0].length_ratio == pytest.approx(4.0)

    def test_explicit_lower_constant_can_fail(self, coarse_doubling, rule):
        report = doubling_constant("1", settings=coarse_doubling, rule=rule)
        bounds = ratio_bounds_check("1", report, [((0.0, 1.0), (0.0, 4.0))], A=10.0, B=10.0, rule=rule)
        assert not bounds.fitted
        assert not bounds.passed

    def test_pairs_must_nest(self, coarse_doubling, rule):
        report = doubling_constant("1", settings=coarse_doubling, rule=rule)
        with pytest.raises(DomainError):
            ratio_bounds_check("1", report, [((0.0, 5.0), (0.0, 4.0))], rule=rule)


def test_closure_of_constant_weight(coarse_doubling, rule):
    report = closure_check("1", settings=coarse_doubling, rule=rule)
    assert report.passed
    assert set(report.products) == {1.0, 2.0}
    assert report.to_dict()["applicable"] is True


@given(
    power=st.floats(min_value=-0.9, max_value=2.0),
    shift=st.floats(min_value=-4.0, max_value=2.0),
    rate=st.floats(min_value=0.0, max_value=0.5),
)
@settings(max_examples=25, deadline=None)
def test_sampled_ratios_are_at_least_one(power, shift, rate):
    weight = f"x^{power:.3f} * (1+x)^{shift:.3f} * exp(-{rate:.3f}*x)"
    scan = DoublingSettings(min_length_log2=-4, max_length_log2=12, max_center_log2=12)
    report = doubling_constant(weight, settings=scan, rule=QuadratureRule(QuadratureSettings()))
    assert report.D >= 1.0
    assert report.min_ratio >= 1.0 - 1e-9


@pytest.mark.parametrize("weight", ["x^2", "x^-0.5", "(1+x)^2"])
def test_closure_of_non_constant_members(weight, coarse_doubling, rule):
    report = closure_check(weight, settings=coarse_doubling, rule=rule)
    assert report.base.is_member
    assert all(product.is_member for product in report.products.values())
    assert report.passed
