"""Tests for the supremum criteria of Hardy, splitting and fractional operators."""

import math

import numpy as np
import pytest

from volsplit.criteria import (
    BOUNDED,
    UNBOUNDED,
    DegenerateKernel,
    RiemannLiouvilleKernel,
    adjoint_criterion,
    gamma_function,
    golden_max,
    hardy_criterion,
    riemann_liouville_criterion,
    simple_rl_criterion,
    splitting_criteria,
)
from volsplit.errors import CriterionError, DomainError


@pytest.mark.parametrize(
    "x, expected", [(5.0, 24.0), (1.0, 1.0), (0.5, math.sqrt(math.pi)), (3.5, 3.323350970447843)]
)
def test_gamma_function(x, expected):
    assert gamma_function(x) == pytest.approx(expected, rel=1e-10)


def test_golden_max_finds_interior_peak():
    s, value = golden_max(lambda s: -((s - 0.3) ** 2), -1.0, 1.0, 60)
    assert s == pytest.approx(0.3, abs=1e-6)
    assert value == pytest.approx(0.0, abs=1e-10)


class TestKernels:
    def test_component_keeps_one_coefficient(self):
        kernel = DegenerateKernel.from_sources(["x", "1", "exp(-x)"])
        assert kernel.n == 2
        part = kernel.component(1)
        assert [c.is_zero for c in part.coeffs] == [True, False, True]

    def test_empty_kernel(self):
        with pytest.raises(DomainError):
            DegenerateKernel(())

    def test_integer_order_expands(self):
        kernel = RiemannLiouvilleKernel(2.0).to_degenerate()
        assert kernel.n == 1
        assert kernel.coeffs[0](3.0) == pytest.approx(3.0)
        assert kernel.coeffs[1](3.0) == pytest.approx(-1.0)

    def test_third_order_expansion_matches_kernel(self):
        kernel = RiemannLiouvilleKernel(3.0).to_degenerate()
        x, t = 2.5, 0.75
        value = sum(a(x) * t**k for k, a in enumerate(kernel.coeffs))
        assert value == pytest.approx((x - t) ** 2 / 2)

    def test_fractional_order_is_not_degenerate(self):
        with pytest.raises(DomainError):
            RiemannLiouvilleKernel(1.5).to_degenerate()

    def test_order_below_one(self):
        with pytest.raises(DomainError):
            RiemannLiouvilleKernel(0.5)


class TestHardy:
    def test_bounded_pair(self, coarse_supremum, rule):
        report = hardy_criterion("1", "1/x", coarse_supremum, rule)
        entry = report.entries[0]
        assert report.kind == "hardy"
        assert report.verdict == BOUNDED
        assert entry.supremum == pytest.approx(1.0, rel=1e-6)
        assert np.allclose(entry.evidence_product, 1.0, rtol=1e-6)

    def test_tail_divergent(self, coarse_supremum, rule):
        report = hardy_criterion("1", "1", coarse_supremum, rule)
        assert report.verdict == UNBOUNDED
        assert report.entries[0].supremum == math.inf
        assert report.entries[0].reason == "tail-divergent"
        assert report.witness_k == 0

    def test_growth_at_infinity(self, coarse_supremum, rule):
        entry = hardy_criterion("exp(-x)", "(1+x)^-1", coarse_supremum, rule).entries[0]
        assert entry.supremum == math.inf
        assert entry.reason == "growth-at-infinity"

    def test_both_factors_divergent(self, coarse_supremum, rule):
        with pytest.raises(CriterionError):
            hardy_criterion("x", "1", coarse_supremum, rule)

    def test_to_dict_evidence(self, coarse_supremum, rule):
        data = hardy_criterion("1", "1/x", coarse_supremum, rule).to_dict()
        evidence = data["per_k"][0]["evidence"]
        assert len(evidence["r"]) == len(evidence["product"])
        assert "evidence" not in hardy_criterion("1", "1/x", coarse_supremum, rule).to_dict(False)["per_k"][0]


class TestSplitting:
    def test_zero_coefficient(self, coarse_supremum, coarse_doubling, rule):
        kernel = DegenerateKernel.from_sources(["1", "0"])
        report = splitting_criteria(
            kernel, "1", "1/x", settings=coarse_supremum, doubling_settings=coarse_doubling, rule=rule
        )
        assert report.entries[1].supremum == 0.0
        assert report.entries[1].reason == "zero-coefficient"
        assert report.total == pytest.approx(1.0, rel=1e-6)
        assert report.verdict == BOUNDED
        assert report.stamps["doubling"]["verdict"] == "member"
        assert report.characterizes

    def test_adjoint_shares_suprema(self, coarse_supremum, rule):
        kernel = DegenerateKernel.from_sources(["1"])
        forward = splitting_criteria(kernel, "1", "1/x", stamp=False, settings=coarse_supremum, rule=rule)
        adjoint = adjoint_criterion(kernel, "1", "1/x", stamp=False, settings=coarse_supremum, rule=rule)
        assert adjoint.kind == "adjoint"
        assert adjoint.total == pytest.approx(forward.total)

    def test_non_doubling_stamp_is_noted(self, coarse_supremum, coarse_doubling, rule):
        kernel = DegenerateKernel.from_sources(["1"])
        report = splitting_criteria(
            kernel, "(1+x)^2", "1", settings=coarse_supremum, doubling_settings=coarse_doubling, rule=rule
        )
        assert report.stamps["doubling"]["verdict"] == "violated"
        assert not report.characterizes
        assert report.notes

    def test_side_conditions_with_delta(self, coarse_supremum, rule):
        kernel = DegenerateKernel.from_sources(["1/x", "1"])
        report = splitting_criteria(
            kernel, "1", "(1+x)^-3", delta=1.0, stamp=False, settings=coarse_supremum, rule=rule
        )
        assert report.side_conditions == {0: False}


class TestFractional:
    @pytest.mark.slow
    def test_two_condition_criterion_is_bounded(self, rule):
        report = riemann_liouville_criterion(RiemannLiouvilleKernel(2.0), "exp(-x)", "exp(-x)", rule=rule)
        assert report.verdict == BOUNDED
        for entry in report.entries:
            assert entry.supremum == pytest.approx(1 / math.sqrt(8), rel=1e-4)

    def test_components_of_second_order_are_unbounded(self, coarse_supremum, rule):
        kernel = RiemannLiouvilleKernel(2.0).to_degenerate()
        report = splitting_criteria(kernel, "exp(-x)", "exp(-x)", stamp=False, settings=coarse_supremum, rule=rule)
        assert report.verdict == UNBOUNDED
        assert all(e.supremum == math.inf for e in report.entries)

    def test_order_one_is_hardy(self, coarse_supremum, rule):
        report = riemann_liouville_criterion(RiemannLiouvilleKernel(1.0), "1", "1/x", coarse_supremum, rule)
        assert [e.supremum for e in report.entries] == pytest.approx([1.0, 1.0], rel=1e-6)

    def test_simple_criterion_without_weak_doubling(self, coarse_supremum, coarse_doubling, rule):
        report = simple_rl_criterion(
            RiemannLiouvilleKernel(2.0),
            "exp(-x)",
            "exp(-x)",
            cross_check=False,
            settings=coarse_supremum,
            doubling_settings=coarse_doubling,
            rule=rule,
        )
        assert report.verdict == UNBOUNDED
        assert report.stamps["weak_doubling"]["verdict"] != "member"
        assert report.notes


@pytest.mark.parametrize(
    "coeffs, u, v",
    [(["1"], "1", "1/x"), (["1", "-1"], "x^0.25", "(1+x)^-3"), (["x", "1"], "(1+x)^0.5", "exp(-x)")],
)
def test_factors_are_monotone_in_r(coeffs, u, v, coarse_supremum, rule):
    report = splitting_criteria(
        DegenerateKernel.from_sources(coeffs), u, v, stamp=False, settings=coarse_supremum, rule=rule
    )
    for entry in report.entries:
        tail = entry.evidence_log_tail[np.isfinite(entry.evidence_log_tail)]
        head = entry.evidence_log_head[np.isfinite(entry.evidence_log_head)]
        assert tail.size > 0 and head.size > 0
        assert np.all(np.diff(tail) <= 1e-12 * np.maximum(1.0, np.abs(tail[1:])))
        assert np.all(np.diff(head) >= -1e-12 * np.maximum(1.0, np.abs(head[1:])))
