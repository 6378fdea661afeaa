"""Tests for orthogonal polynomials on [0, r] and the constructions built on them."""

import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from volsplit.config import OrthopolySettings, QuadratureSettings
from volsplit.errors import DomainError
from volsplit.numerics import QuadratureRule
from volsplit.orthopoly import (
    build_mass_set,
    build_split_witness,
    build_system,
    constrained_minimum,
    constrained_objective,
    default_ladder,
    gram_ladder,
    gram_ratio,
    markov_cap,
    markov_growth_check,
    root_spacing_check,
    weak_split_check,
    weak_split_ladder,
    witness_ladder,
)


class TestSystem:
    def test_shifted_legendre_roots(self, rule):
        system = build_system("1", 1.0, 2, rule=rule)
        expected = [(3 - math.sqrt(3)) / 6, (3 + math.sqrt(3)) / 6]
        np.testing.assert_allclose(system.roots, expected, rtol=1e-10)
        assert system.evaluate(np.array([0.0]))[0] == pytest.approx(1.0)
        assert system.max_residual < 1e-8

    def test_linear_weight(self, rule):
        system = build_system("x", 1.0, 1, rule=rule)
        assert system.roots == pytest.approx([2 / 3])

    def test_scaling_with_r(self, rule):
        system = build_system("1", 8.0, 2, rule=rule)
        expected = [8 * (3 - math.sqrt(3)) / 6, 8 * (3 + math.sqrt(3)) / 6]
        np.testing.assert_allclose(system.roots, expected, rtol=1e-10)
        assert system.gaps.sum() == pytest.approx(8.0)

    def test_critical_points_interlace(self, rule):
        system = build_system("exp(-x)", 4.0, 3, rule=rule)
        crit = system.critical_points()
        assert len(crit) == 2
        assert system.roots[0] < crit[0] < system.roots[1] < crit[1] < system.roots[2]

    def test_q_has_no_constant_term(self, rule):
        system = build_system("1", 1.0, 2, rule=rule)
        assert system.q_coefficients[0] == 0.0
        np.testing.assert_allclose(system.q_coefficients[1:], -system.coefficients[1:])

    @pytest.mark.parametrize("n, r", [(0, 1.0), (13, 1.0), (2, 0.0)])
    def test_domain(self, n, r):
        with pytest.raises(DomainError):
            build_system("1", r, n)


@given(
    power=st.integers(min_value=0, max_value=2),
    shift=st.floats(min_value=-2.0, max_value=2.0),
    rate=st.floats(min_value=0.0, max_value=1.0),
    r=st.floats(min_value=0.5, max_value=64.0),
    n=st.integers(min_value=1, max_value=5),
)
@settings(max_examples=50, deadline=None, derandomize=True)
def test_orthogonality_residuals_on_random_weights(power, shift, rate, r, n):
    weight = f"x^{power} * (1+x)^{shift:.3f} * exp(-{rate:.3f}*x)"
    system = build_system(weight, r, n, rule=QuadratureRule(QuadratureSettings()))
    assert len(system.roots) == n
    assert system.max_residual < 1e-8


SPACING_LADDER = [2.0**k for k in range(2, 13, 2)]


class TestRootSpacing:
    def test_homogeneous_weight_is_scale_invariant(self, rule):
        check = root_spacing_check("x^2", 3, [1.0, 4.0, 16.0], rule=rule)
        assert check.passed
        assert check.spread < 1e-8

    def test_ladder_details(self, rule):
        check = root_spacing_check("(1+x)^-1", 2, [1.0, 8.0], rule=rule)
        assert [d["r"] for d in check.details] == [1.0, 8.0]
        assert check.minimum > 0
        assert check.to_dict()["label"] == "root spacing"

    def test_default_ladder_respects_delta(self):
        ladder = default_ladder(2, delta=1.0)
        assert ladder[0] == 16.0
        assert all(b == 2 * a for a, b in zip(ladder, ladder[1:]))

    @pytest.mark.parametrize("weight", ["1", "x", "x^2"])
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_uniform_spacing_for_power_weights(self, weight, n, rule):
        check = root_spacing_check(weight, n, SPACING_LADDER, rule=rule)
        assert check.spread < 0.2
        assert check.passed

    @pytest.mark.parametrize(
        "weight, first_moment",
        [
            ("(1+x)^-1", lambda r: 1 / math.log1p(r) - 1 / r),
            (
                "(1+x)^-3",
                lambda r: 2 * ((1 - 1 / (1 + r)) - 0.5 * (1 - (1 + r) ** -2)) / (r * (1 - (1 + r) ** -2)),
            ),
        ],
    )
    def test_root_drifts_to_origin_for_decaying_weights(self, weight, first_moment, rule):
        # the single root sits at the first moment of the unit-mass weight on [0, 1]
        check = root_spacing_check(weight, 1, SPACING_LADDER, rule=rule)
        for r, detail in zip(check.ladder, check.details):
            assert detail["roots"][0] / r == pytest.approx(first_moment(r), rel=1e-8)
        assert check.spread > 0.5
        assert not check.passed


class TestMassSet:
    def test_single_piece(self, rule):
        system = build_system("1", 2.0, 1, rule=rule)
        mass = build_mass_set(system, "1", beta=0.5, rule=rule)
        assert mass.intervals[0] == pytest.approx((0.0, 1.0), abs=1e-12)
        assert mass.beta_achieved == pytest.approx(0.5, rel=1e-10)
        assert mass.gamma_achieved == pytest.approx(7.0, rel=1e-8)
        assert mass.condition_met

    def test_one_piece_per_monotone_interval(self, rule):
        system = build_system("1", 1.0, 2, rule=rule)
        mass = build_mass_set(system, "1", rule=rule)
        assert len(mass.intervals) == 2
        assert mass.betas_tried[0] == 0.5

    def test_beta_domain(self, rule):
        system = build_system("1", 1.0, 1, rule=rule)
        with pytest.raises(DomainError):
            build_mass_set(system, "1", beta=1.5, rule=rule)

    def test_weak_split(self, rule):
        split = weak_split_check("1", 1.0, 0.5, rule)
        assert split.split_point == pytest.approx(0.5, rel=1e-10)
        assert split.gamma == pytest.approx(7.0, rel=1e-8)

    def test_weak_split_ladder_finds_beta(self, rule):
        splits = weak_split_ladder("1", [1.0, 2.0], rule=rule)
        assert all(s.condition_met for s in splits)

    @pytest.mark.parametrize("weight, n", [("1", 1), ("1", 2), ("x", 1), ("(1+x)^-1", 1)])
    def test_fraction_and_gamma(self, weight, n, rule):
        system = build_system(weight, 16.0, n, rule=rule)
        fixed = build_mass_set(system, weight, beta=0.25, rule=rule)
        assert fixed.beta_achieved == pytest.approx(0.25, abs=1e-8)
        tuned = build_mass_set(system, weight, rule=rule)
        assert tuned.beta_achieved == pytest.approx(tuned.beta, abs=1e-8)
        assert tuned.gamma_achieved > 1 / tuned.beta - 1
        assert tuned.condition_met


class TestWitnessAndGram:
    def test_gram_ratio_constant_weight(self, rule):
        assert gram_ratio("1", 1.0, 1, rule=rule) == pytest.approx(0.5, rel=1e-10)

    def test_gram_degree_cap(self):
        with pytest.raises(DomainError):
            gram_ratio("1", 1.0, 7)

    def test_split_witness_constant_weight(self, rule):
        witness = build_split_witness("1", 1.0, 1, rule=rule)
        assert witness.epsilon_achieved == pytest.approx(0.5, rel=1e-10)
        assert witness.c_achieved == pytest.approx(math.sqrt(0.75), rel=1e-10)
        assert witness.moment_residuals.max() < 1e-10

    def test_identity_between_epsilon_and_cosine(self, rule):
        witness = build_split_witness("(1+x)^-1", 3.0, 2, rule=rule)
        assert witness.epsilon_achieved**2 + witness.c_achieved**2 == pytest.approx(1.0, abs=1e-8)

    def test_ladders(self, rule):
        gram = gram_ladder("1", 1, [1.0, 4.0], rule=rule)
        assert gram.values == pytest.approx([0.5, 0.5], rel=1e-10)
        assert gram.passed
        witnesses = witness_ladder("1", 1, [1.0, 4.0], rule=rule)
        assert witnesses.values == pytest.approx([0.5, 0.5], rel=1e-10)

    @pytest.mark.parametrize("gamma", [0.5, 1.0, 2.0])
    def test_homogeneous_weight_is_scale_equivariant(self, gamma, rule):
        u = f"x^{-gamma / 2:g}"
        radii = [0.25, 4.0, 512.0]
        epsilons = [build_split_witness(u, r, 2, rule=rule).epsilon_achieved for r in radii]
        grams = [gram_ratio(u, r, 2, rule=rule) for r in radii]
        roots = [build_system(f"x^{gamma:g}", r, 2, rule=rule).roots / r for r in radii]
        np.testing.assert_allclose(epsilons, epsilons[0], rtol=1e-8)
        np.testing.assert_allclose(grams, grams[0], rtol=1e-8)
        np.testing.assert_allclose(roots, np.broadcast_to(roots[0], (3, 2)), rtol=1e-8)

    @pytest.mark.slow
    @pytest.mark.parametrize(
        "u, n",
        [("1", 1), ("1", 3), ("(1+x)^0.5", 1), ("(1+x)^0.5", 3), ("(1+x)^1.5", 1), ("(1+x)^1.5", 2)],
    )
    def test_epsilon_and_gram_keep_half_of_first_rung(self, u, n, rule):
        witnesses = witness_ladder(u, n, SPACING_LADDER, rule=rule)
        gram = gram_ladder(u, n, SPACING_LADDER, rule=rule)
        assert witnesses.minimum >= 0.5 * witnesses.reference
        assert gram.minimum >= 0.5 * gram.reference

    def test_exponential_gram_is_reported(self, rule, record_property):
        check = gram_ladder("exp(x)", 2, SPACING_LADDER, rule=rule)
        record_property("gram_ratio_exp", check.values)
        assert all(0.0 <= value <= 1.0 for value in check.values)


class TestConstrainedMinimum:
    def test_known_value(self):
        result = constrained_minimum(0.75, 0.25)
        assert result.minimum == pytest.approx(0.75)
        assert constrained_objective(0.25, result.alpha1, result.alpha2) == pytest.approx(0.75)
        assert 0.75 * result.alpha1 + 0.25 * result.alpha2 == pytest.approx(1.0)

    def test_beta_one(self):
        result = constrained_minimum(1.0, 0.3)
        assert result.alpha2 == math.inf
        assert result.minimum == pytest.approx(0.3)

    def test_gamma_bound_below_one(self):
        result = constrained_minimum(0.75, 0.25, gamma=1.0)
        assert result.bound < 1.0
        assert result.minimum <= result.bound

    @pytest.mark.parametrize("beta, a, gamma", [(0.5, 0.0, None), (0.0, 0.5, None), (0.4, 0.25, 1.0)])
    def test_domain(self, beta, a, gamma):
        with pytest.raises(DomainError):
            constrained_minimum(beta, a, gamma)


@given(
    pivot=st.floats(min_value=0.1, max_value=0.9),
    above=st.floats(min_value=0.02, max_value=0.98),
    below=st.floats(min_value=0.05, max_value=0.99),
)
@settings(max_examples=100, deadline=None, derandomize=True)
def test_closed_form_matches_constraint_line_grid(pivot, above, below):
    gamma = 1 / pivot - 1
    beta = pivot + (1 - pivot) * above
    a = pivot * below
    result = constrained_minimum(beta, a, gamma)
    assert beta * result.alpha1 + (1 - beta) * result.alpha2 == pytest.approx(1.0, rel=1e-9)
    assert constrained_objective(a, result.alpha1, result.alpha2) == pytest.approx(result.minimum, rel=1e-9)
    assert result.minimum < result.bound < 1.0

    # theta = beta * alpha1 runs over (0, 1) along the constraint line
    theta = np.linspace(0.0, 1.0, 10**4 + 2)[1:-1]
    grid_minimum = float(np.min(constrained_objective(a, theta / beta, (1 - theta) / (1 - beta))))
    assert -1e-12 <= grid_minimum - result.minimum <= 1e-6


# Largest c_needed admitted on the degree-5 corpus: the extremal constant for nestings up to 100
MARKOV_DEGREE5_BOUND = 499.3116004999


def _nested_pair(rng: np.random.Generator, max_ratio: float):
    start = rng.uniform(-1.0, 1.0)
    length = rng.uniform(0.05, 2.0)
    outer_length = length * math.exp(rng.uniform(0.0, math.log(max_ratio)))
    outer_start = start - rng.uniform(0.0, 1.0) * (outer_length - length)
    inner = (start, start + length)
    outer = (min(outer_start, start), max(outer_start + outer_length, start + length))
    return inner, outer


class TestMarkov:
    def test_monomial(self):
        growth = markov_growth_check([0, 0, 0, 1], (0.0, 1.0), (0.0, 2.0))
        assert growth.c_needed == pytest.approx(1.0)
        assert growth.cap == pytest.approx(31.521799, rel=1e-9)
        assert growth.outer_cap == 64.0
        assert growth.passed

    def test_constant(self):
        growth = markov_growth_check([3.0], (0.2, 0.3), (0.0, 5.0))
        assert growth.c_needed == pytest.approx(1.0)
        assert growth.passed

    def test_chebyshev_growth_within_cap(self):
        # T_3 on [-1, 1] grows to T_3(3) = 99 on [-3, 3]
        growth = markov_growth_check([0, -3, 0, 4], (-1.0, 1.0), (-3.0, 3.0))
        assert growth.c_needed == pytest.approx(99 / 27)
        assert growth.passed

    def test_chebyshev_at_the_end_attains_cap(self):
        # T_2 on [-1, 1] seen from [-1, 2 * 100 - 1] reaches the extremal constant
        settings = OrthopolySettings(markov_max_ratio=100.0)
        growth = markov_growth_check([-1, 0, 2], (-1.0, 1.0), (-1.0, 199.0), settings)
        assert growth.c_needed == pytest.approx(growth.cap, rel=1e-9)
        assert growth.passed

    def test_cap_follows_ratio_beyond_calibration(self, caplog):
        with caplog.at_level(logging.WARNING, logger="volsplit.orthopoly"):
            growth = markov_growth_check([1, 0, 1], (0.0, 1.0), (0.0, 400.0))
        assert growth.cap == pytest.approx(markov_cap(2, 400.0))
        assert growth.passed
        assert "exceeds markov_max_ratio" in caplog.text

    def test_cap_stays_below_outer_bound(self):
        for n in range(1, 9):
            assert 1.0 < markov_cap(n, 100.0) < 4.0**n / 2

    def test_degree5_corpus_stays_under_frozen_bound(self):
        rng = np.random.default_rng(5)
        settings = OrthopolySettings(markov_grid=256)
        worst = 0.0
        for _ in range(1000):
            inner, outer = _nested_pair(rng, 100.0)
            growth = markov_growth_check(rng.standard_normal(6), inner, outer, settings)
            assert growth.passed
            worst = max(worst, growth.c_needed)
        assert worst <= MARKOV_DEGREE5_BOUND * (1 + 1e-9)
        assert markov_cap(5, 100.0) == pytest.approx(MARKOV_DEGREE5_BOUND, rel=1e-12)

    def test_nesting(self):
        with pytest.raises(DomainError):
            markov_growth_check([0, 1], (0.0, 2.0), (0.0, 1.0))
