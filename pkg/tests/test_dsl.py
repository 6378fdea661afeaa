"""Tests for the weight expression language."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from volsplit.errors import UnknownIdentifierError, WeightSyntaxError
from volsplit.numerics import X, as_weight, parse_weight
from volsplit.numerics.dsl import exp, to_source


class TestParsing:
    def test_power_binds_tighter_than_unary_minus(self):
        assert parse_weight("-x^2")(3.0) == pytest.approx(-9.0)

    def test_power_is_right_associative(self):
        assert parse_weight("2^3^2")(0.0) == pytest.approx(512.0)

    def test_negative_exponent(self):
        assert parse_weight("2^-x")(3.0) == pytest.approx(0.125)

    def test_numbers_and_constants(self):
        w = parse_weight("1e-3 * x + .5 + pi - e")
        assert w(2.0) == pytest.approx(0.002 + 0.5 + math.pi - math.e)

    def test_functions(self):
        w = parse_weight("exp(-x) + log(x) + abs(x - 3)")
        assert w(1.0) == pytest.approx(math.exp(-1.0) + 0.0 + 2.0)

    def test_unknown_identifier_position(self):
        with pytest.raises(UnknownIdentifierError) as exc:
            parse_weight("x + foo")
        assert exc.value.position == 4
        assert "offset 4" in str(exc.value)

    def test_syntax_error_position(self):
        with pytest.raises(WeightSyntaxError) as exc:
            parse_weight("1+*x")
        assert exc.value.position == 2

    def test_unbalanced_parenthesis(self):
        with pytest.raises(WeightSyntaxError):
            parse_weight("(1 + x")

    def test_bad_character(self):
        with pytest.raises(WeightSyntaxError) as exc:
            parse_weight("x $ 2")
        assert exc.value.position == 2

    def test_empty(self):
        with pytest.raises(WeightSyntaxError):
            parse_weight("   ")


class TestEvaluation:
    def test_vectorised(self):
        x = np.array([1.0, 2.0, 4.0])
        np.testing.assert_allclose(parse_weight("(1+x)^-1")(x), 1.0 / (1.0 + x))

    def test_log_form_avoids_overflow(self):
        w = exp(-X) * exp(X)
        la, sign = w.log_abs(np.array([1000.0, 5000.0]))
        np.testing.assert_allclose(la, [0.0, 0.0], atol=1e-9)
        np.testing.assert_array_equal(sign, [1.0, 1.0])

    def test_log_form_matches_direct(self):
        w = parse_weight("x^2 * exp(-x) - 0.1")
        x = np.array([0.5, 1.0, 3.0, 10.0])
        la, sign = w.log_abs(x)
        np.testing.assert_allclose(sign * np.exp(la), w(x), rtol=1e-12)

    def test_zero_value_log_form(self):
        la, sign = parse_weight("x - 1").log_abs(np.array([1.0]))
        assert la[0] == -math.inf
        assert sign[0] == 0.0

    def test_operator_overloads(self):
        w = (X**2 + 1) / 2
        assert w(3.0) == pytest.approx(5.0)
        assert as_weight(3)(10.0) == pytest.approx(3.0)
        assert as_weight("x").is_constant is False
        assert as_weight(0).is_zero


class TestDerivative:
    @pytest.mark.parametrize(
        "source, order, point, expected",
        [
            ("x^3", 1, 2.0, 12.0),
            ("x^3", 2, 2.0, 12.0),
            ("x^3", 4, 2.0, 0.0),
            ("exp(-x)", 1, 0.0, -1.0),
            ("log(x)", 1, 4.0, 0.25),
            ("x * exp(x)", 1, 1.0, 2 * math.e),
            ("1 / (1 + x)", 1, 1.0, -0.25),
            ("2^x", 1, 1.0, 2 * math.log(2.0)),
        ],
    )
    def test_known_derivatives(self, source, order, point, expected):
        d = parse_weight(source).derivative(order)
        assert d(point) == pytest.approx(expected, abs=1e-12)

    def test_constant_folds_to_zero(self):
        assert parse_weight("pi^2").derivative().is_zero


_leaves = st.sampled_from(["x", "1", "2", "0.5", "3e-2", "pi", "e"])


def _combine(children):
    binary = st.tuples(children, st.sampled_from("+-*/^"), children).map(
        lambda t: f"({t[0]} {t[1]} {t[2]})"
    )
    unary = children.map(lambda a: f"-{a}")
    call = st.tuples(st.sampled_from(["exp", "log", "abs"]), children).map(
        lambda t: f"{t[0]}({t[1]})"
    )
    return st.one_of(binary, unary, call)


expressions = st.recursive(_leaves, _combine, max_leaves=12)


@given(expressions)
@settings(max_examples=200, deadline=None)
def test_print_parse_round_trip(source):
    ast = parse_weight(source).ast
    assert parse_weight(to_source(ast)).ast == ast


def _positive(children):
    binary = st.tuples(children, st.sampled_from("+*/"), children).map(
        lambda t: f"({t[0]} {t[1]} {t[2]})"
    )
    return st.one_of(binary, children.map(lambda a: f"exp({a})"), children.map(lambda a: f"abs({a})"))


positive_expressions = st.recursive(_leaves, _positive, max_leaves=10)


@given(positive_expressions, st.floats(min_value=0.1, max_value=5.0))
@settings(max_examples=200, deadline=None)
def test_log_form_agrees_with_direct_evaluation(source, point):
    w = parse_weight(source)
    direct = w(point)
    if not math.isfinite(direct) or direct > 1e300 or direct < 1e-300:
        return
    la, sign = w.log_abs(point)
    assert sign[0] == np.sign(direct)
    assert la[0] == pytest.approx(math.log(abs(direct)), rel=1e-9, abs=1e-9)
