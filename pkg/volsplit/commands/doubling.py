"""
check-doubling command.

Samples the doubling constant of a weight (concentric or origin-anchored family),
optionally checks the mass-ratio envelopes on given interval pairs and the closure
of the class under multiplication by powers of x.
"""

from ..weights import closure_check, doubling_constant, ratio_bounds_check, weak_doubling_check
from .common import emit, load_run_config, quadrature_rule, require


def run_check_doubling(args) -> int:
    config = load_run_config(args, "check-doubling")
    (weight,) = require(config, "weight")
    inputs = config.inputs
    settings = config.numerics.doubling
    rule = quadrature_rule(config)

    check = weak_doubling_check if inputs.weak else doubling_constant
    report = check(weight, inputs.delta, settings, rule)
    result = {"doubling": report.to_dict()}
    summary = [("D", report.D), ("E", report.E), ("sampled intervals", len(report.samples))]

    if inputs.pairs:
        bounds = ratio_bounds_check(weight, report, inputs.pairs, rule=rule)
        result["ratio_bounds"] = bounds.to_dict()
        summary.append(("ratio bounds", "pass" if bounds.passed else "fail"))
    if inputs.closure:
        closure = closure_check(weight, inputs.delta, settings=settings, rule=rule)
        result["closure"] = closure.to_dict()
        summary.append(("closure under x^gamma", "pass" if closure.passed else "fail"))

    return emit(args, config, report.verdict, result, summary=summary)
