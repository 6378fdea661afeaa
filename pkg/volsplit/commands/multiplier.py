"""
multiplier command.

Checks whether multiplication by phi maps the weighted Sobolev space of order l
(weight u) into the one of order m (weight v), under both characterizations.
"""

from ..multipliers import MultiplierProblem, check_multiplier, sobolev_norm
from .common import emit, load_run_config, quadrature_rule, require


def run_multiplier(args) -> int:
    config = load_run_config(args, "multiplier")
    phi, u, v, l, m = require(config, "phi", "u", "v", "l", "m")  # noqa: E741
    rule = quadrature_rule(config)
    problem = MultiplierProblem.from_sources(phi, u, v, l, m)
    report = check_multiplier(
        problem,
        delta=config.inputs.delta,
        settings=config.numerics.supremum,
        doubling_settings=config.numerics.doubling,
        rule=rule,
    )
    result = {"multiplier": report.to_dict(), "phi_sobolev_norm": sobolev_norm(phi, u, l, rule)}
    summary = [
        ("integrable-weight verdict", report.integrable_weight_verdict),
        ("doubling-weight verdict", report.doubling_weight_verdict),
    ]
    return emit(args, config, report.verdict, result, summary=summary)
