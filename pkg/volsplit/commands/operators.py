"""
Operator commands: op-norm, split-experiment and counterexample.
"""

import math

from ..criteria import DegenerateKernel, splitting_criteria
from ..operators import (
    discretize,
    fractional_counterexample,
    operator_norm,
    splitting_experiment,
    witness_lower_bound,
)
from ..reports import INCONCLUSIVE
from .common import emit, load_run_config, quadrature_rule, require


def run_op_norm(args) -> int:
    """Norm of the discretized operator on (0, R) next to the two-sided criterion bounds."""
    config = load_run_config(args, "op-norm")
    coeffs, u, v = require(config, "kernel", "u", "v")
    inputs = config.inputs
    settings = config.numerics.operators
    rule = quadrature_rule(config)
    kernel = DegenerateKernel.from_sources(coeffs)
    R = inputs.R or max(settings.r_ladder)
    N = inputs.N or settings.grid_size

    op = discretize(kernel, u, v, R, N, settings, adjoint=inputs.adjoint)
    estimate = operator_norm(op, settings)
    criteria = splitting_criteria(
        kernel, u, v, stamp=False, settings=config.numerics.supremum, rule=rule
    )
    sum_S = criteria.total
    max_S = max(e.supremum for e in criteria.entries)
    bounds = {
        "max_S": max_S,
        "sum_S": sum_S,
        "upper_bound_holds": estimate.value <= 2.0 * sum_S * 1.05 if math.isfinite(sum_S) else None,
    }
    result = {
        "operator": op.to_dict(),
        "norm": estimate.to_dict(),
        "causality_violation": op.causality_violation(),
        "criteria": criteria.to_dict(include_curves=False),
        "bounds": bounds,
    }
    if inputs.r_ladder:
        result["witness_lower_bounds"] = [
            b.to_dict() for b in witness_lower_bound(kernel, u, v, inputs.r_ladder, rule)
        ]
    verdict = "estimated" if estimate.converged or estimate.svd_value is not None else INCONCLUSIVE
    return emit(
        args,
        config,
        verdict,
        result,
        rows=[{"R": R, "N": op.size, "norm": estimate.value, "sum_S": sum_S}],
        summary=[("norm", estimate.value), ("method", estimate.method), ("sum S_k", sum_S)],
    )


def run_split_experiment(args) -> int:
    config = load_run_config(args, "split-experiment")
    coeffs, u, v = require(config, "kernel", "u", "v")
    inputs = config.inputs
    rule = quadrature_rule(config)
    kernel = DegenerateKernel.from_sources(coeffs)
    criteria = splitting_criteria(
        kernel,
        u,
        v,
        delta=inputs.delta,
        settings=config.numerics.supremum,
        doubling_settings=config.numerics.doubling,
        rule=rule,
    )
    experiment = splitting_experiment(
        kernel,
        u,
        v,
        inputs.r_ladder,
        inputs.N,
        criteria=criteria,
        settings=config.numerics.operators,
        supremum_settings=config.numerics.supremum,
        rule=rule,
    )
    return emit(
        args,
        config,
        experiment.verdict,
        {"experiment": experiment.to_dict()},
        rows=experiment.ladder_rows(),
        table=True,
        summary=[
            ("total norms", ", ".join(f"{x:.6g}" for x in experiment.total_norms)),
            ("sum S_k", criteria.total),
            ("upper bound holds", experiment.upper_bound_holds),
            ("mismatches", len(experiment.mismatches)),
        ],
    )


def run_counterexample(args) -> int:
    """Fractional integration of integer order whose components are unbounded."""
    config = load_run_config(args, "counterexample")
    inputs = config.inputs
    summary = fractional_counterexample(
        alpha=inputs.alpha or 2.0,
        u=inputs.u or "exp(-x)",
        v=inputs.v or "exp(-x)",
        R_ladder=inputs.r_ladder,
        N=inputs.N,
        settings=config.numerics.operators,
        supremum_settings=config.numerics.supremum,
        rule=quadrature_rule(config),
    )
    verdict = "splitting-fails" if summary.splitting_fails else INCONCLUSIVE
    return emit(
        args,
        config,
        verdict,
        {"counterexample": summary.to_dict()},
        rows=summary.experiment.ladder_rows(),
        table=True,
        summary=[
            ("operator bounded", summary.total_bounded),
            ("components unbounded", summary.components_unbounded),
            ("components grow", summary.components_grow),
            ("total drift", summary.total_drift),
        ],
    )
