"""
Criterion commands: hardy, split-criteria and rl-criteria.
"""

from ..criteria import (
    DegenerateKernel,
    RiemannLiouvilleKernel,
    adjoint_criterion,
    hardy_criterion,
    riemann_liouville_criterion,
    simple_rl_criterion,
    splitting_criteria,
)
from .common import criterion_rows, emit, load_run_config, quadrature_rule, require


def run_hardy(args) -> int:
    config = load_run_config(args, "hardy")
    u, v = require(config, "u", "v")
    report = hardy_criterion(u, v, config.numerics.supremum, quadrature_rule(config))
    entry = report.entries[0]
    return emit(
        args,
        config,
        report.verdict,
        {"criterion": report.to_dict()},
        rows=criterion_rows(report),
        summary=[("S_0", entry.supremum), ("argsup r", entry.argsup_r)],
    )


def run_split_criteria(args) -> int:
    config = load_run_config(args, "split-criteria")
    coeffs, u, v = require(config, "kernel", "u", "v")
    inputs = config.inputs
    kernel = DegenerateKernel.from_sources(coeffs)
    criterion = adjoint_criterion if inputs.adjoint else splitting_criteria
    report = criterion(
        kernel,
        u,
        v,
        delta=inputs.delta,
        settings=config.numerics.supremum,
        doubling_settings=config.numerics.doubling,
        rule=quadrature_rule(config),
    )
    summary = [(f"S_{e.k}", e.supremum) for e in report.entries]
    summary.append(("sum S_k", report.total))
    summary.append(("characterizes", report.characterizes))
    return emit(
        args,
        config,
        report.verdict,
        {"criterion": report.to_dict()},
        rows=criterion_rows(report),
        summary=summary,
    )


def run_rl_criteria(args) -> int:
    """Two-condition and single-supremum criteria for fractional integration."""
    config = load_run_config(args, "rl-criteria")
    alpha, u, v = require(config, "alpha", "u", "v")
    kernel = RiemannLiouvilleKernel(alpha)
    rule = quadrature_rule(config)
    supremum = config.numerics.supremum
    two = riemann_liouville_criterion(kernel, u, v, supremum, rule)
    simple = simple_rl_criterion(
        kernel,
        u,
        v,
        delta=config.inputs.delta,
        settings=supremum,
        doubling_settings=config.numerics.doubling,
        rule=rule,
    )
    return emit(
        args,
        config,
        two.verdict,
        {"two_condition": two.to_dict(), "simple": simple.to_dict()},
        rows=criterion_rows(two, simple),
        summary=[
            ("first condition", two.entries[0].supremum),
            ("second condition", two.entries[1].supremum),
            ("single supremum", simple.entries[0].supremum),
            ("single supremum verdict", simple.verdict),
        ],
    )
