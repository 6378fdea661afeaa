"""
Orthogonal polynomial commands: orthopoly, gram, witness and lemma35 (constrained-min).
"""

import math

from ..orthopoly import (
    build_mass_set,
    build_split_witness,
    build_system,
    constrained_minimum,
    default_ladder,
    gram_ladder,
    gram_ratio,
    markov_growth_check,
    root_spacing_check,
    weak_split_ladder,
    witness_ladder,
)
from .common import emit, load_run_config, quadrature_rule, require


def _ladder_rows(check) -> list[dict[str, float]]:
    return [{"r": r, check.label.replace(" ", "_"): value} for r, value in zip(check.ladder, check.values)]


def _verdict(check) -> str:
    return "pass" if check.passed else "fail"


def run_orthopoly(args) -> int:
    """Build the system at r, then check root spacing (and mass sets) along the ladder."""
    config = load_run_config(args, "orthopoly")
    weight, r, n = require(config, "weight", "r", "n")
    inputs = config.inputs
    settings = config.numerics.orthopoly
    rule = quadrature_rule(config)

    system = build_system(weight, r, n, settings, rule, config.numerics.roots)
    # growth of P from [0, r/2] to [0, r], in the scaled variable
    markov = markov_growth_check(system.scaled_coefficients, (0.0, 0.5), (0.0, 1.0), settings)
    spacing = root_spacing_check(weight, n, inputs.r_ladder, inputs.delta, settings, rule)
    result = {
        "system": system.to_dict(),
        "markov_growth": markov.to_dict(),
        "root_spacing": spacing.to_dict(),
    }
    summary = [
        ("roots", ", ".join(f"{t:.10g}" for t in system.roots)),
        ("condition", system.condition),
        ("max residual", system.max_residual),
        ("min gap / r across ladder", spacing.minimum),
    ]

    if inputs.w is not None:
        if inputs.weak:
            ladder = inputs.r_ladder or default_ladder(n, inputs.delta, settings)
            splits = weak_split_ladder(inputs.w, ladder, inputs.beta, settings, rule)
            result["weak_splits"] = [s.to_dict() for s in splits]
            summary.append(("weak split beta", splits[0].beta))
        else:
            mass_set = build_mass_set(system, inputs.w, inputs.beta, settings, rule)
            result["mass_set"] = mass_set.to_dict()
            summary.append(("mass set gamma", mass_set.gamma_achieved))
            summary.append(("mass set condition", mass_set.condition_met))

    return emit(
        args,
        config,
        _verdict(spacing),
        result,
        rows=_ladder_rows(spacing),
        summary=summary,
        table=True,
    )


def run_gram(args) -> int:
    config = load_run_config(args, "gram")
    u, n = require(config, "u", "n")
    inputs = config.inputs
    settings = config.numerics.orthopoly
    rule = quadrature_rule(config)
    check = gram_ladder(u, n, inputs.r_ladder, inputs.delta, settings, rule)
    result = {"ladder": check.to_dict()}
    summary = [("minimum", check.minimum), ("spread", check.spread)]
    if inputs.r is not None:
        result["gram_ratio"] = gram_ratio(u, inputs.r, n, settings, rule)
        summary.insert(0, (f"gram ratio at r={inputs.r:g}", result["gram_ratio"]))
    rows = _ladder_rows(check)
    return emit(args, config, _verdict(check), result, rows=rows, summary=summary, table=True)


def run_witness(args) -> int:
    config = load_run_config(args, "witness")
    u, n = require(config, "u", "n")
    inputs = config.inputs
    settings = config.numerics.orthopoly
    rule = quadrature_rule(config)
    check = witness_ladder(u, n, inputs.r_ladder, inputs.delta, settings, rule)
    result = {"ladder": check.to_dict()}
    summary = [("minimum epsilon", check.minimum), ("spread", check.spread)]
    if inputs.r is not None:
        witness = build_split_witness(u, inputs.r, n, settings, rule)
        result["witness"] = witness.to_dict()
        result["identity_residual"] = abs(
            witness.epsilon_achieved**2 + witness.c_achieved**2 - 1.0
        )
        summary.insert(0, (f"epsilon at r={inputs.r:g}", witness.epsilon_achieved))
    rows = _ladder_rows(check)
    return emit(args, config, _verdict(check), result, rows=rows, summary=summary, table=True)


def run_constrained_min(args) -> int:
    config = load_run_config(args, "lemma35")
    beta, a = require(config, "beta", "a")
    minimum = constrained_minimum(beta, a, config.inputs.gamma)
    summary = [("minimum", minimum.minimum), ("alpha1", minimum.alpha1)]
    if math.isfinite(minimum.alpha2):
        summary.append(("alpha2", minimum.alpha2))
    return emit(args, config, "computed", {"minimum": minimum.to_dict()}, summary=summary)
