"""Shared numerical substrate: the weight language, quadrature and root finding."""

from .dsl import WeightExpr, X, as_weight, constant, parse_weight
from .quadrature import (
    QuadratureResult,
    QuadratureRule,
    gauss_legendre,
    integrate,
    integrate_log,
    integrate_log_batch,
    log_l2_norm,
    weighted_l2_norm,
)
from .roots import find_roots

__all__ = [
    "QuadratureResult",
    "QuadratureRule",
    "WeightExpr",
    "X",
    "as_weight",
    "constant",
    "find_roots",
    "gauss_legendre",
    "integrate",
    "integrate_log",
    "integrate_log_batch",
    "log_l2_norm",
    "parse_weight",
    "weighted_l2_norm",
]
