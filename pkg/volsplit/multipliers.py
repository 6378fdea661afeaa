"""
Pointwise multipliers between weighted Sobolev spaces on the half-line.

A multiplier problem asks whether ``phi f`` lies in the space with norm
``||f||_{L2(0,1)} + ||f^(m) v||_2`` for every f with finite
``||f||_{L2(0,1)} + ||f^(l) u||_2``. Two characterizations are checked:

* under ``(1 + x^(l-1)) / u`` in L2(0, inf): the norms ``||(phi x^k)^(m) v||_2``
  are finite for k < l, and for m = l also ``sup |phi v / u|``;
* under doubling of ``u^-2``: additionally the suprema pairing
  ``||(phi x^k)^(m) v||_{L2(r,inf)}`` with ``||x^(l-k-1) / u||_{L2(0,r)}``.

Both need ``1/v`` square-integrable near 0, which is spot-checked.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.polynomial import polynomial as P

from .config import DoublingSettings, QuadratureSettings, SupremumSettings
from .criteria import (
    CriterionEntry,
    GrowthEvidence,
    NormFactor,
    golden_max,
    growth_check,
    product_supremum,
    r_grid,
)
from .errors import CriterionError, DomainError
from .numerics.dsl import X, WeightExpr, as_weight
from .numerics.quadrature import QuadratureRule, as_rule, gauss_legendre, log_l2_norm
from .weights import DoublingReport, doubling_constant

logger = logging.getLogger(__name__)

MULTIPLIER = "multiplier"
NOT_MULTIPLIER = "not-multiplier"
NOT_APPLICABLE = "not-applicable"

_SPOT_CHECKS = (1.0, 10.0)


@dataclass(frozen=True)
class MultiplierProblem:
    """phi, the weights and the orders ``m <= l`` of the two Sobolev spaces."""

    phi: WeightExpr
    u: WeightExpr
    v: WeightExpr
    l: int  # noqa: E741
    m: int

    def __post_init__(self):
        if self.l < 1:
            raise DomainError(f"Order l must be at least 1, got {self.l}")
        if not 0 <= self.m <= self.l:
            raise DomainError(f"Need 0 <= m <= l, got m={self.m}, l={self.l}")

    @classmethod
    def from_sources(cls, phi, u, v, l: int, m: int) -> "MultiplierProblem":  # noqa: E741
        return cls(as_weight(phi), as_weight(u), as_weight(v), int(l), int(m))

    def products(self) -> list[WeightExpr]:
        """``phi x^k`` for k = 0..l-1."""
        return [self.phi * X ** float(k) for k in range(self.l)]

    def derivatives(self) -> list[list[WeightExpr]]:
        """``[(phi x^k)^(j) for j = 0..m]`` for every k < l."""
        out = []
        for product in self.products():
            chain = [product]
            for _ in range(self.m):
                chain.append(chain[-1].derivative())
            out.append(chain)
        return out

    def to_dict(self) -> dict[str, Any]:
        return {"phi": str(self.phi), "u": str(self.u), "v": str(self.v), "l": self.l, "m": self.m}


@dataclass
class SupRatio:
    """Sampled essential supremum of ``|phi v / u|`` on (0, inf)."""

    value: float
    argmax: float | None
    reason: str | None = None
    growth: list[GrowthEvidence] = field(default_factory=list)

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "finite": self.finite,
            "argmax": self.argmax,
            "reason": self.reason,
            "growth": [g.to_dict() for g in self.growth],
        }


def sup_ratio(
    phi: WeightExpr,
    u: WeightExpr,
    v: WeightExpr,
    settings: SupremumSettings | None = None,
) -> SupRatio:
    """Log-grid maximum of ``|phi v / u|`` with golden refinement and the infinity rule."""
    settings = settings or SupremumSettings()
    ratio = phi * v / u
    if phi.is_zero or v.is_zero:
        return SupRatio(0.0, None, "zero-multiplier")
    grid = r_grid(settings)

    def log_ratio(x) -> np.ndarray:
        la, sign = ratio.log_abs(x)
        return np.where(sign == 0, -np.inf, la)

    values = log_ratio(grid)
    if np.any(np.isnan(values)) or np.any(np.isposinf(values)):
        bad = grid[np.flatnonzero(~np.isfinite(values) & ~np.isneginf(values))[0]]
        return SupRatio(math.inf, float(bad), "unbounded-at-point")
    if np.all(np.isneginf(values)):
        return SupRatio(0.0, None, "zero-multiplier")

    growth = [growth_check(grid, values, settings, "top"), growth_check(grid, values, settings, "bottom")]
    for evidence in growth:
        if evidence.diverges:
            arg = float(grid[-1] if evidence.end == "top" else grid[0])
            reason = f"growth-at-{'infinity' if evidence.end == 'top' else 'zero'}"
            return SupRatio(math.inf, arg, reason, growth)

    best = int(np.argmax(values))
    best_log, best_x = float(values[best]), float(grid[best])
    if 0 < best < grid.size - 1:
        log_grid = np.log(grid)

        def objective(s: float) -> float:
            value = float(log_ratio(math.exp(s))[0])
            return value if math.isfinite(value) else -math.inf

        s, value = golden_max(
            objective, float(log_grid[best - 1]), float(log_grid[best + 1]), settings.golden_iterations
        )
        if value > best_log:
            best_log, best_x = value, math.exp(s)
    return SupRatio(math.exp(best_log), best_x, None, growth)


@dataclass
class MultiplierReport:
    """Conditions and verdicts for one multiplier problem."""

    problem: MultiplierProblem
    weighted_norms: list[float]
    product_suprema: list[CriterionEntry]
    sup_ratio: SupRatio | None
    integrable_weight: bool
    v_inverse_local: bool
    doubling: DoublingReport | None
    notes: list[str] = field(default_factory=list)

    @property
    def norms_finite(self) -> bool:
        return all(math.isfinite(n) for n in self.weighted_norms)

    @property
    def suprema_finite(self) -> bool:
        return all(e.finite for e in self.product_suprema)

    @property
    def ratio_finite(self) -> bool:
        return self.sup_ratio is None or self.sup_ratio.finite

    @property
    def integrable_weight_verdict(self) -> str:
        """Verdict of the characterization assuming ``(1 + x^(l-1)) / u`` in L2."""
        if not (self.integrable_weight and self.v_inverse_local):
            return NOT_APPLICABLE
        return MULTIPLIER if self.norms_finite and self.ratio_finite else NOT_MULTIPLIER

    @property
    def doubling_weight_verdict(self) -> str:
        """Verdict of the characterization assuming doubling of ``u^-2``."""
        if self.doubling is None or not self.doubling.is_member or not self.v_inverse_local:
            return NOT_APPLICABLE
        ok = self.norms_finite and self.suprema_finite and self.ratio_finite
        return MULTIPLIER if ok else NOT_MULTIPLIER

    @property
    def verdict(self) -> str:
        for verdict in (self.doubling_weight_verdict, self.integrable_weight_verdict):
            if verdict != NOT_APPLICABLE:
                return verdict
        return NOT_APPLICABLE

    @property
    def reduction_consistent(self) -> bool | None:
        """Finite norms and ratio imply finite suprema when ``(1 + x^(l-1)) / u`` is in L2."""
        if not self.integrable_weight or not (self.norms_finite and self.ratio_finite):
            return None
        return self.suprema_finite

    def to_dict(self) -> dict[str, Any]:
        return {
            "problem": self.problem.to_dict(),
            "weighted_norms": self.weighted_norms,
            "product_suprema": [e.to_dict(include_curve=False) for e in self.product_suprema],
            "sup_ratio": self.sup_ratio.to_dict() if self.sup_ratio else None,
            "hypotheses": {
                "integrable_weight": self.integrable_weight,
                "v_inverse_local": self.v_inverse_local,
                "doubling": self.doubling.to_dict(include_samples=False) if self.doubling else None,
            },
            "integrable_weight_verdict": self.integrable_weight_verdict,
            "doubling_weight_verdict": self.doubling_weight_verdict,
            "verdict": self.verdict,
            "reduction_consistent": self.reduction_consistent,
            "notes": self.notes,
        }


def _norm(w: WeightExpr, interval: tuple[float, float], rule: QuadratureRule) -> float:
    if w.is_zero:
        return 0.0
    value = log_l2_norm(w, interval, rule)
    return math.exp(value) if value < 700 else math.inf


def _supremum_entry(
    tail: WeightExpr,
    head: WeightExpr,
    k: int,
    settings: SupremumSettings,
    rule: QuadratureRule,
) -> CriterionEntry:
    label = f"k={k}"
    try:
        return product_supremum(NormFactor(tail), NormFactor(head), k, label, settings, rule)
    except CriterionError:
        empty = np.empty(0)
        return CriterionEntry(k, label, math.inf, None, "both-divergent", empty, empty, empty)


def check_multiplier(
    problem: MultiplierProblem,
    delta: float = 0.0,
    doubling: DoublingReport | None = None,
    stamp: bool = True,
    settings: SupremumSettings | None = None,
    doubling_settings: DoublingSettings | None = None,
    rule: "QuadratureRule | QuadratureSettings | None" = None,
) -> MultiplierReport:
    """Evaluate every multiplier condition and both characterizations.

    The doubling stamp of ``u^-2`` is computed with the given ``delta`` unless a
    report is supplied; with ``stamp=False`` and no report the doubling verdict is
    not applicable.
    """
    settings = settings or SupremumSettings()
    rule = as_rule(rule)
    u, v, l, m = problem.u, problem.v, problem.l, problem.m
    top = [chain[m] for chain in problem.derivatives()]

    norms = [_norm(d * v, (0.0, math.inf), rule) for d in top]
    inv_u = 1.0 / u
    suprema = [
        _supremum_entry(d * v, X ** float(l - k - 1) * inv_u, k, settings, rule)
        for k, d in enumerate(top)
    ]
    ratio = sup_ratio(problem.phi, u, v, settings) if m == l else None

    integrable = math.isfinite(log_l2_norm((1.0 + X ** float(l - 1)) * inv_u, (0.0, math.inf), rule))
    v_local = all(math.isfinite(log_l2_norm(1.0 / v, (0.0, r), rule)) for r in _SPOT_CHECKS)
    if stamp or doubling is not None:
        doubling = doubling or doubling_constant(u**-2.0, delta, doubling_settings, rule)

    report = MultiplierReport(
        problem=problem,
        weighted_norms=norms,
        product_suprema=suprema,
        sup_ratio=ratio,
        integrable_weight=integrable,
        v_inverse_local=v_local,
        doubling=doubling,
    )
    if not v_local:
        report.notes.append("1/v is not square-integrable near 0; neither characterization applies")
    if doubling is not None and not doubling.is_member:
        report.notes.append(f"u^-2 doubling verdict is {doubling.verdict!r}")
    if report.reduction_consistent is False:
        report.notes.append("finite norms and ratio did not give finite suprema")
        logger.warning(f"Multiplier suprema infinite although norms are finite for {problem.to_dict()}")
    logger.info(
        f"Multiplier check phi={problem.phi}: integrable-weight {report.integrable_weight_verdict}, "
        f"doubling-weight {report.doubling_weight_verdict}"
    )
    return report


# =============================================================================
# Leibniz representation and Sobolev norm
# =============================================================================


def _composite_integral(coeffs: np.ndarray, x: np.ndarray, order: int, panels: int) -> np.ndarray:
    """``int_0^x p(t) dt`` for each x by composite Gauss-Legendre with equal panels."""
    t, w = gauss_legendre(order)
    out = np.zeros_like(x)
    for i in range(panels):
        a = x * i / panels
        b = x * (i + 1) / panels
        half = 0.5 * (b - a)
        nodes = (0.5 * (a + b))[:, None] + half[:, None] * t[None, :]
        out += half * (P.polyval(nodes, coeffs) @ w)
    return out


def verify_leibniz_representation(
    phi,
    g,
    l: int,  # noqa: E741
    m: int,
    grid: np.ndarray | None = None,
    order: int = 8,
    panels: int = 4,
) -> float:
    """Largest deviation between ``(phi g)^(m)`` and its integral representation.

    For g vanishing to order l at 0 the derivative equals
    ``sum_k C(l-1, k) (phi x^k)^(m) int_0^x (-t)^(l-k-1) g^(l)(t) dt / (l-1)!``,
    plus ``phi g^(l)`` when m = l. Polynomials are given by coefficients in
    increasing degree order; integrals use composite Gauss-Legendre.

    Raises:
        DomainError: g has nonzero coefficients below degree l, or m > l.
    """
    if l < 1 or not 0 <= m <= l:
        raise DomainError(f"Need l >= 1 and 0 <= m <= l, got l={l}, m={m}")
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    g = np.atleast_1d(np.asarray(g, dtype=float))
    if np.any(g[:l] != 0):
        raise DomainError(f"g must vanish to order {l} at 0 (coefficients below degree {l} nonzero)")
    x = np.linspace(0.0, 10.0, 101)[1:] if grid is None else np.asarray(grid, dtype=float)

    lhs = P.polyval(x, P.polyder(P.polymul(phi, g), m))
    gl = P.polyder(g, l)
    rhs = np.zeros_like(x)
    for k in range(l):
        weight = math.comb(l - 1, k) / math.factorial(l - 1)
        power = np.zeros(l - k)
        power[-1] = (-1.0) ** (l - k - 1)
        integral = _composite_integral(P.polymul(power, gl), x, order, panels)
        shifted = np.concatenate([np.zeros(k), phi])
        rhs += weight * P.polyval(x, P.polyder(shifted, m)) * integral
    if m == l:
        rhs += P.polyval(x, phi) * P.polyval(x, gl)
    residual = float(np.max(np.abs(lhs - rhs)))
    logger.debug(f"Leibniz representation l={l}, m={m}: residual {residual:.3e}")
    return residual


def sobolev_norm(
    f: "WeightExpr | str",
    u: "WeightExpr | str",
    l: int,  # noqa: E741
    rule: "QuadratureRule | QuadratureSettings | None" = None,
) -> float:
    """``||f||_{L2(0,1)} + ||f^(l) u||_{L2(0,inf)}`` (inf when the second term diverges)."""
    rule = as_rule(rule)
    f, u = as_weight(f), as_weight(u)
    return _norm(f, (0.0, 1.0), rule) + _norm(f.derivative(l) * u, (0.0, math.inf), rule)
