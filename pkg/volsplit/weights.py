"""
Doubling weights.

A weight w belongs to the doubling class with parameter delta when, for every
interval of length at least delta inside (0, inf), the mass of the interval is at
most D times the mass of its concentric half. Membership cannot be proved by
sampling; the checks here report the largest ratio seen over a log-spaced interval
family and call a weight "violated" only when a chain of doubling intervals keeps
growing past a threshold, with the offending interval as witness.

Finite-mass weights such as (1+x)^-4 are never members: on [0, L] the full mass
stays bounded while the mass of [L/4, 3L/4] decays, so the ratio grows without
bound and the sampler reports a violation.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .config import DoublingSettings, QuadratureSettings
from .errors import DomainError
from .numerics.dsl import X, WeightExpr, as_weight
from .numerics.quadrature import QuadratureRule, as_rule, integrate_log_batch

logger = logging.getLogger(__name__)

MEMBER = "member"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive"


@dataclass
class IntervalSample:
    interval: tuple[float, float]
    ratio: float

    def to_dict(self) -> dict[str, Any]:
        return {"interval": list(self.interval), "ratio": self.ratio}


@dataclass
class DoublingReport:
    """Sampled doubling constant and the exponents derived from it.

    ``alpha`` and ``beta`` are the loose exponents ``log2(1 + 1/E^2)`` and
    ``log_{3/2} E`` with ``E = D^2``; ``empirical_alpha`` and ``empirical_beta``
    are ``log2`` of the smallest and largest sampled ratios.
    """

    weight: str
    delta: float
    family: str
    D: float
    samples: list[IntervalSample]
    verdict: str
    witness: IntervalSample | None = None
    growth_trail: list[IntervalSample] = field(default_factory=list)
    min_ratio: float = 2.0

    @property
    def E(self) -> float:
        return self.D**2

    @property
    def alpha(self) -> float:
        return math.log2(1.0 + 1.0 / self.E**2) if math.isfinite(self.E) else 0.0

    @property
    def beta(self) -> float:
        return math.log(self.E) / math.log(1.5) if math.isfinite(self.E) else math.inf

    @property
    def empirical_alpha(self) -> float:
        return math.log2(self.min_ratio)

    @property
    def empirical_beta(self) -> float:
        return math.log2(self.D) if math.isfinite(self.D) else math.inf

    @property
    def is_member(self) -> bool:
        return self.verdict == MEMBER

    def to_dict(self, include_samples: bool = True) -> dict[str, Any]:
        data = {
            "weight": self.weight,
            "delta": self.delta,
            "family": self.family,
            "D": self.D,
            "E": self.E,
            "alpha": self.alpha,
            "beta": self.beta,
            "empirical_alpha": self.empirical_alpha,
            "empirical_beta": self.empirical_beta,
            "verdict": self.verdict,
            "witness": self.witness.to_dict() if self.witness else None,
            "growth_trail": [s.to_dict() for s in self.growth_trail],
            "sample_count": len(self.samples),
        }
        if include_samples:
            data["samples"] = [s.to_dict() for s in self.samples]
        return data


def log_density(w: WeightExpr):
    """``log w`` as an array function, rejecting nonpositive values."""

    def log_w(x: np.ndarray) -> np.ndarray:
        la, sign = w.log_abs(x)
        if np.any(sign <= 0):
            bad = x[np.flatnonzero(sign <= 0)[0]]
            raise DomainError(f"Weight {w} is not positive at x={bad:.6g}")
        return la

    return log_w


# =============================================================================
# Interval families
# =============================================================================


def concentric_family(
    delta: float, settings: DoublingSettings
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Centres, lengths and chain ids of the sampled intervals.

    Intervals sharing a centre form one chain, ordered by doubling length.
    """
    per = settings.centers_per_octave
    k_lo = (settings.min_length_log2 - 1) * per
    k_hi = settings.max_center_log2 * per
    centers = np.exp2(np.arange(k_lo, k_hi + 1) / per)
    lengths = np.exp2(np.arange(settings.min_length_log2, settings.max_length_log2 + 1, dtype=float))

    cs, ls, chains = [], [], []
    for chain, c in enumerate(centers):
        keep = (lengths <= 2 * c * (1 + 1e-12)) & (lengths >= delta)
        ls.extend(np.minimum(lengths[keep], 2 * c).tolist())
        cs.extend([c] * int(keep.sum()))
        chains.extend([chain] * int(keep.sum()))
    return np.asarray(cs), np.asarray(ls), np.asarray(chains, dtype=int)


def _growth_witness(
    ratios: np.ndarray,
    chains: np.ndarray,
    intervals: list[tuple[float, float]],
    settings: DoublingSettings,
) -> tuple[int | None, list[int]]:
    """Index of the strongest growing-chain violation and its trail."""
    best, best_trail = None, []
    g = settings.growth_doublings
    for chain in np.unique(chains):
        idx = np.flatnonzero(chains == chain)
        seq = ratios[idx]
        for end in range(g, idx.size):
            window = seq[end - g : end + 1]
            if seq[end] > settings.divergence_threshold and np.all(np.diff(window) > 0):
                if best is None or ratios[idx[end]] > ratios[best]:
                    best = int(idx[end])
                    best_trail = idx[end - g : end + 1].tolist()
    return best, best_trail


def _verdict(D: float, witness: int | None, settings: DoublingSettings) -> str:
    if witness is not None:
        return VIOLATED
    if not math.isfinite(D) or D > settings.divergence_threshold:
        return INCONCLUSIVE
    return MEMBER


def _ratio(log_full: np.ndarray, log_half: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        diff = log_full - log_half
        diff = np.where(np.isnan(diff), np.inf, diff)
        return np.exp(np.minimum(diff, 745.0))


# =============================================================================
# Operations
# =============================================================================


def doubling_constant(
    w: "WeightExpr | str",
    delta: float = 0.0,
    settings: DoublingSettings | None = None,
    rule: "QuadratureRule | QuadratureSettings | None" = None,
) -> DoublingReport:
    """Largest ratio ``int_I w / int_{I/2} w`` over the concentric family with ``|I| >= delta``.

    Raises:
        DomainError: ``delta < 0`` or a nonpositive weight value.
        IntegrationError: quadrature failed on a sampled interval.
    """
    if delta < 0:
        raise DomainError(f"delta must be nonnegative, got {delta}")
    settings = settings or DoublingSettings()
    w = as_weight(w)
    rule = as_rule(rule)
    centers, lengths, chains = concentric_family(delta, settings)
    if centers.size == 0:
        raise DomainError(f"No sampled interval has length >= delta={delta}")

    lo = np.maximum(centers - lengths / 2, 0.0)
    hi = centers + lengths / 2
    lo_half = centers - lengths / 4
    hi_half = centers + lengths / 4
    log_masses = integrate_log_batch(
        log_density(w), np.concatenate([lo, lo_half]), np.concatenate([hi, hi_half]), rule
    )
    count = centers.size
    ratios = _ratio(log_masses[:count], log_masses[count:])
    intervals = list(zip(lo.tolist(), hi.tolist()))
    samples = [IntervalSample(iv, float(r)) for iv, r in zip(intervals, ratios)]

    witness, trail = _growth_witness(ratios, chains, intervals, settings)
    D = float(np.max(ratios))
    report = DoublingReport(
        weight=str(w),
        delta=delta,
        family="concentric",
        D=max(D, 1.0),
        samples=samples,
        verdict=_verdict(D, witness, settings),
        witness=samples[witness] if witness is not None else None,
        growth_trail=[samples[i] for i in trail],
        min_ratio=float(np.min(ratios)),
    )
    logger.info(
        f"Doubling scan of {w} (delta={delta}): D={report.D:.6g} over {count} intervals, "
        f"verdict {report.verdict}"
    )
    return report


def weak_doubling_check(
    w: "WeightExpr | str",
    delta: float = 0.0,
    settings: DoublingSettings | None = None,
    rule: "QuadratureRule | QuadratureSettings | None" = None,
) -> DoublingReport:
    """Origin-anchored doubling ``int_0^{2r} w <= D int_0^r w`` for sampled ``r >= delta``."""
    if delta < 0:
        raise DomainError(f"delta must be nonnegative, got {delta}")
    settings = settings or DoublingSettings()
    w = as_weight(w)
    rule = as_rule(rule)
    per = settings.weak_points_per_octave
    k = np.arange(settings.weak_r_min_log2 * per, (settings.weak_r_max_log2 + 1) * per + 1)
    grid = np.exp2(k / per)
    keep_r = grid[: grid.size - per]
    mask = keep_r >= delta
    if not mask.any():
        raise DomainError(f"No sampled radius satisfies r >= delta={delta}")

    # Cumulative masses int_0^{grid_i} from one head integral plus segments
    log_head = integrate_log_batch(log_density(w), np.array([0.0]), grid[:1], rule)[0]
    log_segments = integrate_log_batch(log_density(w), grid[:-1], grid[1:], rule)
    log_cum = np.logaddexp.accumulate(np.concatenate([[log_head], log_segments]))

    idx = np.flatnonzero(mask)
    ratios = _ratio(log_cum[idx + per], log_cum[idx])
    radii = keep_r[idx]
    intervals = [(0.0, float(2 * r)) for r in radii]
    samples = [IntervalSample(iv, float(q)) for iv, q in zip(intervals, ratios)]
    chains = np.arange(idx.size) % per

    witness, trail = _growth_witness(ratios, chains, intervals, settings)
    D = float(np.max(ratios))
    report = DoublingReport(
        weight=str(w),
        delta=delta,
        family="origin",
        D=max(D, 1.0),
        samples=samples,
        verdict=_verdict(D, witness, settings),
        witness=samples[witness] if witness is not None else None,
        growth_trail=[samples[i] for i in trail],
        min_ratio=float(np.min(ratios)),
    )
    logger.info(
        f"Weak doubling scan of {w} (delta={delta}): D={report.D:.6g}, verdict {report.verdict}"
    )
    return report


@dataclass
class RatioPairCheck:
    inner: tuple[float, float]
    outer: tuple[float, float]
    mass_ratio: float
    length_ratio: float
    lower_envelope: float
    upper_envelope: float

    @property
    def lower_slack(self) -> float:
        return self.mass_ratio - self.lower_envelope

    @property
    def upper_slack(self) -> float:
        return self.upper_envelope - self.mass_ratio

    @property
    def passed(self) -> bool:
        tol = 1e-12 * max(1.0, abs(self.mass_ratio))
        return self.lower_slack >= -tol and self.upper_slack >= -tol

    def to_dict(self) -> dict[str, Any]:
        return {
            "inner": list(self.inner),
            "outer": list(self.outer),
            "mass_ratio": self.mass_ratio,
            "length_ratio": self.length_ratio,
            "lower_envelope": self.lower_envelope,
            "upper_envelope": self.upper_envelope,
            "lower_slack": self.lower_slack,
            "upper_slack": self.upper_slack,
            "passed": self.passed,
        }


@dataclass
class RatioBoundsReport:
    alpha: float
    beta: float
    A: float
    B: float
    fitted: bool
    pairs: list[RatioPairCheck]

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.pairs)

    def to_dict(self) -> dict[str, Any]:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "A": self.A,
            "B": self.B,
            "fitted": self.fitted,
            "passed": self.passed,
            "pairs": [p.to_dict() for p in self.pairs],
        }


def ratio_bounds_check(
    w: "WeightExpr | str",
    report: DoublingReport,
    pairs: list[tuple[tuple[float, float], tuple[float, float]]],
    A: float | None = None,
    B: float | None = None,
    rule: "QuadratureRule | QuadratureSettings | None" = None,
) -> RatioBoundsReport:
    """Check ``A rho^alpha <= mass ratio <= B rho^beta`` on nested pairs, ``rho = |outer|/|inner|``.

    Constants not supplied are fitted over the pair set.

    Raises:
        DomainError: a pair is not nested or the inner interval is shorter than delta.
    """
    w = as_weight(w)
    if not pairs:
        raise DomainError("ratio_bounds_check needs at least one interval pair")
    inner_lo, inner_hi, outer_lo, outer_hi = [], [], [], []
    for inner, outer in pairs:
        (a1, b1), (a2, b2) = inner, outer
        if not (a2 <= a1 < b1 <= b2) or a2 < 0:
            raise DomainError(f"Interval {inner} is not nested in {outer} inside [0, inf)")
        if b1 - a1 < report.delta:
            raise DomainError(f"Inner interval {inner} is shorter than delta={report.delta}")
        inner_lo.append(a1)
        inner_hi.append(b1)
        outer_lo.append(a2)
        outer_hi.append(b2)
    count = len(pairs)
    log_masses = integrate_log_batch(
        log_density(w),
        np.array(inner_lo + outer_lo),
        np.array(inner_hi + outer_hi),
        rule,
    )
    mass_ratios = np.exp(log_masses[count:] - log_masses[:count])
    length_ratios = (np.array(outer_hi) - np.array(outer_lo)) / (
        np.array(inner_hi) - np.array(inner_lo)
    )
    alpha, beta = report.alpha, report.beta
    with np.errstate(all="ignore"):
        lower_power = length_ratios**alpha
        upper_power = np.where(length_ratios == 1.0, 1.0, length_ratios**beta)
    fitted = A is None or B is None
    if A is None:
        A = float(np.min(mass_ratios / lower_power))
    if B is None:
        B = float(np.max(mass_ratios / upper_power))
    checks = [
        RatioPairCheck(
            inner=tuple(pairs[i][0]),
            outer=tuple(pairs[i][1]),
            mass_ratio=float(mass_ratios[i]),
            length_ratio=float(length_ratios[i]),
            lower_envelope=float(A * lower_power[i]),
            upper_envelope=float(B * upper_power[i]),
        )
        for i in range(count)
    ]
    result = RatioBoundsReport(alpha, beta, A, B, fitted, checks)
    logger.info(f"Ratio bounds on {count} pairs: A={A:.4g}, B={B:.4g}, passed={result.passed}")
    return result


@dataclass
class ClosureReport:
    base: DoublingReport
    products: dict[float, DoublingReport]

    @property
    def passed(self) -> bool:
        if not self.base.is_member:
            return True
        return all(r.is_member for r in self.products.values())

    def to_dict(self) -> dict[str, Any]:
        return {
            "base": self.base.to_dict(include_samples=False),
            "products": {
                str(g): r.to_dict(include_samples=False) for g, r in self.products.items()
            },
            "applicable": self.base.is_member,
            "passed": self.passed,
        }


def closure_check(
    w: "WeightExpr | str",
    delta: float = 0.0,
    gammas: tuple[float, ...] = (1.0, 2.0),
    settings: DoublingSettings | None = None,
    rule: "QuadratureRule | QuadratureSettings | None" = None,
) -> ClosureReport:
    """Rerun the doubling scan on ``x^gamma w``; members must stay members."""
    w = as_weight(w)
    base = doubling_constant(w, delta, settings, rule)
    products = {
        float(g): doubling_constant(X ** float(g) * w, delta, settings, rule) for g in gammas
    }
    report = ClosureReport(base, products)
    logger.info(f"Closure check of {w}: passed={report.passed}")
    return report
