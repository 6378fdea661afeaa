"""
Orthogonal polynomials on [0, r] and the constructions built from them.

Every system is computed in the scaled variable ``s = t / r`` with the weight
normalised to unit mass, so moments stay in [0, 1] whatever the size of r or of
the weight. The moment (Hankel) system fixing ``P(0) = 1`` is solved in mpmath
after row and column equilibration; its condition number is reported with the
system.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

import mpmath
import numpy as np
from numpy.polynomial import chebyshev as C
from numpy.polynomial import polynomial as P
from scipy.optimize import brentq

from .config import OrthopolySettings, QuadratureSettings, RootSettings
from .errors import ConvergenceError, DomainError, SingularMomentError
from .numerics.dsl import X, WeightExpr, as_weight
from .numerics.quadrature import QuadratureRule, as_rule, integrate, integrate_log
from .numerics.roots import find_roots
from .weights import log_density

logger = logging.getLogger(__name__)

_MAX_CONDITION = 1e16
_RESIDUAL_TOL = 1e-8


def _log_integral(log_f, a: float, b: float, rule: QuadratureRule) -> float:
    if not b > a:
        return -math.inf
    return float(integrate_log(log_f, (a, b), rule).log_value)


def _independent_rule(rule: QuadratureRule) -> QuadratureRule:
    order = rule.order + 4 if rule.order <= 60 else rule.order - 4
    return QuadratureRule(rule.settings.model_copy(update={"order": order}))


# =============================================================================
# Orthogonal polynomial systems
# =============================================================================


@dataclass
class OrthoPolySystem:
    """Degree-n orthogonal polynomial on [0, r] normalised by ``P(0) = 1``.

    ``scaled_coefficients`` hold p(s) = P(r s) in increasing degree order;
    ``scaled_moments`` are the moments of the unit-mass weight in s.
    """

    weight: str
    r: float
    n: int
    scaled_moments: np.ndarray
    log_mass: float
    scaled_coefficients: np.ndarray
    roots: np.ndarray
    condition: float
    residuals: np.ndarray

    @property
    def coefficients(self) -> np.ndarray:
        """Coefficients of P in t."""
        return self.scaled_coefficients / self.r ** np.arange(self.n + 1)

    @property
    def q_coefficients(self) -> np.ndarray:
        """Coefficients of ``Q = 1 - P`` in t (no constant term)."""
        q = -self.coefficients
        q[0] = 0.0
        return q

    @property
    def moments(self) -> np.ndarray:
        """``int_0^r t^j weight dt`` for j = 0..2n (inf where they overflow)."""
        j = np.arange(self.scaled_moments.size)
        with np.errstate(over="ignore", divide="ignore"):
            log_m = self.log_mass + j * math.log(self.r) + np.log(self.scaled_moments)
        return np.exp(log_m)

    @property
    def gaps(self) -> np.ndarray:
        """Lengths of the n + 1 intervals cut from [0, r] by the roots."""
        return np.diff(np.concatenate([[0.0], self.roots, [self.r]]))

    @property
    def min_gap_ratio(self) -> float:
        return float(np.min(self.gaps) / self.r)

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals)) if self.residuals.size else 0.0

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        return P.polyval(np.asarray(t, dtype=float) / self.r, self.scaled_coefficients)

    def evaluate_q(self, t: np.ndarray) -> np.ndarray:
        return 1.0 - self.evaluate(t)

    def critical_points(self, settings: RootSettings | None = None) -> np.ndarray:
        """The n - 1 roots of P' in (0, r)."""
        if self.n == 1:
            return np.empty(0)
        z = find_roots(P.polyder(self.scaled_coefficients), (0.0, 1.0), settings)
        if len(z) != self.n - 1:
            raise ConvergenceError(
                f"Expected {self.n - 1} critical points of P on (0, r), found {len(z)}"
            )
        return np.asarray(z) * self.r

    def to_dict(self) -> dict[str, Any]:
        return {
            "weight": self.weight,
            "r": self.r,
            "n": self.n,
            "coefficients": self.coefficients.tolist(),
            "scaled_coefficients": self.scaled_coefficients.tolist(),
            "roots": self.roots.tolist(),
            "gaps": self.gaps.tolist(),
            "gap_ratios": (self.gaps / self.r).tolist(),
            "moments": self.moments.tolist(),
            "condition": self.condition,
            "residuals": self.residuals.tolist(),
        }


def _scaled_log_weight(weight: WeightExpr, r: float):
    log_w = log_density(weight)

    def log_rho(s: np.ndarray) -> np.ndarray:
        return log_w(r * s)

    return log_rho


def scaled_moments(
    weight: WeightExpr, r: float, count: int, rule: QuadratureRule
) -> tuple[np.ndarray, float]:
    """Moments ``int_0^1 s^j w(r s) ds / mass`` for j < count, and ``log`` of the t-mass.

    Raises:
        DivergentIntegralError: a moment diverges at 0.
    """
    log_rho = _scaled_log_weight(weight, r)
    log_m = np.empty(count)
    for j in range(count):
        def integrand(s: np.ndarray, j: int = j) -> np.ndarray:
            return j * np.log(s) + log_rho(s)

        log_m[j] = integrate_log(integrand, (0.0, 1.0), rule).log_value
    nu = np.exp(log_m - log_m[0])
    return nu, float(log_m[0] + math.log(r))


def _solve_hankel(nu: np.ndarray, n: int, digits: int) -> tuple[np.ndarray, float]:
    """Solve ``sum_i c_i nu_{k+i} = -nu_k`` (k < n, i = 1..n) with one refinement step."""
    with mpmath.workdps(digits):
        H = mpmath.matrix(n, n)
        b = mpmath.matrix(n, 1)
        for k in range(n):
            b[k] = -mpmath.mpf(float(nu[k]))
            for i in range(n):
                H[k, i] = mpmath.mpf(float(nu[k + i + 1]))
        row = [1 / max(abs(H[k, i]) for i in range(n)) for k in range(n)]
        for k in range(n):
            for i in range(n):
                H[k, i] *= row[k]
            b[k] *= row[k]
        col = [1 / max(abs(H[k, i]) for k in range(n)) for i in range(n)]
        for i in range(n):
            for k in range(n):
                H[k, i] *= col[i]
        try:
            inverse = mpmath.inverse(H)
            y = mpmath.lu_solve(H, b)
            y += mpmath.lu_solve(H, b - H * y)
        except ZeroDivisionError as e:
            raise SingularMomentError("Moment matrix is singular", math.inf) from e
        condition = float(mpmath.mnorm(H, 1) * mpmath.mnorm(inverse, 1))
        coeffs = np.array([float(y[i] * col[i]) for i in range(n)])
    return coeffs, condition


def build_system(
    weight: "WeightExpr | str",
    r: float,
    n: int,
    settings: OrthopolySettings | None = None,
    rule: "QuadratureRule | QuadratureSettings | None" = None,
    root_settings: RootSettings | None = None,
) -> OrthoPolySystem:
    """Orthogonal polynomial of degree n for ``weight`` on [0, r], with ``P(0) = 1``.

    Raises:
        DomainError: bad degree or interval, or a nonpositive weight.
        DivergentIntegralError: a moment is infinite.
        SingularMomentError: the moment matrix is numerically singular.
        ConvergenceError: fewer than n roots were located in (0, r).
    """
    settings = settings or OrthopolySettings()
    rule = as_rule(rule)
    weight = as_weight(weight)
    if not 1 <= n <= settings.max_degree:
        raise DomainError(f"Degree must lie in 1..{settings.max_degree}, got n={n}")
    if not r > 0:
        raise DomainError(f"Right endpoint must be positive, got r={r}")

    nu, log_mass = scaled_moments(weight, r, 2 * n + 1, rule)
    tail, condition = _solve_hankel(nu, n, settings.precision_digits)
    if not condition < _MAX_CONDITION:
        raise SingularMomentError(f"Moment matrix for n={n}, r={r:g} is numerically singular", condition)
    scaled = np.concatenate([[1.0], tail])

    roots = find_roots(scaled, (0.0, 1.0), root_settings)
    if len(roots) != n:
        raise ConvergenceError(f"Expected {n} roots of P in (0, r), found {len(roots)}")

    residuals = _orthogonality_residuals(weight, r, scaled, nu, log_mass, _independent_rule(rule))
    system = OrthoPolySystem(
        weight=str(weight),
        r=float(r),
        n=n,
        scaled_moments=nu,
        log_mass=log_mass,
        scaled_coefficients=scaled,
        roots=np.asarray(roots) * r,
        condition=condition,
        residuals=residuals,
    )
    if system.max_residual > _RESIDUAL_TOL:
        logger.warning(
            f"Orthogonality residual {system.max_residual:.3e} above {_RESIDUAL_TOL:g} "
            f"for n={n}, r={r:g} (condition {condition:.3e})"
        )
    logger.debug(f"System n={n}, r={r:g}: roots {system.roots}, condition {condition:.3e}")
    return system


def _orthogonality_residuals(
    weight: WeightExpr,
    r: float,
    scaled: np.ndarray,
    nu: np.ndarray,
    log_mass: float,
    rule: QuadratureRule,
) -> np.ndarray:
    """``|int s^k p rho| / (sum_i |c_i| nu_{k+i})`` for k < n from a fresh quadrature."""
    log_rho = _scaled_log_weight(weight, r)
    shift = log_mass - math.log(r)
    n = scaled.size - 1
    out = np.empty(n)
    for k in range(n):
        def integrand(s: np.ndarray, k: int = k) -> np.ndarray:
            return s**k * P.polyval(s, scaled) * np.exp(log_rho(s) - shift)

        value = integrate(integrand, (0.0, 1.0), rule).value
        scale = float(np.sum(np.abs(scaled) * nu[k : k + n + 1]))
        out[k] = abs(value) / scale
    return out


# =============================================================================
# Ladder checks
# =============================================================================


@dataclass
class LadderCheck:
    """A positive quantity along an r-ladder, passing while it stays above a floor."""

    label: str
    ladder: list[float]
    values: list[float]
    fraction: float
    details: list[dict[str, Any]] = field(default_factory=list)

    @property
    def reference(self) -> float:
        return self.values[0]

    @property
    def minimum(self) -> float:
        return min(self.values)

    @property
    def spread(self) -> float:
        """``(max - min) / max`` across the ladder."""
        top = max(self.values)
        return (top - self.minimum) / top if top > 0 else 0.0

    @property
    def passed(self) -> bool:
        return self.minimum > 0 and self.minimum >= self.fraction * self.reference

    def to_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "ladder": self.ladder,
            "values": self.values,
            "reference": self.reference,
            "minimum": self.minimum,
            "spread": self.spread,
            "fraction": self.fraction,
            "passed": self.passed,
            "details": self.details,
        }


def default_ladder(n: int, delta: float = 0.0, settings: OrthopolySettings | None = None) -> list[float]:
    """Powers of two from ``max(2^ladder_min, 4 (n + 1) delta)`` to ``2^ladder_max``."""
    settings = settings or OrthopolySettings()
    start = max(2.0**settings.ladder_min_log2, 4 * (n + 1) * delta)
    top = 2.0**settings.ladder_max_log2
    k0 = math.ceil(math.log2(start) - 1e-12)
    ladder = [2.0**k for k in range(k0, math.floor(math.log2(top)) + 1)]
    return ladder or [start]


def root_spacing_check(
    weight: "WeightExpr | str",
    n: int,
    r_ladder: list[float] | None = None,
    delta: float = 0.0,
    settings: OrthopolySettings | None = None,
    rule: "QuadratureRule | QuadratureSettings | None" = None,
) -> LadderCheck:
    """Smallest root gap over r along the ladder, ``min_j |gap_j| / r``.

    Passes while the measured value stays above ``spacing_fraction`` of its value
    at the smallest rung.
    """
    settings = settings or OrthopolySettings()
    rule = as_rule(rule)
    weight = as_weight(weight)
    ladder = sorted(r_ladder) if r_ladder else default_ladder(n, delta, settings)
    values, details = [], []
    for r in ladder:
        system = build_system(weight, r, n, settings, rule)
        values.append(system.min_gap_ratio)
        details.append({"r": r, "gap_ratios": (system.gaps / r).tolist(), "roots": system.roots.tolist()})
    check = LadderCheck("root spacing", [float(r) for r in ladder], values, settings.spacing_fraction, details)
    logger.info(
        f"Root spacing for {weight}, n={n}: epsilon={check.minimum:.6g}, "
        f"spread {check.spread:.3%}, {'pass' if check.passed else 'fail'}"
    )
    return check


# =============================================================================
# Mass sets
# =============================================================================


@dataclass
class MassSet:
    """Union of sub-level sets of |Q| carrying a fixed mass fraction of w on [0, r]."""

    r: float
    n: int
    beta: float
    intervals: list[tuple[float, float]]
    beta_achieved: float
    gamma_pieces: list[float]
    betas_tried: list[float] = field(default_factory=list)

    @property
    def gamma_achieved(self) -> float:
        return min(self.gamma_pieces)

    @property
    def threshold(self) -> float:
        return 1.0 / self.beta - 1.0

    @property
    def condition_met(self) -> bool:
        return self.gamma_achieved > self.threshold

    def to_dict(self) -> dict[str, Any]:
        return {
            "r": self.r,
            "n": self.n,
            "beta": self.beta,
            "intervals": [list(iv) for iv in self.intervals],
            "beta_achieved": self.beta_achieved,
            "gamma_achieved": self.gamma_achieved,
            "gamma_pieces": self.gamma_pieces,
            "threshold": self.threshold,
            "condition_met": self.condition_met,
            "betas_tried": self.betas_tried,
        }


def _monotone_inverse(q, a: float, b: float, c: float) -> float:
    """Point of [a, b] where the monotone q reaches c, clipped to the ends."""
    qa, qb = q(a), q(b)
    if qb >= qa:
        if c <= qa:
            return a
        if c >= qb:
            return b
    else:
        if c >= qa:
            return a
        if c <= qb:
            return b
    return brentq(lambda s: q(s) - c, a, b, xtol=1e-15 * max(1.0, abs(b)), rtol=1e-15)


def _level_interval(q, a: float, b: float, level: float) -> tuple[float, float]:
    """``{t in [a, b]: |q(t)| <= level}`` for q monotone on [a, b]."""
    lo = _monotone_inverse(q, a, b, -level)
    hi = _monotone_inverse(q, a, b, level)
    return (lo, hi) if lo <= hi else (hi, lo)


def _piece(
    q,
    log_w,
    log_q2w,
    a: float,
    b: float,
    beta: float,
    rule: QuadratureRule,
) -> tuple[tuple[float, float], float, float]:
    """Sub-level interval of |q| in [a, b] holding mass fraction beta, its fraction and gamma."""
    if not b - a > 1e-14 * max(1.0, b):
        raise ConvergenceError(f"Degenerate interval [{a:.6g}, {b:.6g}] between critical points")
    qa, qb = q(a), q(b)
    floor = 0.0 if qa * qb <= 0 else min(abs(qa), abs(qb))
    span = max(abs(qa), abs(qb)) - floor
    log_total = _log_integral(log_w, a, b, rule)

    def fraction(alpha: float) -> float:
        lo, hi = _level_interval(q, a, b, floor + alpha)
        return math.exp(_log_integral(log_w, lo, hi, rule) - log_total)

    if beta >= 1.0:
        alpha = span
    else:
        try:
            alpha = brentq(lambda x: fraction(x) - beta, 0.0, span, xtol=1e-15 * span, rtol=1e-14)
        except ValueError as e:
            raise ConvergenceError(f"Level bisection failed on [{a:.6g}, {b:.6g}]: {e}") from e
    lo, hi = _level_interval(q, a, b, floor + alpha)
    inside = _log_integral(log_q2w, lo, hi, rule)
    outside = np.logaddexp(_log_integral(log_q2w, a, lo, rule), _log_integral(log_q2w, hi, b, rule))
    gamma = math.exp(outside - inside) if math.isfinite(inside) else math.inf
    return (lo, hi), fraction(alpha), gamma


def _mass_set_for(
    system: OrthoPolySystem, w: WeightExpr, beta: float, rule: QuadratureRule
) -> MassSet:
    log_w = log_density(w)
    q_coeffs = system.q_coefficients

    def q(t: float) -> float:
        return float(P.polyval(t, q_coeffs))

    def log_q2w(t: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 2.0 * np.log(np.abs(P.polyval(t, q_coeffs))) + log_w(t)

    z = np.concatenate([[0.0], system.critical_points(), [system.r]])
    intervals, gammas, log_masses = [], [], []
    for a, b in zip(z[:-1], z[1:]):
        interval, _, gamma = _piece(q, log_w, log_q2w, float(a), float(b), beta, rule)
        intervals.append(interval)
        gammas.append(gamma)
        log_masses.append(_log_integral(log_w, *interval, rule))
    log_total = _log_integral(log_w, 0.0, system.r, rule)
    achieved = math.exp(float(np.logaddexp.reduce(log_masses)) - log_total)
    return MassSet(system.r, system.n, beta, intervals, achieved, gammas)


def build_mass_set(
    system: OrthoPolySystem,
    w: "WeightExpr | str",
    beta: float | None = None,
    settings: OrthopolySettings | None = None,
    rule: "QuadratureRule | QuadratureSettings | None" = None,
) -> MassSet:
    """Set ``A_r`` with ``int_{A_r} w = beta int_0^r w`` and the achieved gamma.

    The critical points of P split [0, r] into n intervals on which Q is monotone;
    on each the sub-level set of |Q| carrying mass fraction beta is located by
    root finding in the level. gamma is the smallest ratio of ``Q^2 w`` mass
    outside the set to inside it over the pieces. Without an explicit beta the
    fraction starts at ``beta_start`` and is halved until ``gamma > 1/beta - 1``.

    Raises:
        DomainError: beta outside (0, 1].
        ConvergenceError: a piece is degenerate or the level search fails.
    """
    settings = settings or OrthopolySettings()
    rule = as_rule(rule)
    w = as_weight(w)
    if beta is not None:
        if not 0 < beta <= 1:
            raise DomainError(f"Mass fraction must lie in (0, 1], got beta={beta}")
        result = _mass_set_for(system, w, beta, rule)
        result.betas_tried = [beta]
        return result

    tried = []
    beta = settings.beta_start
    for _ in range(settings.beta_halvings):
        tried.append(beta)
        result = _mass_set_for(system, w, beta, rule)
        if result.condition_met:
            break
        beta /= 2
    else:
        logger.warning(
            f"No mass fraction down to beta={tried[-1]:.3e} gave gamma > 1/beta - 1 at r={system.r:g}"
        )
    result.betas_tried = tried
    logger.info(
        f"Mass set at r={system.r:g}: beta={result.beta:g}, gamma={result.gamma_achieved:.6g} "
        f"(threshold {result.threshold:.6g})"
    )
    return result


@dataclass
class WeakSplit:
    """Single split point carrying mass fraction beta of w on [0, r]."""

    r: float
    beta: float
    split_point: float
    gamma: float

    @property
    def threshold(self) -> float:
        return 1.0 / self.beta - 1.0

    @property
    def condition_met(self) -> bool:
        return self.gamma > self.threshold

    def to_dict(self) -> dict[str, Any]:
        return {
            "r": self.r,
            "beta": self.beta,
            "split_point": self.split_point,
            "gamma": self.gamma,
            "threshold": self.threshold,
            "condition_met": self.condition_met,
        }


def weak_split_check(
    w: "WeightExpr | str",
    r: float,
    beta: float,
    rule: "QuadratureRule | QuadratureSettings | None" = None,
) -> WeakSplit:
    """Split ``r*`` with ``int_0^{r*} w = beta int_0^r w`` and ``gamma = int_{r*}^r t^2 w / int_0^{r*} t^2 w``."""
    rule = as_rule(rule)
    w = as_weight(w)
    if not 0 < beta < 1:
        raise DomainError(f"Mass fraction must lie in (0, 1), got beta={beta}")
    log_w = log_density(w)
    target = _log_integral(log_w, 0.0, r, rule) + math.log(beta)

    def excess(t: float) -> float:
        return _log_integral(log_w, 0.0, t, rule) - target

    lo = r * 2.0**-60
    if excess(lo) >= 0:
        raise ConvergenceError(f"Mass of w on [0, {r:g}] is concentrated below {lo:.3e}")
    split = brentq(excess, lo, r, xtol=1e-14 * r, rtol=1e-14)

    def log_t2w(t: np.ndarray) -> np.ndarray:
        return 2.0 * np.log(t) + log_w(t)

    gamma = math.exp(_log_integral(log_t2w, split, r, rule) - _log_integral(log_t2w, 0.0, split, rule))
    return WeakSplit(float(r), beta, float(split), gamma)


def weak_split_ladder(
    w: "WeightExpr | str",
    r_ladder: list[float],
    beta: float | None = None,
    settings: OrthopolySettings | None = None,
    rule: "QuadratureRule | QuadratureSettings | None" = None,
) -> list[WeakSplit]:
    """Weak splits along the ladder, halving beta from ``beta_start`` until every rung passes."""
    settings = settings or OrthopolySettings()
    if beta is not None:
        return [weak_split_check(w, r, beta, rule) for r in r_ladder]
    beta = settings.beta_start
    for _ in range(settings.beta_halvings):
        splits = [weak_split_check(w, r, beta, rule) for r in r_ladder]
        if all(s.condition_met for s in splits):
            break
        beta /= 2
    else:
        logger.warning(f"Weak split condition still fails at beta={beta * 2:.3e}")
    return splits


# =============================================================================
# Split witness and Gram ratio
# =============================================================================


@dataclass
class SplitWitness:
    """``f_r = P u^-2`` on [0, r] with vanishing moments of orders 1..n."""

    u: WeightExpr
    r: float
    n: int
    system: OrthoPolySystem
    epsilon_achieved: float
    c_achieved: float
    moment_residuals: np.ndarray

    def g_values(self, t: np.ndarray) -> np.ndarray:
        """``g_r = P u^-1``."""
        return self.system.evaluate(t) / np.asarray(self.u(t))

    def f_values(self, t: np.ndarray) -> np.ndarray:
        """``f_r = u^-1 g_r = P u^-2``."""
        return self.g_values(t) / np.asarray(self.u(t))

    def to_dict(self) -> dict[str, Any]:
        return {
            "u": str(self.u),
            "r": self.r,
            "n": self.n,
            "epsilon_achieved": self.epsilon_achieved,
            "c_achieved": self.c_achieved,
            "moment_residuals": self.moment_residuals.tolist(),
            "coefficients": self.system.coefficients.tolist(),
            "roots": self.system.roots.tolist(),
        }


def build_split_witness(
    u: "WeightExpr | str",
    r: float,
    n: int,
    settings: OrthopolySettings | None = None,
    rule: "QuadratureRule | QuadratureSettings | None" = None,
) -> SplitWitness:
    """Test function from the degree-n orthogonal polynomial for the weight ``t u^-2``.

    ``epsilon_achieved = int f_r / (||f_r u|| ||1/u||)`` on (0, r), and
    ``c_achieved`` is the cosine between ``1/u`` and its projection onto
    ``span{t^k / u: k = 1..n}``; the two satisfy ``eps^2 + c^2 = 1``.
    """
    rule = as_rule(rule)
    u = as_weight(u)
    system = build_system(X * u**-2.0, r, n, settings, rule)
    coeffs = system.scaled_coefficients

    log_rho = _scaled_log_weight(u**-2.0, r)
    log_mass = integrate_log(log_rho, (0.0, 1.0), rule).log_value

    def rho(s: np.ndarray) -> np.ndarray:
        return np.exp(log_rho(s) - log_mass)

    fine = _independent_rule(rule)
    mean = integrate(lambda s: P.polyval(s, coeffs) * rho(s), (0.0, 1.0), fine).value
    square = integrate(lambda s: P.polyval(s, coeffs) ** 2 * rho(s), (0.0, 1.0), fine).value
    proj = integrate(lambda s: (1.0 - P.polyval(s, coeffs)) ** 2 * rho(s), (0.0, 1.0), fine).value
    epsilon = mean / math.sqrt(square)
    residuals = np.empty(n)
    for k in range(1, n + 1):
        def moment(s: np.ndarray, k: int = k) -> np.ndarray:
            return s**k * P.polyval(s, coeffs) * rho(s)

        def scale(s: np.ndarray, k: int = k) -> np.ndarray:
            return s**k * np.abs(P.polyval(s, coeffs)) * rho(s)

        residuals[k - 1] = abs(integrate(moment, (0.0, 1.0), fine).value) / integrate(
            scale, (0.0, 1.0), fine
        ).value
    if not epsilon > 0:
        raise ConvergenceError(f"Split witness at r={r:g} has nonpositive epsilon {epsilon:.3e}")
    witness = SplitWitness(u, float(r), n, system, epsilon, math.sqrt(max(proj, 0.0)), residuals)
    logger.debug(f"Split witness r={r:g}, n={n}: epsilon={epsilon:.10g}")
    return witness


def gram_ratio(
    u: "WeightExpr | str",
    r: float,
    n: int,
    settings: OrthopolySettings | None = None,
    rule: "QuadratureRule | QuadratureSettings | None" = None,
) -> float:
    """``sqrt(det G) / prod_k ||x^k / u||`` for the Gram matrix G of ``x^k / u`` on (0, r), k = 0..n."""
    settings = settings or OrthopolySettings()
    if not 1 <= n <= settings.gram_max_degree:
        raise DomainError(f"Degree must lie in 1..{settings.gram_max_degree}, got n={n}")
    rule = as_rule(rule)
    nu, _ = scaled_moments(as_weight(u) ** -2.0, r, 2 * n + 1, rule)
    with mpmath.workdps(settings.precision_digits):
        G = mpmath.matrix(n + 1, n + 1)
        for i in range(n + 1):
            for j in range(n + 1):
                G[i, j] = mpmath.mpf(float(nu[i + j])) / mpmath.sqrt(
                    mpmath.mpf(float(nu[2 * i])) * mpmath.mpf(float(nu[2 * j]))
                )
        det = mpmath.det(G)
        value = float(mpmath.sqrt(det)) if det > 0 else 0.0
    return value


def gram_ladder(
    u: "WeightExpr | str",
    n: int,
    r_ladder: list[float] | None = None,
    delta: float = 0.0,
    settings: OrthopolySettings | None = None,
    rule: "QuadratureRule | QuadratureSettings | None" = None,
) -> LadderCheck:
    """:func:`gram_ratio` along the ladder with the same floor rule as the root spacing."""
    settings = settings or OrthopolySettings()
    ladder = sorted(r_ladder) if r_ladder else default_ladder(n, delta, settings)
    values = [gram_ratio(u, r, n, settings, rule) for r in ladder]
    check = LadderCheck("gram ratio", [float(r) for r in ladder], values, settings.spacing_fraction)
    logger.info(f"Gram ratio for u={u}, n={n}: min {check.minimum:.6g}, spread {check.spread:.3%}")
    return check


def witness_ladder(
    u: "WeightExpr | str",
    n: int,
    r_ladder: list[float] | None = None,
    delta: float = 0.0,
    settings: OrthopolySettings | None = None,
    rule: "QuadratureRule | QuadratureSettings | None" = None,
) -> LadderCheck:
    """:func:`build_split_witness` along the ladder; values are the achieved epsilons."""
    settings = settings or OrthopolySettings()
    ladder = sorted(r_ladder) if r_ladder else default_ladder(n, delta, settings)
    witnesses = [build_split_witness(u, r, n, settings, rule) for r in ladder]
    check = LadderCheck(
        "split witness",
        [float(r) for r in ladder],
        [w.epsilon_achieved for w in witnesses],
        settings.spacing_fraction,
        [w.to_dict() for w in witnesses],
    )
    logger.info(f"Split witness for u={u}, n={n}: min epsilon {check.minimum:.6g}")
    return check


# =============================================================================
# Constrained minimum and polynomial growth
# =============================================================================


@dataclass(frozen=True)
class ConstrainedMinimum:
    """Minimum of ``a / alpha1 + (1 - a) / alpha2`` on ``beta alpha1 + (1 - beta) alpha2 = 1``."""

    beta: float
    a: float
    gamma: float | None
    multiplier: float
    alpha1: float
    alpha2: float
    minimum: float
    bound: float | None

    def to_dict(self) -> dict[str, Any]:
        return {
            "beta": self.beta,
            "a": self.a,
            "gamma": self.gamma,
            "lambda": self.multiplier,
            "alpha1": self.alpha1,
            "alpha2": self.alpha2,
            "minimum": self.minimum,
            "bound": self.bound,
        }


def constrained_objective(a: float, alpha1, alpha2):
    return a / alpha1 + (1.0 - a) / alpha2


def _closed_form_minimum(beta: float, a: float) -> float:
    return 1.0 - (math.sqrt((1 - a) * beta) - math.sqrt(a * (1 - beta))) ** 2


def constrained_minimum(beta: float, a: float, gamma: float | None = None) -> ConstrainedMinimum:
    """Stationary point and value of the constrained minimum.

    With gamma the domain is ``0 < a <= 1/(1+gamma) < beta <= 1`` and ``bound`` is the
    value at ``a = 1/(1+gamma)``, strictly below 1; without it only ``0 < a < 1`` and
    ``0 < beta <= 1`` are required. ``beta = 1`` puts ``alpha2`` at infinity.

    Raises:
        DomainError: parameters outside the domain.
    """
    if not 0 < a < 1:
        raise DomainError(f"a must lie in (0, 1), got {a}")
    if not 0 < beta <= 1:
        raise DomainError(f"beta must lie in (0, 1], got {beta}")
    bound = None
    if gamma is not None:
        if not gamma > 0:
            raise DomainError(f"gamma must be positive, got {gamma}")
        pivot = 1.0 / (1.0 + gamma)
        if not (a <= pivot < beta):
            raise DomainError(f"Need a <= 1/(1+gamma) < beta, got a={a}, 1/(1+gamma)={pivot}, beta={beta}")
        bound = _closed_form_minimum(beta, pivot)

    lam = (math.sqrt(a * beta) + math.sqrt((1 - a) * (1 - beta))) ** 2
    alpha1 = math.sqrt(a / (lam * beta))
    alpha2 = math.sqrt((1 - a) / (lam * (1 - beta))) if beta < 1 else math.inf
    return ConstrainedMinimum(
        beta=beta,
        a=a,
        gamma=gamma,
        multiplier=lam,
        alpha1=alpha1,
        alpha2=alpha2,
        minimum=_closed_form_minimum(beta, a),
        bound=bound,
    )


@dataclass(frozen=True)
class MarkovGrowth:
    degree: int
    inner: tuple[float, float]
    outer: tuple[float, float]
    lhs: float
    rhs: float
    c_needed: float
    cap: float
    outer_cap: float

    @property
    def passed(self) -> bool:
        return self.c_needed <= self.cap * (1 + 1e-9)

    def to_dict(self) -> dict[str, Any]:
        return {
            "degree": self.degree,
            "inner": list(self.inner),
            "outer": list(self.outer),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "c_needed": self.c_needed,
            "cap": self.cap,
            "outer_cap": self.outer_cap,
            "passed": self.passed,
        }


@lru_cache(maxsize=128)
def markov_cap(n: int, max_ratio: float, points: int = 1025) -> float:
    """Largest growth constant a degree-n polynomial needs for nestings up to ``max_ratio``.

    With the inner interval mapped to [-1, 1], an outer interval ``rho`` times
    longer reaches at most ``2 rho - 1``, where no polynomial bounded by 1 on
    [-1, 1] exceeds ``|T_n|``. The cap is ``max |T_n(2 rho - 1)| / rho^n`` over
    ``1 <= rho <= max_ratio``; it increases towards ``4^n / 2``.
    """
    if n <= 0:
        return 1.0
    if not max_ratio >= 1:
        raise DomainError(f"Nesting ratio must be at least 1, got {max_ratio}")
    rho = np.geomspace(1.0, max_ratio, points)
    chebyshev = np.zeros(n + 1)
    chebyshev[n] = 1.0
    return float(np.max(np.abs(C.chebval(2 * rho - 1, chebyshev)) / rho**n))


def _max_abs(coeffs: np.ndarray, a: float, b: float, grid: int) -> float:
    points = [np.linspace(a, b, grid + 1)]
    if coeffs.size > 2:
        derivative = P.polyder(coeffs)
        if np.any(derivative):
            points.append(np.asarray(find_roots(np.trim_zeros(derivative, "b"), (a, b)), dtype=float))
    return float(np.max(np.abs(P.polyval(np.concatenate(points), coeffs))))


def markov_growth_check(
    coeffs,
    inner: tuple[float, float],
    outer: tuple[float, float],
    settings: OrthopolySettings | None = None,
) -> MarkovGrowth:
    """Smallest c with ``max_outer |p| <= c (|outer| / |inner|)^n max_inner |p|``.

    The check passes against the per-degree cap from :func:`markov_cap` over
    nestings up to ``markov_max_ratio``. ``4^n`` is kept as the outer bound.
    """
    settings = settings or OrthopolySettings()
    a1, b1 = float(inner[0]), float(inner[1])
    a2, b2 = float(outer[0]), float(outer[1])
    if not (a2 <= a1 < b1 <= b2):
        raise DomainError(f"Need nested intervals, got inner={inner}, outer={outer}")
    c = np.trim_zeros(np.asarray(coeffs, dtype=float), "b")
    n = max(c.size - 1, 0)
    ratio = (b2 - a2) / (b1 - a1)
    if c.size == 0:
        return MarkovGrowth(0, (a1, b1), (a2, b2), 0.0, 0.0, 1.0, 1.0, 1.0)
    max_ratio = settings.markov_max_ratio
    if ratio > max_ratio:
        logger.warning(
            f"Nesting ratio {ratio:.4g} exceeds markov_max_ratio={max_ratio:.4g}; "
            "cap taken at the actual ratio"
        )
        max_ratio = ratio
    lhs = _max_abs(c, a2, b2, settings.markov_grid)
    inner_max = _max_abs(c, a1, b1, settings.markov_grid)
    rhs = ratio**n * inner_max
    cap = markov_cap(n, float(max_ratio))
    return MarkovGrowth(n, (a1, b1), (a2, b2), lhs, rhs, lhs / rhs, cap, 4.0**n)
