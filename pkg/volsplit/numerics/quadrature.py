"""
Composite Gauss-Legendre quadrature on finite and semi-infinite intervals.

Every integral is split into base panels, refined by bisection until the change
from a panel to its two halves is below ``rtol`` times the running estimate of the
whole integral, and summed. Base panels follow the scale of the problem:

- ``(0, b)``: dyadic grading ``[b 2^-(j+1), b 2^-j]`` toward the origin, so weights
  that blow up or vanish like powers of x are resolved;
- ``(a, b)`` with ``b > 2a > 0``: geometric panels ``[a 2^j, a 2^(j+1)]``;
- ``(a, inf)``: the finite part up to ``tail_cutoff`` followed by geometric tail
  panels ``[R 2^j, R 2^(j+1)]``, stopped when a panel adds less than ``tail_rtol``
  of the running total. The substitution ``x = a + (1 - s) / s`` is available as
  an alternative tail policy.

Integrands are given either directly (``integrate``) or as ``log f`` of a
nonnegative ``f`` (``integrate_log``). The log form is what the rest of the
package uses: weights are evaluated as log-magnitudes and panel sums are combined
with ``logaddexp``, so integrals such as ``int_0^r exp(2x) dx`` at r = 2^20 come
back as finite logarithms instead of overflowing.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import logsumexp

from ..config import QuadratureSettings
from ..errors import ConvergenceError, DivergentIntegralError, DomainError, IntegrationError

logger = logging.getLogger(__name__)

ArrayFunction = Callable[[np.ndarray], np.ndarray]

# Relative slack when comparing neighbouring panel contributions
_MONOTONE_SLACK = 1e-9
# Floor of the reported error relative to the absolute integral
_ERROR_FLOOR = 1e-13


@lru_cache(maxsize=64)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@dataclass(frozen=True)
class QuadratureResult:
    """Value of an integral with its refinement error estimate.

    For log-mode integrals ``log_value`` holds ``log`` of the integral and
    ``value`` its exponential (which may be ``inf`` or ``0.0`` when out of range).
    """

    value: float
    error: float
    panels: int
    converged: bool = True
    log_value: float | None = None

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "error": self.error,
            "panels": self.panels,
            "converged": self.converged,
            "log_value": self.log_value,
        }


@dataclass(frozen=True)
class QuadratureRule:
    """Panel layout and refinement policy; see :class:`QuadratureSettings`."""

    settings: QuadratureSettings = field(default_factory=QuadratureSettings)

    @property
    def order(self) -> int:
        return self.settings.order

    @property
    def tail_cutoff(self) -> float:
        return self.settings.tail_cutoff

    @property
    def tail_policy(self) -> str:
        return self.settings.tail_policy

    def panels(self, a: float, b: float) -> list[tuple[float, float]]:
        """Base panels tiling the finite interval [a, b]."""
        lo, hi = _base_panels(a, b, self.settings.grading_levels)
        return list(zip(lo.tolist(), hi.tolist()))

    def nodes_weights(self, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
        """Composite nodes and weights over the base panels of [a, b]."""
        t, w = gauss_legendre(self.order)
        lo, hi = _base_panels(a, b, self.settings.grading_levels)
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        nodes = (mid[:, None] + half[:, None] * t[None, :]).ravel()
        weights = (half[:, None] * w[None, :]).ravel()
        return nodes, weights


def as_rule(rule: "QuadratureRule | QuadratureSettings | None") -> QuadratureRule:
    if rule is None:
        return QuadratureRule()
    if isinstance(rule, QuadratureSettings):
        return QuadratureRule(rule)
    return rule


# =============================================================================
# Panel layout
# =============================================================================


def _base_panels(a: float, b: float, grading_levels: int) -> tuple[np.ndarray, np.ndarray]:
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError(f"Base panels need a finite interval, got ({a}, {b})")
    if b < a:
        raise DomainError(f"Interval endpoints out of order: ({a}, {b})")
    if b == a:
        return np.array([a]), np.array([b])
    if a == 0.0 and b > 0:
        edges = b * np.exp2(-np.arange(grading_levels, -1, -1, dtype=float))
        lo = np.concatenate([[0.0], edges[:-1]])
        return lo, edges
    if a > 0 and b > 2 * a:
        count = int(math.floor(math.log2(b / a)))
        edges = a * np.exp2(np.arange(count + 1, dtype=float))
        if edges[-1] < b * (1 - 1e-12):
            edges = np.append(edges, b)
        else:
            edges[-1] = b
        return edges[:-1], edges[1:]
    return np.array([a]), np.array([b])


# =============================================================================
# Adaptive engine
# =============================================================================


def _panel_estimates(
    fun: ArrayFunction, lo: np.ndarray, hi: np.ndarray, order: int, log_mode: bool
) -> tuple[np.ndarray, np.ndarray]:
    """Gauss estimate of each panel; in log mode both outputs are log-integrals."""
    t, w = gauss_legendre(order)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * t[None, :]
    with np.errstate(all="ignore"):
        vals = np.asarray(fun(x.ravel()), dtype=float).reshape(x.shape)
    if log_mode:
        bad = np.isnan(vals)
        if bad.any():
            raise IntegrationError("Integrand is not a number", node=float(x[bad][0]))
        if np.isposinf(vals).any():
            raise IntegrationError("Integrand overflows", node=float(x[np.isposinf(vals)][0]))
        with np.errstate(divide="ignore"):
            est = np.log(half) + logsumexp(vals + np.log(w)[None, :], axis=1)
        return est, est
    bad = ~np.isfinite(vals)
    if bad.any():
        raise IntegrationError("Non-finite integrand value", node=float(x[bad][0]))
    return half * (vals @ w), half * (np.abs(vals) @ w)


def _log_abs_diff(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """log|exp(a) - exp(b)| element-wise."""
    big = np.maximum(a, b)
    small = np.minimum(a, b)
    with np.errstate(all="ignore"):
        out = big + np.log(-np.expm1(small - big))
    return np.where(np.isneginf(big) | (big == small), -np.inf, out)


@dataclass
class _Sums:
    """Per-owner accumulators from one adaptive run."""

    value: np.ndarray
    error: np.ndarray
    absolute: np.ndarray
    panels: int
    converged: np.ndarray  # per group


def _adaptive(
    fun: ArrayFunction,
    lo: np.ndarray,
    hi: np.ndarray,
    owner: np.ndarray,
    owner_group: np.ndarray,
    n_groups: int,
    settings: QuadratureSettings,
    log_mode: bool,
    baseline: np.ndarray | None = None,
) -> _Sums:
    """Refine panels level by level.

    ``owner`` maps each base panel to an accumulator slot and ``owner_group`` maps
    slots to integrals; a panel is accepted when its halves change the estimate by
    at most ``rtol`` times the current estimate of its integral (plus ``baseline``).
    """
    n_owners = owner_group.size
    rtol = settings.rtol
    empty = -np.inf if log_mode else 0.0
    acc = np.full(n_owners, empty)
    err = np.full(n_owners, empty)
    acc_abs = np.full(n_owners, empty)
    converged = np.ones(n_groups, dtype=bool)
    if baseline is None:
        baseline = np.full(n_groups, empty)

    whole, whole_abs = _panel_estimates(fun, lo, hi, settings.order, log_mode)
    panels = lo.size
    depth = 0
    while lo.size:
        mid = 0.5 * (lo + hi)
        est, est_abs = _panel_estimates(
            fun, np.concatenate([lo, mid]), np.concatenate([mid, hi]), settings.order, log_mode
        )
        count = lo.size
        left, right = est[:count], est[count:]
        group = owner_group[owner]

        if log_mode:
            halves = np.logaddexp(left, right)
            diff = _log_abs_diff(halves, whole)
            total = np.full(n_groups, -np.inf)
            np.logaddexp.at(total, owner_group, acc)
            np.logaddexp.at(total, group, halves)
            total = np.logaddexp(total, baseline)
            with np.errstate(divide="ignore"):
                accept = diff <= math.log(rtol) + total[group]
            halves_abs = halves
        else:
            halves = left + right
            halves_abs = est_abs[:count] + est_abs[count:]
            diff = np.abs(halves - whole)
            total = np.bincount(owner_group, weights=acc_abs, minlength=n_groups)
            total += np.bincount(group, weights=halves_abs, minlength=n_groups)
            total += baseline
            accept = diff <= rtol * total[group]

        depth += 1
        if depth >= settings.max_depth or panels + 2 * count > settings.max_panels:
            pending = ~accept
            if pending.any():
                converged[np.unique(group[pending])] = False
                logger.warning(
                    f"Quadrature refinement budget reached with {int(pending.sum())} "
                    f"unconverged panels (depth {depth}, {panels} panels)"
                )
            accept = np.ones_like(accept)

        if log_mode:
            np.logaddexp.at(acc, owner[accept], halves[accept])
            np.logaddexp.at(err, owner[accept], diff[accept])
            np.logaddexp.at(acc_abs, owner[accept], halves_abs[accept])
        else:
            np.add.at(acc, owner[accept], halves[accept])
            np.add.at(err, owner[accept], diff[accept])
            np.add.at(acc_abs, owner[accept], halves_abs[accept])

        refine = ~accept
        if not refine.any():
            break
        lo = np.concatenate([lo[refine], mid[refine]])
        hi = np.concatenate([mid[refine], hi[refine]])
        whole = np.concatenate([left[refine], right[refine]])
        owner = np.concatenate([owner[refine], owner[refine]])
        panels += int(refine.sum())

    return _Sums(acc, err, acc_abs, panels, converged)


# =============================================================================
# Finite intervals
# =============================================================================


@dataclass
class _FiniteBatch:
    value: np.ndarray
    error: np.ndarray
    absolute: np.ndarray
    panels: int
    converged: np.ndarray
    divergent: np.ndarray


def _divergent_at_zero(contrib: np.ndarray, window: int, log_mode: bool) -> bool:
    """Inner dyadic contributions (innermost first) that fail to decrease inward."""
    inner = contrib[1 : window + 1]
    if inner.size < window:
        return False
    if log_mode:
        if not np.all(np.isfinite(inner)):
            return False
        slack = math.log1p(-_MONOTONE_SLACK)
        return bool(np.all(inner[:-1] >= inner[1:] + slack))
    if not np.all(inner > 0):
        return False
    return bool(np.all(inner[:-1] >= inner[1:] * (1 - _MONOTONE_SLACK)))


def _integrate_finite(
    fun: ArrayFunction,
    lows: np.ndarray,
    highs: np.ndarray,
    settings: QuadratureSettings,
    log_mode: bool,
) -> _FiniteBatch:
    los, his, owner_group, graded = [], [], [], []
    n_owners = 0
    for index, (a, b) in enumerate(zip(lows, highs)):
        lo, hi = _base_panels(float(a), float(b), settings.grading_levels)
        los.append(lo)
        his.append(hi)
        owner_group.append(np.full(lo.size, index))
        graded.append((n_owners, lo.size) if a == 0.0 and b > 0 else None)
        n_owners += lo.size
    lo = np.concatenate(los)
    hi = np.concatenate(his)
    owner_group = np.concatenate(owner_group)
    owner = np.arange(n_owners)
    n_groups = len(lows)

    width = hi - lo
    degenerate = width <= 0
    if degenerate.any():
        # Zero-width panels contribute nothing; keep them out of the engine.
        keep = ~degenerate
        lo, hi, owner = lo[keep], hi[keep], owner[keep]

    empty = -np.inf if log_mode else 0.0
    if lo.size:
        sums = _adaptive(fun, lo, hi, owner, owner_group, n_groups, settings, log_mode)
    else:
        zeros = np.full(n_owners, empty)
        sums = _Sums(zeros, zeros.copy(), zeros.copy(), 0, np.ones(n_groups, dtype=bool))

    if log_mode:
        value = np.full(n_groups, -np.inf)
        error = np.full(n_groups, -np.inf)
        np.logaddexp.at(value, owner_group, sums.value)
        np.logaddexp.at(error, owner_group, sums.error)
        absolute = value
    else:
        value = np.array(
            [math.fsum(sums.value[owner_group == g]) for g in range(n_groups)], dtype=float
        )
        error = np.bincount(owner_group, weights=sums.error, minlength=n_groups)
        absolute = np.bincount(owner_group, weights=sums.absolute, minlength=n_groups)

    divergent = np.zeros(n_groups, dtype=bool)
    for index, info in enumerate(graded):
        if info is None:
            continue
        start, size = info
        contrib = sums.value[start : start + size]
        if _divergent_at_zero(contrib, settings.divergence_window, log_mode):
            divergent[index] = True
    return _FiniteBatch(value, error, absolute, sums.panels, sums.converged, divergent)


# =============================================================================
# Semi-infinite tails
# =============================================================================


@dataclass
class _Tail:
    value: float
    error: float
    absolute: float
    panels: int
    converged: bool


def _tail_geometric(
    fun: ArrayFunction,
    start: float,
    settings: QuadratureSettings,
    log_mode: bool,
    running: float,
) -> _Tail:
    """Geometric panels ``[start 2^j, start 2^(j+1)]`` until the contribution is negligible.

    ``running`` is the (absolute or log) value already accumulated before ``start``.
    """
    chunk = 8
    window = settings.divergence_window
    contributions: list[float] = []
    values: list[float] = []
    errors: list[float] = []
    panels = 0
    j = 0
    total_abs = running
    log_tol = math.log(settings.tail_rtol)

    while j < settings.max_tail_panels:
        count = min(chunk, settings.max_tail_panels - j)
        edges = start * np.exp2(np.arange(j, j + count + 1, dtype=float))
        if not np.isfinite(edges[-1]):
            raise DivergentIntegralError(
                "Tail panels left the floating-point range before the integral settled",
                where="infinity",
            )
        lo, hi = edges[:-1], edges[1:]
        owner_group = np.zeros(count, dtype=int)
        baseline = np.array([total_abs])
        sums = _adaptive(
            fun, lo, hi, np.arange(count), owner_group, 1, settings, log_mode, baseline
        )
        panels += sums.panels
        for k in range(count):
            c_abs = float(sums.absolute[k])
            contributions.append(c_abs)
            values.append(float(sums.value[k]))
            errors.append(float(sums.error[k]))
            total_abs = float(np.logaddexp(total_abs, c_abs)) if log_mode else total_abs + c_abs
            index = j + k
            if log_mode:
                negligible = c_abs == -np.inf or c_abs <= log_tol + total_abs
            else:
                negligible = c_abs <= settings.tail_rtol * total_abs
            if not math.isfinite(total_abs) and total_abs > 0:
                raise DivergentIntegralError("Tail integral overflows", where="infinity",
                                             node=float(hi[k]))
            if negligible and index >= 1:
                logger.debug(f"Tail settled after {index + 1} panels from x={start:.4g}")
                return _combine_tail(values, errors, log_mode, panels, converged=True)
            if index >= settings.divergence_doublings and len(contributions) >= window:
                recent = contributions[-window:]
                if _non_decreasing(recent, log_mode):
                    raise DivergentIntegralError(
                        f"Tail contributions stop decreasing beyond x={lo[k]:.4g}",
                        where="infinity",
                        node=float(lo[k]),
                    )
        j += count

    # Budget exhausted while still decaying: add the geometric remainder.
    last, prev = contributions[-1], contributions[-2]
    ratio = math.exp(last - prev) if log_mode else (last / prev if prev > 0 else 0.0)
    if not ratio < 1:
        raise ConvergenceError(
            f"Tail integral from x={start:.4g} did not settle within "
            f"{settings.max_tail_panels} panels"
        )
    remainder = ratio / (1 - ratio)
    if log_mode:
        values.append(last + math.log(remainder))
        errors.append(last + math.log(remainder))
    else:
        sign = math.copysign(1.0, values[-1])
        values.append(sign * last * remainder)
        errors.append(last * remainder)
    logger.warning(
        f"Tail from x={start:.4g} truncated after {settings.max_tail_panels} panels; "
        f"added geometric remainder (panel ratio {ratio:.4f})"
    )
    return _combine_tail(values, errors, log_mode, panels, converged=False)


def _non_decreasing(recent: list[float], log_mode: bool) -> bool:
    arr = np.asarray(recent)
    if log_mode:
        if not np.all(np.isfinite(arr)):
            return False
        return bool(np.all(arr[1:] >= arr[:-1] + math.log1p(-_MONOTONE_SLACK)))
    if not np.all(arr > 0):
        return False
    return bool(np.all(arr[1:] >= arr[:-1] * (1 - _MONOTONE_SLACK)))


def _combine_tail(values, errors, log_mode, panels, converged) -> _Tail:
    if log_mode:
        value = float(logsumexp(values)) if values else -np.inf
        error = float(logsumexp(errors)) if errors else -np.inf
        return _Tail(value, error, value, panels, converged)
    value = math.fsum(values)
    return _Tail(value, math.fsum(errors), math.fsum(abs(v) for v in values), panels, converged)


def _tail_substitution(
    fun: ArrayFunction, start: float, settings: QuadratureSettings, log_mode: bool
) -> _Tail:
    """Map ``(start, inf)`` to ``(0, 1]`` by ``x = start + (1 - s) / s``; the origin end is graded."""

    def mapped(s: np.ndarray) -> np.ndarray:
        x = start + (1.0 - s) / s
        if log_mode:
            return fun(x) - 2.0 * np.log(s)
        return fun(x) / (s * s)

    batch = _integrate_finite(mapped, np.array([0.0]), np.array([1.0]), settings, log_mode)
    if batch.divergent[0]:
        raise DivergentIntegralError(
            "Substituted integrand grows toward infinity", where="infinity"
        )
    value = float(batch.value[0])
    if not log_mode and not math.isfinite(value):
        raise DivergentIntegralError("Tail integral overflows", where="infinity")
    return _Tail(
        value,
        float(batch.error[0]),
        float(batch.absolute[0]),
        batch.panels,
        bool(batch.converged[0]),
    )


# =============================================================================
# Public API
# =============================================================================


def _run(
    fun: ArrayFunction,
    interval: tuple[float, float],
    rule: "QuadratureRule | QuadratureSettings | None",
    log_mode: bool,
) -> QuadratureResult:
    settings = as_rule(rule).settings
    a, b = float(interval[0]), float(interval[1])
    if math.isnan(a) or math.isnan(b) or not math.isfinite(a):
        raise DomainError(f"Invalid interval ({a}, {b})")
    if b < a:
        raise DomainError(f"Interval endpoints out of order: ({a}, {b})")

    if math.isfinite(b):
        head_end = b
    elif settings.tail_policy == "substitution":
        head_end = a
    else:
        head_end = max(a, settings.tail_cutoff)

    empty = -np.inf if log_mode else 0.0
    value, error, absolute, panels, converged = empty, empty, empty, 0, True
    if head_end > a:
        batch = _integrate_finite(fun, np.array([a]), np.array([head_end]), settings, log_mode)
        if batch.divergent[0]:
            raise DivergentIntegralError(
                f"Integral over ({a:.4g}, {head_end:.4g}) diverges at 0", where="zero", node=0.0
            )
        value, error, absolute = (
            float(batch.value[0]),
            float(batch.error[0]),
            float(batch.absolute[0]),
        )
        panels, converged = batch.panels, bool(batch.converged[0])

    if not math.isfinite(b):
        if settings.tail_policy == "substitution":
            tail = _tail_substitution(fun, head_end, settings, log_mode)
        else:
            tail = _tail_geometric(fun, head_end, settings, log_mode, absolute)
        if log_mode:
            value = float(np.logaddexp(value, tail.value))
            error = float(np.logaddexp(error, tail.error))
            absolute = value
        else:
            value = value + tail.value
            error = error + tail.error
            absolute = absolute + tail.absolute
        panels += tail.panels
        converged = converged and tail.converged

    if log_mode:
        if value == np.inf:
            raise DivergentIntegralError("Integral overflows", where="infinity")
        floor = value + math.log(_ERROR_FLOOR) if math.isfinite(value) else -np.inf
        log_error = max(error, floor)
        rel = math.exp(log_error - value) if math.isfinite(value) else 0.0
        result = QuadratureResult(
            value=math.exp(value) if value < 709.0 else math.inf,
            error=rel,
            panels=panels,
            converged=converged,
            log_value=value,
        )
    else:
        if not math.isfinite(value):
            raise DivergentIntegralError("Integral overflows", where="infinity")
        result = QuadratureResult(
            value=value,
            error=max(error, _ERROR_FLOOR * absolute),
            panels=panels,
            converged=converged,
        )
    if not converged:
        logger.warning(
            f"Integral over ({a:.4g}, {b:.4g}) returned without full convergence "
            f"(error estimate {result.error:.3e})"
        )
    return result


def integrate(
    f: ArrayFunction,
    interval: tuple[float, float],
    rule: "QuadratureRule | QuadratureSettings | None" = None,
) -> QuadratureResult:
    """Integrate a vectorised function over ``(a, b)``; ``b`` may be ``inf``.

    Raises:
        IntegrationError: the integrand is not finite at a node.
        DivergentIntegralError: the integral diverges at 0 or at infinity.
        ConvergenceError: a tail neither settles nor diverges within budget.
    """
    return _run(f, interval, rule, log_mode=False)


def integrate_log(
    log_f: ArrayFunction,
    interval: tuple[float, float],
    rule: "QuadratureRule | QuadratureSettings | None" = None,
) -> QuadratureResult:
    """Integrate ``exp(log_f)`` for a nonnegative integrand given by its logarithm.

    ``error`` is relative for log-mode results.
    """
    return _run(log_f, interval, rule, log_mode=True)


def integrate_log_batch(
    log_f: ArrayFunction,
    lows: np.ndarray,
    highs: np.ndarray,
    rule: "QuadratureRule | QuadratureSettings | None" = None,
) -> np.ndarray:
    """Log-integrals of ``exp(log_f)`` over many finite intervals at once.

    Intervals starting at 0 whose integral diverges there come back as ``+inf``.
    """
    settings = as_rule(rule).settings
    lows = np.asarray(lows, dtype=float)
    highs = np.asarray(highs, dtype=float)
    if lows.size == 0:
        return np.empty(0)
    batch = _integrate_finite(log_f, lows, highs, settings, log_mode=True)
    return np.where(batch.divergent, np.inf, batch.value)


def _log_square(w) -> ArrayFunction:
    if hasattr(w, "log_abs"):

        def log_sq(x: np.ndarray) -> np.ndarray:
            la, sign = w.log_abs(x)
            return np.where(sign == 0, -np.inf, 2.0 * la)

        return log_sq

    def log_sq_callable(x: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 2.0 * np.log(np.abs(np.asarray(w(x), dtype=float)))

    return log_sq_callable


def log_l2_norm(
    w,
    interval: tuple[float, float],
    rule: "QuadratureRule | QuadratureSettings | None" = None,
) -> float:
    """``log ||w||_{L2(interval)}``; ``+inf`` when the integral diverges."""
    try:
        result = integrate_log(_log_square(w), interval, rule)
    except DivergentIntegralError:
        return math.inf
    return 0.5 * result.log_value


def weighted_l2_norm(
    w,
    interval: tuple[float, float],
    rule: "QuadratureRule | QuadratureSettings | None" = None,
) -> float:
    """``(int |w|^2)^(1/2)`` over the interval.

    Raises:
        DivergentIntegralError: when ``w`` is not square-integrable there.
    """
    result = integrate_log(_log_square(w), interval, rule)
    return math.exp(0.5 * result.log_value) if result.log_value < 1400 else math.inf
