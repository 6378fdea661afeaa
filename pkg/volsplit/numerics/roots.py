"""Real roots of small-degree polynomials on an interval by sign scan and bisection."""

import logging

import numpy as np
from numpy.polynomial import polynomial as P

from ..config import RootSettings
from ..errors import ConvergenceError, DomainError

logger = logging.getLogger(__name__)


def _trim(coeffs: np.ndarray) -> np.ndarray:
    return np.trim_zeros(np.asarray(coeffs, dtype=float), trim="b")


def _bisect(coeffs: np.ndarray, lo: np.ndarray, hi: np.ndarray, iterations: int) -> np.ndarray:
    """Vectorised bisection on brackets with ``p(lo) * p(hi) < 0``."""
    f_lo = P.polyval(lo, coeffs)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        f_mid = P.polyval(mid, coeffs)
        left = np.sign(f_mid) == np.sign(f_lo)
        lo = np.where(left, mid, lo)
        f_lo = np.where(left, f_mid, f_lo)
        hi = np.where(left, hi, mid)
        if np.all(hi - lo <= 4 * np.finfo(float).eps * np.maximum(np.abs(lo), np.abs(hi))):
            break
    else:
        width = float(np.max(hi - lo)) if lo.size else 0.0
        if width > 1e-10 * max(1.0, float(np.max(np.abs(hi))) if hi.size else 1.0):
            raise ConvergenceError(f"Bisection did not converge (bracket width {width:.3e})")
    return 0.5 * (lo + hi)


def find_roots(
    coeffs,
    interval: tuple[float, float],
    settings: RootSettings | None = None,
) -> list[float]:
    """Real roots of ``p(x) = sum coeffs[k] x^k`` in the open interval.

    Coefficients are in increasing degree order. Simple roots are located by a
    sign scan on ``scan_points`` equispaced points followed by bisection; double
    roots (no sign change) are found as sign changes of ``p'`` at which ``|p|`` is
    negligible relative to the size of ``p`` on the interval.

    Raises:
        DomainError: degree above ``max_degree``, zero polynomial, or bad interval.
        ConvergenceError: bisection failed to shrink a bracket.
    """
    settings = settings or RootSettings()
    a, b = float(interval[0]), float(interval[1])
    if not b > a:
        raise DomainError(f"Root interval must satisfy a < b, got ({a}, {b})")
    raw = np.asarray(coeffs, dtype=float)
    if raw.size and raw[-1] == 0:
        raise DomainError("Leading coefficient is zero")
    c = _trim(raw)
    if c.size == 0:
        raise DomainError("Zero polynomial has no isolated roots")
    degree = c.size - 1
    if degree > settings.max_degree:
        raise DomainError(f"Degree {degree} exceeds the maximum {settings.max_degree}")
    if degree == 0:
        return []

    grid = np.linspace(a, b, settings.scan_points + 1)
    values = P.polyval(grid, c)
    scale = float(np.max(np.abs(values))) or 1.0
    tiny = 1e-12 * scale

    roots: list[float] = []
    inner = values[1:-1]
    exact = np.flatnonzero(inner == 0.0) + 1
    roots.extend(grid[exact].tolist())

    signs = np.sign(values)
    change = (signs[:-1] * signs[1:]) < 0
    idx = np.flatnonzero(change)
    if idx.size:
        roots.extend(
            _bisect(c, grid[idx], grid[idx + 1], settings.bisection_iterations).tolist()
        )

    dc = P.polyder(c)
    if dc.size > 1:
        dvals = P.polyval(grid, dc)
        dsigns = np.sign(dvals)
        didx = np.flatnonzero((dsigns[:-1] * dsigns[1:]) < 0)
        if didx.size:
            crit = _bisect(dc, grid[didx], grid[didx + 1], settings.bisection_iterations)
            for z in crit:
                if abs(P.polyval(z, c)) <= tiny and a < z < b:
                    roots.append(float(z))

    roots = sorted(r for r in roots if a < r < b)
    merged: list[float] = []
    spacing = (b - a) / settings.scan_points
    for r in roots:
        if merged and abs(r - merged[-1]) < 1e-3 * spacing:
            continue
        merged.append(r)
    logger.debug(f"Found {len(merged)} roots of degree-{degree} polynomial in ({a:.4g}, {b:.4g})")
    return merged
