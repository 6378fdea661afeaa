"""
Discretized Volterra operators and their norms.

An operator ``(A f)(x) = int_0^x sum_k a_k(x) t^k f(t) dt`` is sampled on a
panel grid of (0, R): ``grid_size / panel_order`` Gauss-Legendre panels with edges
uniform in ``s(x) = log x + x / c``. For ``c = R`` the panels are geometric, which
resolves power behaviour at both ends; a small ``c`` turns them uniform beyond
``x ~ c``, which exponential kernels need. Inside its own panel the partial
integral ``int_{edge}^{x_i}`` is taken from the Lagrange interpolant on that
panel's nodes, so the matrix is exactly zero above its block diagonal.

With quadrature weights ``w`` the matrix

    M_ij = sqrt(w_i) v(x_i) sum_k a_k(x_i) x_j^k K_ij / (u(x_j) sqrt(w_j))

maps the grid image of ``u f`` to the grid image of ``v A f``, so its spectral
norm approximates the norm of A from L2 with weight u to L2 with weight v,
restricted to (0, R). Entries are assembled from log-magnitudes to keep
``v(x_i) / u(x_j)`` finite when each factor alone overflows.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

import numpy as np
from numpy.polynomial import legendre as L
from scipy.sparse.linalg import svds

from .config import OperatorSettings, QuadratureSettings, SupremumSettings
from .criteria import (
    CriterionReport,
    DegenerateKernel,
    RiemannLiouvilleKernel,
    riemann_liouville_criterion,
    splitting_criteria,
)
from .errors import ConvergenceError, DomainError, IntegrationError
from .numerics.dsl import WeightExpr, as_weight
from .numerics.quadrature import QuadratureRule, as_rule, gauss_legendre, log_l2_norm

logger = logging.getLogger(__name__)


# =============================================================================
# Grid
# =============================================================================


@lru_cache(maxsize=16)
def partial_integration_matrix(order: int) -> np.ndarray:
    """``S[i, j] = int_{-1}^{t_i} l_j(t) dt`` for the Lagrange basis on Gauss nodes."""
    t, _ = gauss_legendre(order)
    vander = L.legvander(t, order - 1)
    coeffs = np.linalg.inv(vander)  # column j: Legendre coefficients of l_j
    integrals = np.empty((order, order))
    for m in range(order):
        unit = np.zeros(order)
        unit[m] = 1.0
        integrals[:, m] = L.legval(t, L.legint(unit, lbnd=-1))
    S = integrals @ coeffs
    S.setflags(write=False)
    return S


def _invert_stretch(s: np.ndarray, scale: float, lo: float, hi: float) -> np.ndarray:
    """Solve ``log x + x / scale = s`` for x in [lo, hi] by bisection on log x."""
    a = np.full(s.shape, math.log(lo))
    b = np.full(s.shape, math.log(hi))
    for _ in range(200):
        mid = 0.5 * (a + b)
        too_big = mid + np.exp(mid) / scale > s
        b = np.where(too_big, mid, b)
        a = np.where(too_big, a, mid)
    return np.exp(0.5 * (a + b))


@dataclass(frozen=True)
class OperatorGrid:
    """Composite Gauss grid on (0, R)."""

    R: float
    edges: np.ndarray
    nodes: np.ndarray
    weights: np.ndarray
    panel_order: int

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def panel_of_node(self) -> np.ndarray:
        return np.repeat(np.arange(self.edges.size - 1), self.panel_order)

    def to_dict(self) -> dict[str, Any]:
        return {
            "R": self.R,
            "size": self.size,
            "panels": int(self.edges.size - 1),
            "panel_order": self.panel_order,
            "first_edge": float(self.edges[1]),
        }


def build_grid(R: float, N: int, settings: OperatorSettings | None = None) -> OperatorGrid:
    """Panel grid with ``N / panel_order`` panels: ``[0, grid_min]`` then stretched panels."""
    settings = settings or OperatorSettings()
    if not R > 0:
        raise DomainError(f"Truncation point must be positive, got R={R}")
    if N < 16:
        raise DomainError(f"Grid size must be at least 16, got N={N}")
    q = settings.panel_order
    panels = max(2, N // q)
    x_min = min(settings.grid_min, R * 2.0**-20)
    scale = settings.grid_scale or R
    s_lo = math.log(x_min) + x_min / scale
    s_hi = math.log(R) + R / scale
    s_edges = np.linspace(s_lo, s_hi, panels)
    inner = _invert_stretch(s_edges, scale, x_min * 0.5, R * 2.0)
    inner[0], inner[-1] = x_min, R
    edges = np.concatenate([[0.0], inner])

    t, w = gauss_legendre(q)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return OperatorGrid(float(R), edges, nodes, weights, q)


def integration_matrix(grid: OperatorGrid) -> np.ndarray:
    """``K`` with ``(K g)_i ~ int_0^{x_i} g``: full weights on earlier panels, interpolated on own."""
    q = grid.panel_order
    panel = grid.panel_of_node
    K = np.where(panel[None, :] < panel[:, None], grid.weights[None, :], 0.0)
    S = partial_integration_matrix(q)
    half = 0.5 * np.diff(grid.edges)
    for p in range(grid.edges.size - 1):
        block = slice(p * q, (p + 1) * q)
        K[block, block] = half[p] * S
    return K


# =============================================================================
# Discretized operator
# =============================================================================


def _log_weight(w: WeightExpr, x: np.ndarray, name: str) -> tuple[np.ndarray, np.ndarray]:
    la, sign = w.log_abs(x)
    if np.any(np.isnan(la)) or np.any(np.isnan(sign)):
        bad = x[np.flatnonzero(np.isnan(la) | np.isnan(sign))[0]]
        raise IntegrationError(f"Weight {name}={w} is not a number", node=float(bad))
    if np.any(np.isposinf(la)):
        bad = x[np.flatnonzero(np.isposinf(la))[0]]
        raise IntegrationError(f"Weight {name}={w} is infinite", node=float(bad))
    return la, sign


@dataclass
class DiscretizedOperator:
    """Matrix of ``v A`` between the u- and v-weighted grid images on (0, R)."""

    kernel: DegenerateKernel
    u: WeightExpr
    v: WeightExpr
    grid: OperatorGrid
    integration: np.ndarray
    matrix: np.ndarray
    components: list[np.ndarray] = field(default_factory=list)
    adjoint: bool = False

    @property
    def truncation_R(self) -> float:
        return self.grid.R

    @property
    def size(self) -> int:
        return self.grid.size

    def apply(self, f_values: np.ndarray) -> np.ndarray:
        """``(A f)(x_i)`` from samples of f at the nodes."""
        x = self.grid.nodes
        out = np.zeros_like(x)
        for k, a in enumerate(self.kernel.coeffs):
            if a.is_zero:
                continue
            out += np.asarray(a(x)) * (self.integration @ (x**k * f_values))
        return out

    def image(self, f_values: np.ndarray) -> np.ndarray:
        """Grid image ``sqrt(w) u f`` of an input function."""
        return np.sqrt(self.grid.weights) * np.asarray(self.u(self.grid.nodes)) * f_values

    def output_image(self, values: np.ndarray) -> np.ndarray:
        """Grid image ``sqrt(w) v g`` of an output function."""
        return np.sqrt(self.grid.weights) * np.asarray(self.v(self.grid.nodes)) * values

    def causality_violation(self) -> float:
        """Largest entry strictly above the block diagonal (zero by construction)."""
        panel = self.grid.panel_of_node
        above = panel[None, :] > panel[:, None]
        if self.adjoint:
            above = above.T
        return float(np.max(np.abs(self.matrix[above]), initial=0.0))

    def to_dict(self) -> dict[str, Any]:
        return {
            "kernel": self.kernel.to_dict(),
            "u": str(self.u),
            "v": str(self.v),
            "grid": self.grid.to_dict(),
            "adjoint": self.adjoint,
        }


def discretize(
    kernel: DegenerateKernel,
    u: "WeightExpr | str",
    v: "WeightExpr | str",
    R: float,
    N: int,
    settings: OperatorSettings | None = None,
    components: bool = False,
    adjoint: bool = False,
) -> DiscretizedOperator:
    """Assemble the weighted matrix of ``v A`` on an N-node grid of (0, R).

    With ``components=True`` the matrices of each rank-one part ``a_k(x) t^k`` are
    kept as well (their sum is the full matrix). With ``adjoint=True`` the matrix
    of the adjoint operator between the reciprocal-weight spaces is returned; it
    is the transpose.

    Raises:
        DomainError: R or N out of range.
        IntegrationError: a weight is not finite at a grid node.
    """
    settings = settings or OperatorSettings()
    u, v = as_weight(u), as_weight(v)
    grid = build_grid(R, N, settings)
    x = grid.nodes
    K = integration_matrix(grid)

    lu, su = _log_weight(u, x, "u")
    if np.any(su == 0):
        raise IntegrationError(f"Weight u={u} vanishes on the grid", node=float(x[su == 0][0]))
    lv, sv = _log_weight(v, x, "v")
    half_log_w = 0.5 * np.log(grid.weights)
    log_x = np.log(x)
    with np.errstate(divide="ignore"):
        log_K = np.log(np.abs(K))
    sign_K = np.sign(K)

    parts = []
    for k, a in enumerate(kernel.coeffs):
        if a.is_zero:
            parts.append(np.zeros((x.size, x.size)))
            continue
        la, sa = _log_weight(a, x, f"a_{k}")
        row = half_log_w + lv + la
        col = k * log_x - lu - half_log_w
        with np.errstate(over="ignore", invalid="ignore"):
            log_entry = row[:, None] + col[None, :] + log_K
            entry = np.exp(log_entry) * (sv * sa)[:, None] * su[None, :] * sign_K
        entry = np.where(sign_K == 0, 0.0, entry)
        if not np.all(np.isfinite(entry)):
            raise IntegrationError(f"Matrix entries overflow for component k={k}")
        parts.append(entry)

    matrix = np.sum(parts, axis=0)
    if adjoint:
        matrix = matrix.T.copy()
        parts = [p.T.copy() for p in parts]
    logger.info(f"Discretized operator on (0, {R:g}) with N={grid.size} nodes")
    return DiscretizedOperator(
        kernel=kernel,
        u=u,
        v=v,
        grid=grid,
        integration=K,
        matrix=matrix,
        components=parts if components else [],
        adjoint=adjoint,
    )


# =============================================================================
# Norm estimation
# =============================================================================


@dataclass
class NormEstimate:
    """Largest singular value with the provenance of the estimate."""

    value: float
    method: str
    converged: bool
    iterations: int
    gap: float
    svd_value: float | None = None

    @property
    def svd_agrees(self) -> bool | None:
        if self.svd_value is None:
            return None
        return abs(self.svd_value - self.value) <= 1e-8 * max(1.0, self.svd_value)

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "method": self.method,
            "converged": self.converged,
            "iterations": self.iterations,
            "gap": self.gap,
            "svd_value": self.svd_value,
            "svd_agrees": self.svd_agrees,
        }


def _power_iteration(
    M: np.ndarray, start: np.ndarray, rtol: float, max_iter: int
) -> tuple[float, bool, int, float]:
    x = start / np.linalg.norm(start)
    sigma = 0.0
    gap = math.inf
    for it in range(1, max_iter + 1):
        y = M @ x
        new_sigma = float(np.linalg.norm(y))
        if new_sigma == 0.0:
            return 0.0, True, it, 0.0
        z = M.T @ y
        norm_z = np.linalg.norm(z)
        if norm_z == 0.0:
            return new_sigma, True, it, 0.0
        x = z / norm_z
        gap = abs(new_sigma - sigma) / new_sigma
        sigma = new_sigma
        if gap < rtol:
            return sigma, True, it, gap
    return sigma, False, max_iter, gap


def matrix_norm(M: np.ndarray, settings: OperatorSettings | None = None) -> NormEstimate:
    """Spectral norm by power iteration on ``M^T M`` with Lanczos and dense-SVD checks."""
    settings = settings or OperatorSettings()
    if not np.all(np.isfinite(M)):
        raise DomainError("Matrix has non-finite entries")
    n = M.shape[1]
    rng = np.random.default_rng(settings.seed)
    runs = [
        _power_iteration(M, np.ones(n), settings.power_rtol, settings.power_max_iter),
        _power_iteration(M, rng.standard_normal(n), settings.power_rtol, settings.power_max_iter),
    ]
    value, converged, iterations, gap = max(runs, key=lambda r: r[0])
    method = "power"
    if not converged:
        logger.warning(
            f"Power iteration reached {settings.power_max_iter} iterations (gap {gap:.3e}); "
            "refining with Lanczos"
        )
        try:
            top = svds(M, k=1, return_singular_vectors=False, tol=settings.power_rtol)
            value = max(value, float(top[0]))
            method = "lanczos"
            converged = True
        except Exception as e:  # ARPACK failures surface as several exception types
            if min(M.shape) > 4096:
                raise ConvergenceError(f"Norm estimate did not converge: {e}") from e
            value = float(np.linalg.norm(M, 2))
            method = "svd"
            converged = True

    svd_value = None
    if min(M.shape) <= settings.svd_check_max:
        svd_value = float(np.linalg.norm(M, 2))
        if abs(svd_value - value) > 1e-8 * max(1.0, svd_value):
            logger.warning(
                f"Norm estimate {value:.12g} disagrees with dense SVD {svd_value:.12g}; "
                "using the SVD value"
            )
            value = svd_value
            method = "svd"
    return NormEstimate(value, method, converged, iterations, gap, svd_value)


def operator_norm(op: DiscretizedOperator, settings: OperatorSettings | None = None) -> NormEstimate:
    """Norm of the discretized operator (its largest singular value)."""
    estimate = matrix_norm(op.matrix, settings)
    logger.info(
        f"Operator norm on (0, {op.truncation_R:g}): {estimate.value:.10g} via {estimate.method}"
    )
    return estimate


# =============================================================================
# Experiments
# =============================================================================


@dataclass
class NormRung:
    R: float
    total: NormEstimate
    components: list[NormEstimate]

    def to_dict(self) -> dict[str, Any]:
        return {
            "R": self.R,
            "total": self.total.to_dict(),
            "components": [c.to_dict() for c in self.components],
        }


def _stabilized(values: list[float], rtol: float) -> bool:
    if len(values) < 2:
        return False
    prev, last = values[-2], values[-1]
    if last == prev:
        return True
    return abs(last - prev) <= rtol * max(abs(last), abs(prev))


@dataclass
class SplittingExperiment:
    """Norm ladder of an operator and its components next to the criterion suprema."""

    kernel: DegenerateKernel
    u: str
    v: str
    R_ladder: list[float]
    N: int
    rungs: list[NormRung]
    criteria: CriterionReport | None
    stabilization_rtol: float

    @property
    def total_norms(self) -> list[float]:
        return [r.total.value for r in self.rungs]

    def component_norms(self, k: int) -> list[float]:
        return [r.components[k].value for r in self.rungs]

    @property
    def sum_S(self) -> float | None:
        return self.criteria.total if self.criteria is not None else None

    @property
    def total_stabilized(self) -> bool:
        return _stabilized(self.total_norms, self.stabilization_rtol)

    @property
    def components_stabilized(self) -> list[bool]:
        return [
            _stabilized(self.component_norms(k), self.stabilization_rtol)
            for k in range(self.kernel.n + 1)
        ]

    @property
    def norm_ratios(self) -> list[float]:
        s = self.sum_S
        if s is None or not math.isfinite(s) or s == 0:
            return []
        return [value / s for value in self.total_norms]

    @property
    def empirical_c1(self) -> float | None:
        ratios = self.norm_ratios
        return min(ratios) if ratios else None

    @property
    def empirical_c2(self) -> float | None:
        ratios = self.norm_ratios
        return max(ratios) if ratios else None

    @property
    def upper_bound_holds(self) -> bool | None:
        """``||A|| <= 2 sum S_k`` within 5% at every rung."""
        s = self.sum_S
        if s is None or not math.isfinite(s):
            return None
        return all(value <= 2.0 * s * 1.05 + 1e-12 for value in self.total_norms)

    @property
    def mismatches(self) -> list[str]:
        flags = []
        if self.criteria is None:
            return flags
        for entry, stable in zip(self.criteria.entries, self.components_stabilized):
            if entry.finite != stable:
                flags.append(
                    f"k={entry.k}: supremum {'finite' if entry.finite else 'infinite'} but "
                    f"component norm {'stabilizes' if stable else 'keeps growing'}"
                )
        bounded = self.criteria.verdict == "bounded"
        if bounded != self.total_stabilized:
            flags.append(
                f"criteria verdict {self.criteria.verdict!r} but total norm "
                f"{'stabilizes' if self.total_stabilized else 'keeps growing'}"
            )
        return flags

    @property
    def verdict(self) -> str:
        """Whether the total stabilizes exactly when every component does."""
        if all(self.components_stabilized) == self.total_stabilized:
            return "splitting-consistent"
        return "splitting-inconsistent"

    def growth_factors(self, k: int | None = None) -> list[float]:
        """Ratio of consecutive rung norms (for the total when ``k`` is None)."""
        values = self.total_norms if k is None else self.component_norms(k)
        return [b / a if a > 0 else math.inf for a, b in zip(values, values[1:])]

    def to_dict(self) -> dict[str, Any]:
        return {
            "kernel": self.kernel.to_dict(),
            "u": self.u,
            "v": self.v,
            "R_ladder": self.R_ladder,
            "N": self.N,
            "rungs": [r.to_dict() for r in self.rungs],
            "sum_S": self.sum_S,
            "empirical_c1": self.empirical_c1,
            "empirical_c2": self.empirical_c2,
            "total_stabilized": self.total_stabilized,
            "components_stabilized": self.components_stabilized,
            "upper_bound_holds": self.upper_bound_holds,
            "verdict": self.verdict,
            "mismatches": self.mismatches,
            "criteria": self.criteria.to_dict(include_curves=False) if self.criteria else None,
        }

    def ladder_rows(self) -> list[dict[str, float]]:
        """One plot-ready row per rung."""
        rows = []
        for rung in self.rungs:
            row = {"R": rung.R, "total": rung.total.value}
            for k, c in enumerate(rung.components):
                row[f"component_{k}"] = c.value
            rows.append(row)
        return rows


def splitting_experiment(
    kernel: DegenerateKernel,
    u: "WeightExpr | str",
    v: "WeightExpr | str",
    R_ladder: list[float] | None = None,
    N: int | None = None,
    criteria: CriterionReport | None = None,
    settings: OperatorSettings | None = None,
    supremum_settings: SupremumSettings | None = None,
    rule: "QuadratureRule | QuadratureSettings | None" = None,
) -> SplittingExperiment:
    """Norms of A and of every component on a ladder of truncations, with the suprema."""
    settings = settings or OperatorSettings()
    u, v = as_weight(u), as_weight(v)
    R_ladder = sorted(R_ladder or settings.r_ladder)
    N = N or settings.grid_size
    if criteria is None:
        criteria = splitting_criteria(
            kernel, u, v, stamp=False, settings=supremum_settings, rule=rule
        )
    rungs = []
    for R in R_ladder:
        op = discretize(kernel, u, v, R, N, settings, components=True)
        total = operator_norm(op, settings)
        parts = [matrix_norm(M, settings) for M in op.components]
        rungs.append(NormRung(float(R), total, parts))
        logger.info(
            f"Rung R={R:g}: ||A||={total.value:.6g}, components "
            + ", ".join(f"{p.value:.6g}" for p in parts)
        )
    experiment = SplittingExperiment(
        kernel=kernel,
        u=str(u),
        v=str(v),
        R_ladder=[float(r) for r in R_ladder],
        N=N,
        rungs=rungs,
        criteria=criteria,
        stabilization_rtol=settings.stabilization_rtol,
    )
    for flag in experiment.mismatches:
        logger.warning(f"Growth pattern mismatch: {flag}")
    return experiment


@dataclass
class WitnessBound:
    r: float
    epsilon: float
    tail_norm: float
    head_norm: float

    @property
    def bound(self) -> float:
        return self.epsilon * self.tail_norm * self.head_norm

    def to_dict(self) -> dict[str, Any]:
        return {
            "r": self.r,
            "epsilon": self.epsilon,
            "tail_norm": self.tail_norm,
            "head_norm": self.head_norm,
            "bound": self.bound,
        }


def witness_lower_bound(
    kernel: DegenerateKernel,
    u: "WeightExpr | str",
    v: "WeightExpr | str",
    r_ladder: list[float],
    rule: "QuadratureRule | QuadratureSettings | None" = None,
) -> list[WitnessBound]:
    """Lower bounds ``||A|| >= eps(r) ||a_0 v||_{L2(r,inf)} ||1/u||_{L2(0,r)}``.

    The split witness of degree n has vanishing moments of orders 1..n on (0, r),
    so beyond r the operator only sees ``a_0(x) int f_r``.
    """
    from .orthopoly import build_split_witness

    u, v = as_weight(u), as_weight(v)
    rule = as_rule(rule)
    a0v = kernel.coeffs[0] * v
    bounds = []
    for r in r_ladder:
        witness = build_split_witness(u, r, kernel.n, rule=rule)
        tail = math.exp(log_l2_norm(a0v, (r, math.inf), rule)) if not a0v.is_zero else 0.0
        head = math.exp(log_l2_norm(1.0 / u, (0.0, r), rule))
        bounds.append(WitnessBound(float(r), witness.epsilon_achieved, tail, head))
    return bounds


# =============================================================================
# Fractional integration counterexample
# =============================================================================

COMPONENT_GROWTH = 1.5
TOTAL_DRIFT = 0.02


@dataclass
class CounterexampleSummary:
    """Bounded fractional integral whose rank-one components are all unbounded."""

    alpha: float
    u: str
    v: str
    two_condition: CriterionReport
    components: CriterionReport
    experiment: SplittingExperiment

    @property
    def total_bounded(self) -> bool:
        return self.two_condition.verdict == "bounded"

    @property
    def components_unbounded(self) -> bool:
        return all(not e.finite for e in self.components.entries)

    @property
    def components_grow(self) -> bool:
        """Every component norm grows by at least ``COMPONENT_GROWTH`` per rung."""
        return all(
            all(f >= COMPONENT_GROWTH for f in self.experiment.growth_factors(k))
            for k in range(self.experiment.kernel.n + 1)
        )

    @property
    def total_drift(self) -> float:
        values = self.experiment.total_norms
        if len(values) < 2:
            return math.inf
        return abs(values[-1] - values[-2]) / max(abs(values[-1]), abs(values[-2]))

    @property
    def splitting_fails(self) -> bool:
        return (
            self.total_bounded
            and self.components_unbounded
            and self.components_grow
            and self.total_drift < TOTAL_DRIFT
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "alpha": self.alpha,
            "u": self.u,
            "v": self.v,
            "total_bounded": self.total_bounded,
            "components_unbounded": self.components_unbounded,
            "components_grow": self.components_grow,
            "total_drift": self.total_drift,
            "splitting_fails": self.splitting_fails,
            "growth_factors": {
                str(k): self.experiment.growth_factors(k)
                for k in range(self.experiment.kernel.n + 1)
            },
            "two_condition": self.two_condition.to_dict(include_curves=False),
            "components": self.components.to_dict(include_curves=False),
            "experiment": self.experiment.to_dict(),
        }


def fractional_counterexample(
    alpha: float = 2.0,
    u: "WeightExpr | str" = "exp(-x)",
    v: "WeightExpr | str" = "exp(-x)",
    R_ladder: list[float] | None = None,
    N: int | None = None,
    settings: OperatorSettings | None = None,
    supremum_settings: SupremumSettings | None = None,
    rule: "QuadratureRule | QuadratureSettings | None" = None,
) -> CounterexampleSummary:
    """Fractional integration of integer order where splitting does not take place.

    For ``u = v = e^-x`` the two-condition criterion finds the operator bounded
    while every component supremum is infinite; the norm ladder shows the
    components growing with R as the total settles.
    """
    settings = settings or OperatorSettings()
    if settings.grid_scale is None:
        # exponential weights vary on unit scale at every x
        settings = settings.model_copy(update={"grid_scale": 1.0})
    kernel = RiemannLiouvilleKernel(alpha)
    degenerate = kernel.to_degenerate()
    u, v = as_weight(u), as_weight(v)
    two = riemann_liouville_criterion(kernel, u, v, supremum_settings, rule)
    split = splitting_criteria(
        degenerate, u, v, stamp=False, settings=supremum_settings, rule=rule
    )
    experiment = splitting_experiment(
        degenerate,
        u,
        v,
        R_ladder or [2.0**k for k in range(4, 9)],
        N,
        criteria=split,
        settings=settings,
        supremum_settings=supremum_settings,
        rule=rule,
    )
    summary = CounterexampleSummary(float(alpha), str(u), str(v), two, split, experiment)
    logger.info(
        f"Counterexample alpha={alpha}: total bounded={summary.total_bounded}, "
        f"components unbounded={summary.components_unbounded}, "
        f"drift {summary.total_drift:.3%}"
    )
    return summary
