"""Discrete optimal transport between weighted point clouds.

The exact solver runs the transportation-problem network simplex from
the kernel backend (deterministic pivot rule, so results are stable
across runs and platforms).  The entropic solver is a log-domain
Sinkhorn iteration.  Both report the plain transport cost
sum(plan * C) without any entropy term, which for the Euclidean ground
distance is the order-1 Wasserstein distance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ParameterError, ShapeError, SolverError


@dataclass(frozen=True)
class PointCloud:
    """Weighted points in R^k; weights default to uniform and sum to 1."""

    points: np.ndarray
    weights: np.ndarray = None

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        if pts.size == 0 or pts.shape[0] < 1:
            raise ShapeError("point cloud must contain at least one point")
        if not np.all(np.isfinite(pts)):
            raise ShapeError("point cloud contains non-finite values")
        if self.weights is None:
            w = np.full(pts.shape[0], 1.0 / pts.shape[0])
        else:
            w = np.asarray(self.weights, dtype=np.float64)
            if w.shape != (pts.shape[0],):
                raise ShapeError("weights length must match point count")
            if np.any(w < 0):
                raise ShapeError("weights must be nonnegative")
            if abs(w.sum() - 1.0) > 1e-12:
                raise ShapeError(f"weights sum to {w.sum()!r}, expected 1")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class TransportPlan:
    """Coupling between two clouds plus its transport cost.

    ``converged`` is False only for Sinkhorn plans that hit the
    iteration cap before reaching the marginal tolerance.
    """

    plan: np.ndarray
    cost: float
    iterations: int = 0
    converged: bool = True


def cost_matrix(a: PointCloud, b: PointCloud, metric: str = "euclidean") -> np.ndarray:
    """Pairwise ground distances, C[i, j] = ||a_i - b_j||."""
    if metric != "euclidean":
        raise ParameterError(f"unsupported metric: {metric!r}")
    if a.dim != b.dim:
        raise ShapeError(f"dimension mismatch: {a.dim} vs {b.dim}")
    diff = a.points[:, None, :] - b.points[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=2))


def exact_ot(a: PointCloud, b: PointCloud, max_iter: int = 100000,
             tol: float = 1e-10) -> TransportPlan:
    """Optimal coupling by network simplex; cost is the W1 distance."""
    C = cost_matrix(a, b)
    plan, pivots, status = _kernels.network_simplex(
        C, a.weights, b.weights, max_iter, tol
    )
    if status != 0:
        raise SolverError(
            f"transport solve did not finish in {max_iter} pivots "
            f"(clouds {a.size}x{b.size}, dim {a.dim})"
        )
    return TransportPlan(plan=plan, cost=float(np.sum(plan * C)), iterations=pivots)


def _logsumexp(z, axis):
    m = np.max(z, axis=axis, keepdims=True)
    return (m + np.log(np.sum(np.exp(z - m), axis=axis, keepdims=True))).squeeze(axis)


def sinkhorn_ot(a: PointCloud, b: PointCloud, epsilon: float | None = None,
                max_iters: int = 1000, tol: float = 1e-6) -> TransportPlan:
    """Entropic-regularized coupling via log-domain Sinkhorn updates.

    ``epsilon`` defaults to 0.05 x mean ground distance, making the
    default scale-invariant.  Hitting the iteration cap is reported as
    ``converged=False`` on the plan, not an error.
    """
    C = cost_matrix(a, b)
    if epsilon is None:
        epsilon = 0.05 * float(C.mean())
        if epsilon == 0.0:
            # all distances zero: any feasible plan is optimal at cost 0
            return TransportPlan(
                plan=np.outer(a.weights, b.weights), cost=0.0, iterations=0
            )
    if epsilon <= 0:
        raise ParameterError(f"epsilon must be > 0, got {epsilon}")
    with np.errstate(divide="ignore"):  # zero weights map to -inf cleanly
        log_a = np.log(a.weights)
        log_b = np.log(b.weights)
    K = -C / epsilon
    f = np.zeros(a.size)
    g = np.zeros(b.size)
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        f = log_a - _logsumexp(K + g[None, :], axis=1)
        g = log_b - _logsumexp(K + f[:, None], axis=0)
        # row marginals are the ones not enforced by the latest update
        row = np.exp(_logsumexp(K + f[:, None] + g[None, :], axis=1))
        if np.abs(row - a.weights).sum() < tol:
            converged = True
            break
    plan = np.exp(K + f[:, None] + g[None, :])
    return TransportPlan(
        plan=plan,
        cost=float(np.sum(plan * C)),
        iterations=it,
        converged=converged,
    )


def wasserstein_1d(x, y) -> float:
    """Exact order-1 Wasserstein between 1-D samples, uniform weights.

    Integrates |F_x - F_y| over the merged support, which handles
    unequal sample sizes without resampling.
    """
    x = np.sort(np.asarray(x, dtype=np.float64).ravel())
    y = np.sort(np.asarray(y, dtype=np.float64).ravel())
    if x.size == 0 or y.size == 0:
        raise ParameterError("wasserstein_1d requires non-empty samples")
    grid = np.concatenate([x, y])
    grid.sort(kind="stable")
    deltas = np.diff(grid)
    cdf_x = np.searchsorted(x, grid[:-1], side="right") / x.size
    cdf_y = np.searchsorted(y, grid[:-1], side="right") / y.size
    return float(np.sum(np.abs(cdf_x - cdf_y) * deltas))
