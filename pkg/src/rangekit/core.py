"""Instances, metrics, assignments and the graphs they induce.

Indices are 0-based throughout. Every threshold comparison uses the absolute
tolerance TOL_FACTOR * diameter.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from . import kernels
from .errors import (DimensionMismatch, DuplicatePoint, InvalidInstance,
                     NonFiniteCoordinate, SizeMismatch)

TOL_FACTOR = 1e-9
INF = math.inf


def tolerance(diameter: float) -> float:
    return TOL_FACTOR * float(diameter)


@dataclass(frozen=True, eq=False)
class Instance:
    dimension: int
    alpha: float
    points: np.ndarray          # (n, dimension), canonical order
    perm: np.ndarray            # perm[k] = input position of canonical point k

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def xs(self) -> np.ndarray:
        if self.dimension != 1:
            raise DimensionMismatch("xs is only defined for 1D instances")
        return self.points[:, 0]

    @property
    def diameter(self) -> float:
        if self.n < 2:
            return 0.0
        if self.dimension == 1:
            return float(self.xs[-1] - self.xs[0])
        return float(distance_matrix(self.points).max())

    @property
    def tol(self) -> float:
        return tolerance(self.diameter)

    def metric(self) -> "DistanceMatrix":
        return DistanceMatrix(distance_matrix(self.points), check=False)

    def to_input_order(self, values) -> np.ndarray:
        values = np.asarray(values, float)
        out = np.empty_like(values)
        out[self.perm] = values
        return out

    def from_input_order(self, values) -> np.ndarray:
        return np.asarray(values, float)[self.perm]

    def with_alpha(self, alpha: float) -> "Instance":
        return Instance(self.dimension, float(alpha), self.points, self.perm)


def canonicalize(raw_points, dimension: int, alpha: float = 1.0) -> Instance:
    """Validate raw coordinates and return an Instance (1D points sorted)."""
    pts = np.asarray(raw_points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1) if dimension == 1 else pts.reshape(1, -1)
    if pts.size == 0 or pts.shape[0] == 0:
        raise InvalidInstance("empty point list")
    if dimension not in (1, 2, 3):
        raise InvalidInstance(f"dimension must be 1, 2 or 3, got {dimension}")
    if pts.shape[1] != dimension:
        raise DimensionMismatch(f"points have {pts.shape[1]} coordinates, dimension is {dimension}")
    if not np.isfinite(pts).all():
        raise NonFiniteCoordinate("coordinates must be finite")
    if not (math.isfinite(alpha) and alpha >= 1):
        raise InvalidInstance(f"alpha must be >= 1, got {alpha}")
    order = np.lexsort(pts.T[::-1])
    srt = pts[order]
    if len(srt) > 1:
        same = np.all(srt[1:] == srt[:-1], axis=1)
        if same.any():
            j = int(np.argmax(same))
            raise DuplicatePoint(f"duplicate point {srt[j].tolist()}")
    if dimension == 1:
        return Instance(1, float(alpha), srt.copy(), order.astype(np.int64))
    return Instance(dimension, float(alpha), pts.copy(), np.arange(len(pts), dtype=np.int64))


def distance_matrix(points) -> np.ndarray:
    p = np.asarray(points, float)
    if p.ndim == 1:
        p = p[:, None]
    diff = p[:, None, :] - p[None, :, :]
    return np.sqrt((diff ** 2).sum(axis=-1))


@dataclass(eq=False)
class DistanceMatrix:
    values: np.ndarray
    check: bool = True

    def __post_init__(self):
        self.values = np.asarray(self.values, float)
        v = self.values
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise SizeMismatch("distance matrix must be square")
        if self.check:
            n = v.shape[0]
            if not np.allclose(v, v.T, rtol=0, atol=1e-12 * max(1.0, float(np.abs(v).max(initial=0)))):
                raise InvalidInstance("distance matrix is not symmetric")
            if np.any(np.diagonal(v) != 0):
                raise InvalidInstance("distance matrix diagonal must be zero")
            off = v[~np.eye(n, dtype=bool)]
            if off.size and off.min() <= 0:
                raise InvalidInstance("off-diagonal distances must be positive")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @classmethod
    def euclidean(cls, points) -> "DistanceMatrix":
        return cls(distance_matrix(points), check=False)

    @property
    def tol(self) -> float:
        return tolerance(self.values.max(initial=0.0))


@dataclass(eq=False)
class RangeAssignment:
    ranges: np.ndarray

    def __post_init__(self):
        self.ranges = np.asarray(self.ranges, float)
        if self.ranges.ndim != 1 or not np.isfinite(self.ranges).all() or (self.ranges < 0).any():
            raise InvalidInstance("ranges must be finite and non-negative")

    def __len__(self):
        return len(self.ranges)


@dataclass(eq=False)
class LeftRightAssignment:
    left: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        self.left = np.asarray(self.left, float)
        self.right = np.asarray(self.right, float)
        if self.left.shape != self.right.shape:
            raise SizeMismatch("left and right must have equal length")
        if (self.left < 0).any() or (self.right < 0).any():
            raise InvalidInstance("ranges must be non-negative")

    @classmethod
    def zeros(cls, n: int) -> "LeftRightAssignment":
        return cls(np.zeros(n), np.zeros(n))


@dataclass(eq=False)
class CommGraph:
    adj: np.ndarray      # adj[u, v] is True for the directed edge u -> v
    length: np.ndarray   # metric length of every ordered pair

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    def edges(self) -> set:
        us, vs = np.nonzero(self.adj)
        return {(int(u), int(v)) for u, v in zip(us, vs)}


def _as_ranges(rho) -> np.ndarray:
    if isinstance(rho, RangeAssignment):
        return rho.ranges
    return np.asarray(rho, float)


def _as_matrix(metric) -> np.ndarray:
    if isinstance(metric, DistanceMatrix):
        return metric.values
    return np.asarray(metric, float)


def induced_graph(metric, rho, tol: Optional[float] = None) -> CommGraph:
    d = _as_matrix(metric)
    r = _as_ranges(rho)
    if r.shape[0] != d.shape[0]:
        raise SizeMismatch(f"{r.shape[0]} ranges for {d.shape[0]} points")
    if tol is None:
        tol = tolerance(d.max(initial=0.0))
    adj = r[:, None] >= d - tol
    np.fill_diagonal(adj, False)
    return CommGraph(adj, d)


def induced_graph_lr(instance: Instance, lr: LeftRightAssignment) -> CommGraph:
    if instance.dimension != 1:
        raise DimensionMismatch("left-right assignments need a 1D instance")
    if len(lr.left) != instance.n:
        raise SizeMismatch("assignment length differs from instance size")
    xs = instance.xs
    tol = instance.tol
    diff = xs[None, :] - xs[:, None]          # x_v - x_u for row u, column v
    right = (diff > 0) & (diff <= lr.right[:, None] + tol)
    left = (diff < 0) & (-diff <= lr.left[:, None] + tol)
    return CommGraph(right | left, np.abs(diff))


def is_strongly_connected(g: CommGraph) -> bool:
    return bool(kernels.strongly_connected(np.ascontiguousarray(g.adj)))


def shortest_paths(g: CommGraph) -> np.ndarray:
    W = np.where(g.adj, g.length, INF)
    np.fill_diagonal(W, 0.0)
    return kernels.floyd_warshall(np.ascontiguousarray(W))


def is_t_spanner(g: CommGraph, metric=None, t: float = INF, tol: Optional[float] = None) -> bool:
    if not is_strongly_connected(g):
        return False
    if math.isinf(t):
        return True
    d = g.length if metric is None else _as_matrix(metric)
    if tol is None:
        tol = tolerance(d.max(initial=0.0))
    D = shortest_paths(g)
    return bool((D <= t * d + tol).all())


def cost(rho, alpha: float) -> float:
    return float((_as_ranges(rho) ** alpha).sum())


def cost_lr(lr: LeftRightAssignment, alpha: float) -> float:
    return float((np.maximum(lr.left, lr.right) ** alpha).sum())


def cost_prime(lr: LeftRightAssignment, alpha: float) -> float:
    return float((lr.left ** alpha).sum() + (lr.right ** alpha).sum())


def merge_lr(lr: LeftRightAssignment) -> RangeAssignment:
    return RangeAssignment(np.maximum(lr.left, lr.right))


def is_line_alike(m, tol: Optional[float] = None) -> bool:
    """h(i, l) >= h(j, k) for all i <= j < k <= l.

    Checking single-step shrinks suffices: any (j, k) inside (i, l) is reached
    by moving one endpoint inward at a time."""
    h = _as_matrix(m)
    n = h.shape[0]
    if n <= 2:
        return True
    if tol is None:
        tol = tolerance(h.max(initial=0.0))
    iu, lu = np.triu_indices(n, 2)
    ok_left = h[iu, lu] >= h[iu + 1, lu] - tol
    ok_right = h[iu, lu] >= h[iu, lu - 1] - tol
    return bool(ok_left.all() and ok_right.all())


def chain_cost(xs, alpha: float) -> float:
    """Every point reaches both neighbours: sum of max adjacent gap ** alpha."""
    xs = np.asarray(xs, float)
    if len(xs) < 2:
        return 0.0
    g = np.diff(xs)
    r = np.maximum(np.r_[0.0, g], np.r_[g, 0.0])
    return float((r ** alpha).sum())


@dataclass
class Solution:
    algorithm: str
    cost: float
    ranges: np.ndarray                    # canonical point order
    valid: bool
    t: Optional[float] = None
    params: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0
    lr: Optional[LeftRightAssignment] = None
    meta: Any = None

    @property
    def assignment(self) -> RangeAssignment:
        return RangeAssignment(self.ranges)


def verify_assignment(instance: Instance, ranges, t: Optional[float] = None) -> bool:
    g = induced_graph(instance.metric(), ranges, instance.tol)
    if t is None:
        return is_strongly_connected(g)
    return is_t_spanner(g, None, t, instance.tol)


def as_points(seq: Sequence) -> np.ndarray:
    return np.asarray(seq, float)
