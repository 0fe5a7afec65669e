"""Exact minimum-cost connectivity on a line.

OPT(i) is the optimum for the suffix v_i..v_{n-1} in which v_i pays its right
gap. Either the suffix is a two-point base case, or some hill k (i < k < k')
reaches back to v_i and forward to v_k'; everything in [i, k) chains right,
everything in (k, k') chains left, and the rest is OPT(k'-1) minus the right
gap of v_{k'-1} that the hill already covers.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import (DistanceMatrix, Instance, LeftRightAssignment, Solution,
                   induced_graph, is_line_alike, is_strongly_connected,
                   merge_lr, verify_assignment)
from .errors import DimensionMismatch, NoInteriorPoint, NotLineAlike


@dataclass
class SumTable:
    """table[i, j] = sum of gap_m ** alpha for i <= m < j (0-based)."""
    table: np.ndarray
    alpha: float

    def __getitem__(self, ij):
        return float(self.table[ij])


@dataclass
class DpTable:
    T: np.ndarray
    k: np.ndarray
    kp: np.ndarray


def _need_1d(instance: Instance):
    if instance.dimension != 1:
        raise DimensionMismatch("this solver needs a 1D instance")


def build_sum_table(instance: Instance) -> SumTable:
    _need_1d(instance)
    gpow = np.diff(instance.xs) ** instance.alpha
    return SumTable(kernels.sum_table(np.ascontiguousarray(gpow)), instance.alpha)


def _power_matrix(xs, alpha):
    return np.abs(xs[:, None] - xs[None, :]) ** alpha


def cubic_table(hpow: np.ndarray) -> DpTable:
    """Run the cubic recurrence on any matrix of powered distances."""
    hpow = np.ascontiguousarray(hpow, dtype=float)
    gpow = np.ascontiguousarray(np.diagonal(hpow, 1))
    S = kernels.sum_table(gpow) if len(gpow) else np.zeros((1, 1))
    return DpTable(*kernels.cubic_dp(S, hpow))


def quadratic_table(xs: np.ndarray, alpha: float) -> DpTable:
    xs = np.ascontiguousarray(xs, dtype=float)
    gpow = np.ascontiguousarray(np.diff(xs) ** alpha)
    return DpTable(*kernels.quadratic_dp(xs, float(alpha), gpow))


def reconstruct(h: np.ndarray, dp: DpTable, start: int = 0) -> LeftRightAssignment:
    """Expand backpointers into left/right reaches (h holds plain distances).

    Nested suffixes start at k'-1 whose own right gap is covered by the hill,
    so that one term is skipped."""
    n = h.shape[0]
    lr = LeftRightAssignment.zeros(n)
    left, right = lr.left, lr.right
    if n - start < 2:
        return lr
    i, skip = start, False
    while True:
        if i == n - 2:
            if not skip:
                right[i] = max(right[i], h[i, i + 1])
            left[n - 1] = max(left[n - 1], h[n - 2, n - 1])
            return lr
        k, kp = int(dp.k[i]), int(dp.kp[i])
        for m in range(i + (1 if skip else 0), k):
            right[m] = max(right[m], h[m, m + 1])
        for m in range(k + 1, kp):
            left[m] = max(left[m], h[m - 1, m])
        left[k] = max(left[k], h[i, k])
        right[k] = max(right[k], h[k, kp])
        i, skip = kp - 1, True


def _finish(instance: Instance, tag: str, dp: DpTable, t0: float) -> Solution:
    xs = instance.xs
    h = np.abs(xs[:, None] - xs[None, :])
    lr = reconstruct(h, dp)
    ranges = merge_lr(lr).ranges
    return Solution(tag, float(dp.T[0]), ranges, verify_assignment(instance, ranges),
                    params={"dp": dp}, elapsed_ms=(time.perf_counter() - t0) * 1e3, lr=lr)


def _trivial(instance: Instance, tag: str, t0: float):
    if instance.n == 1:
        return Solution(tag, 0.0, np.zeros(1), True, elapsed_ms=(time.perf_counter() - t0) * 1e3,
                        lr=LeftRightAssignment.zeros(1))
    return None


def solve_1d_cubic(instance: Instance) -> Solution:
    t0 = time.perf_counter()
    _need_1d(instance)
    triv = _trivial(instance, "exact1d-cubic", t0)
    if triv is not None:
        return triv
    dp = cubic_table(_power_matrix(instance.xs, instance.alpha))
    return _finish(instance, "exact1d-cubic", dp, t0)


def midpoint_split(instance: Instance, i: int, kp: int) -> int:
    """Interior index k in (i, k') nearest the midpoint of v_i v_k'; ties go left."""
    _need_1d(instance)
    if kp - i < 2:
        raise NoInteriorPoint(f"no point strictly between {i} and {kp}")
    return int(kernels.midpoint_index(np.ascontiguousarray(instance.xs), int(i), int(kp)))


def solve_1d_quadratic(instance: Instance) -> Solution:
    t0 = time.perf_counter()
    _need_1d(instance)
    triv = _trivial(instance, "exact1d", t0)
    if triv is not None:
        return triv
    dp = quadratic_table(instance.xs, instance.alpha)
    return _finish(instance, "exact1d", dp, t0)


def solve_line_alike(metric, alpha: float) -> Solution:
    """Cubic recurrence with every distance replaced by the metric h.

    Valid for any ordered set whose metric satisfies is_line_alike."""
    t0 = time.perf_counter()
    m = metric if isinstance(metric, DistanceMatrix) else DistanceMatrix(metric)
    h = m.values
    n = h.shape[0]
    if n == 1:
        return Solution("line-alike", 0.0, np.zeros(1), True, lr=LeftRightAssignment.zeros(1))
    if not is_line_alike(m):
        raise NotLineAlike("metric violates h(i,l) >= h(j,k) for i <= j < k <= l")
    dp = cubic_table(h ** alpha)
    lr = reconstruct(h, dp)
    ranges = merge_lr(lr).ranges
    valid = is_strongly_connected(induced_graph(m, ranges))
    return Solution("line-alike", float(dp.T[0]), ranges, valid, params={"dp": dp},
                    elapsed_ms=(time.perf_counter() - t0) * 1e3, lr=lr)
