"""Brute-force ground truth for small instances.

An optimal range is always the distance to some other point (shrinking a range
to the farthest point it reaches keeps the graph), so each point only tries
those values. The search is an odometer over candidate indices with
branch-and-bound against an incumbent.
"""
from __future__ import annotations

import os

import numpy as np

from . import kernels
from .core import DistanceMatrix, Instance, chain_cost, tolerance
from .errors import DimensionMismatch, TooLarge

MINRANGE_CAP = 9
SPANNER_CAP = 7


def env_cap(default: int) -> int:
    v = os.environ.get("RANGEKIT_CAP")
    return int(v) if v else default


def candidate_ranges(d: np.ndarray, tol: float = 0.0):
    """Per-point sorted distinct distances to the other points.

    Returns (cands, counts): row v holds counts[v] valid entries, the rest is
    padded with the row maximum."""
    n = d.shape[0]
    if n == 1:
        return np.zeros((1, 1)), np.ones(1, np.int64)
    cands = np.zeros((n, n - 1))
    counts = np.zeros(n, np.int64)
    for v in range(n):
        u = np.unique(np.delete(d[v], v))
        if tol > 0 and len(u) > 1:
            # values closer than tol reach the same points
            keep = np.r_[True, np.diff(u) > tol]
            u = u[keep]
        cands[v, :len(u)] = u
        cands[v, len(u):] = u[-1]
        counts[v] = len(u)
    return cands, counts


def _mst_bound(d: np.ndarray, alpha: float) -> float:
    # bidirected MST: each point's range is its longest incident tree edge
    n = d.shape[0]
    inside = np.zeros(n, bool)
    inside[0] = True
    key = d[0].copy()
    par = np.zeros(n, np.int64)
    rng = np.zeros(n)
    for _ in range(n - 1):
        key_masked = np.where(inside, np.inf, key)
        v = int(np.argmin(key_masked))
        inside[v] = True
        u = par[v]
        rng[u] = max(rng[u], d[u, v])
        rng[v] = max(rng[v], d[u, v])
        closer = ~inside & (d[v] < key)
        key[closer] = d[v][closer]
        par[closer] = v
    return float((rng ** alpha).sum())


def _run(d, alpha, t, spanner, bound):
    n = d.shape[0]
    tol = tolerance(d.max())
    cands, counts = candidate_ranges(d)
    bound = bound * (1 + 1e-9) + 1e-300
    best, rho = kernels.brute_search(np.ascontiguousarray(cands), counts, np.ascontiguousarray(d),
                                     float(alpha), float(t), tol, spanner, bound)
    if rho[0] < 0:  # pragma: no cover - the bound comes from a feasible assignment
        raise RuntimeError("brute force found no assignment under its own upper bound")
    return float((rho ** alpha).sum()), rho


def brute_force_minrange(metric, alpha: float, cap: int | None = None):
    """Exact minimum cost over all strongly connected assignments."""
    d = metric.values if isinstance(metric, DistanceMatrix) else np.asarray(metric, float)
    n = d.shape[0]
    cap = env_cap(MINRANGE_CAP) if cap is None else cap
    if n > cap:
        raise TooLarge(f"n={n} exceeds the brute-force cap {cap}")
    if n == 1:
        return 0.0, np.zeros(1)
    return _run(d, alpha, np.inf, False, _mst_bound(d, alpha))


def brute_force_spanner(instance: Instance, alpha: float | None = None, t: float = np.inf,
                        cap: int | None = None):
    """Exact minimum cost over assignments whose graph is a t-spanner."""
    if instance.dimension != 1:
        raise DimensionMismatch("brute_force_spanner needs a 1D instance")
    alpha = instance.alpha if alpha is None else alpha
    n = instance.n
    cap = env_cap(SPANNER_CAP) if cap is None else cap
    if n > cap:
        raise TooLarge(f"n={n} exceeds the brute-force cap {cap}")
    if n == 1:
        return 0.0, np.zeros(1)
    d = instance.metric().values
    if np.isinf(t):
        return _run(d, alpha, np.inf, False, _mst_bound(d, alpha))
    return _run(d, alpha, t, True, chain_cost(instance.xs, alpha))
