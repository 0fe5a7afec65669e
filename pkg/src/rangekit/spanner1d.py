"""Minimum-cost t-spanners on a line.

Concatenating paths between consecutive points gives every other pair, so the
graph is a t-spanner iff for each gap m both v_m -> v_{m+1} and v_{m+1} -> v_m
have paths of length <= t * gap_m.

A shortest v_m -> v_{m+1} path walks left monotonically (length x_m - x_q) to
some q that reaches over the gap, then jumps to v_{m+1}. Walking back right
before jumping never helps: any vertex reached that way is already inside an
earlier hop's interval. So the path length is gap_m + 2 (x_m - x_q), where q
is the rightmost vertex with R(q) > m among those v_m can walk left to. The
mirror statement holds for v_{m+1} -> v_m.

solve_1d_spanner sweeps left to right choosing one range per vertex. After
vertex w the state keeps
  * stair: vertices q <= w whose right reach R(q) passes w, reduced to the
    Pareto staircase (a jumper further left is only useful if it reaches
    further), with reaches truncated to the last gap they can still serve;
  * pend: gaps m < w that no vertex in (m, w] reaches leftwards over yet,
    each with the furthest right reach M of the vertices in [m+1, w] (the
    walk from v_{m+1} to its future jumper must be able to get there).
The rightward test for gap w is decided at w; the leftward test for gap m is
decided by the first vertex that reaches back over it. States are merged per
key with the cheapest cost; branch-and-bound against an incumbent prunes.
"""
from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import (Instance, Solution, chain_cost, induced_graph, is_t_spanner,
                   verify_assignment)
from .errors import DimensionMismatch, RecursionDepthExceeded, TooLarge
from .exact1d import solve_1d_quadratic

INF = math.inf
SPANNER_CAP = 64
BEAM_WIDTH = 64


def forced_chain_cost(instance: Instance) -> float:
    """Cost when each point reaches both neighbours (the t = 1 optimum)."""
    if instance.dimension != 1:
        raise DimensionMismatch("forced_chain_cost needs a 1D instance")
    return chain_cost(instance.xs, instance.alpha)


def _options(xs, tol):
    # per vertex: list of (r, L, R) with distinct reach intervals, r ascending
    n = len(xs)
    out = []
    for v in range(n):
        ds = np.unique(np.abs(np.delete(xs, v) - xs[v]))
        seen = set()
        opts = []
        for r in ds:
            L = int(np.searchsorted(xs, xs[v] - r - tol, "left"))
            R = int(np.searchsorted(xs, xs[v] + r + tol, "right")) - 1
            if (L, R) not in seen:
                seen.add((L, R))
                opts.append((float(r), L, R))
        out.append(opts)
    return out


class _Sweep:
    def __init__(self, xs, alpha, t):
        self.xs = xs = np.asarray(xs, float)
        self.n = n = len(xs)
        self.alpha = alpha
        self.tol = tol = 1e-9 * (xs[-1] - xs[0])
        g = np.diff(xs)
        # a walk of length 2*offset is allowed on top of the gap itself
        self.slack = (t - 1.0) * g + tol if math.isfinite(t) else np.full(n - 1, INF)
        self.opts = _options(xs, tol)
        nn = np.r_[g[0], np.minimum(g[:-1], g[1:]), g[-1]] if n > 2 else np.r_[g, g]
        self.rest = np.r_[np.cumsum((nn ** alpha)[::-1])[::-1], 0.0]
        # ok[q, m]: jumper q is close enough to serve gap m (q <= m)
        self.ok = 2.0 * (xs[None, :n - 1] - xs[:, None]) <= self.slack[None, :]
        # furthest vertex that may serve as left-jumper of gap m
        self.bwin = np.array([int(np.searchsorted(xs, xs[m + 1] + self.slack[m] / 2.0, "right")) - 1
                              for m in range(n - 1)], dtype=np.int64)

    def _cap_stair(self, st, w):
        # keep entries that can still serve some gap m > w; truncate reaches
        out = []
        for q, R in st:
            ms = np.flatnonzero(self.ok[q, w + 1:R])
            if len(ms):
                out.append((q, int(w + 2 + ms[-1])))
        res = []
        for e in out:
            while res and res[-1][1] <= e[1]:
                res.pop()
            res.append(e)
        return tuple(res)

    def _step(self, stair, pend, w, L, R):
        """Apply vertex w with reach [L, R]; return the next key or None."""
        xs, n, slack = self.xs, self.n, self.slack
        npend = []
        for m, M in pend:
            if L <= m:
                # w is the first vertex reaching back over gap m
                if 2.0 * (xs[w] - xs[m + 1]) > slack[m]:
                    return None
            else:
                npend.append((m, M if M >= R else R))
        if w >= 1 and L > w - 1:
            npend.append((w - 1, R))
        if w == n - 1:
            return ((), ()) if not npend else None
        out = []
        for m, M in npend:
            M = min(M, int(self.bwin[m]))
            if M < w + 1:
                return None
            out.append((m, M))
        st = [(q, Rq) for q, Rq in stair if Rq >= w + 1]
        if R >= w + 1:
            st = [(q, Rq) for q, Rq in st if Rq > R]
            st.append((w, R))
        if not st:
            return None
        q = st[-1][0]
        if not self.ok[q, w]:
            return None
        if out and out[-1][0] >= q:
            return None
        return self._cap_stair(st, w), tuple(out)

    def run(self, ub, beam=None):
        n, alpha = self.n, self.alpha
        ub = ub * (1 + 1e-9) + 1e-300
        layers = []
        layer = {}
        for r, L, R in self.opts[0]:
            c = r ** alpha
            if c + self.rest[1] > ub:
                continue
            key = self._step((), (), 0, L, R) if n > 1 else ((), ())
            if key is not None and (key not in layer or c < layer[key][0]):
                layer[key] = (c, None, r)
        layers.append(layer)
        for w in range(1, n):
            new = {}
            rest = self.rest[w + 1]
            for (stair, pend), (c0, _, _) in layer.items():
                for r, L, R in self.opts[w]:
                    c = c0 + r ** alpha
                    if c + rest > ub:
                        break  # options are sorted by r
                    key = self._step(stair, pend, w, L, R)
                    if key is None:
                        continue
                    old = new.get(key)
                    if old is None or c < old[0]:
                        new[key] = (c, (stair, pend), r)
            if beam is not None and len(new) > beam:
                new = dict(sorted(new.items(), key=lambda kv: kv[1][0])[:beam])
            layer = new
            layers.append(layer)
            if not layer:
                return None
        key, (c, _, _) = min(layer.items(), key=lambda kv: kv[1][0])
        ranges = np.zeros(n)
        for w in range(n - 1, -1, -1):
            _, prev, r = layers[w][key]
            ranges[w] = r
            key = prev
        return float(c), ranges


def spanner_cap() -> int:
    v = os.environ.get("RANGEKIT_CAP")
    return int(v) if v else SPANNER_CAP


def solve_1d_spanner(instance: Instance, t: float, cap: Optional[int] = None) -> Solution:
    t0 = time.perf_counter()
    if instance.dimension != 1:
        raise DimensionMismatch("solve_1d_spanner needs a 1D instance")
    if t < 1:
        raise ValueError("t must be >= 1")
    n = instance.n
    cap = spanner_cap() if cap is None else cap
    if n > cap:
        raise TooLarge(f"n={n} exceeds the spanner cap {cap}")
    if n == 1:
        return Solution("spanner1d", 0.0, np.zeros(1), True, t=t)
    # the unconstrained optimum is a lower bound; if it already spans, done
    free = solve_1d_quadratic(instance)
    g = induced_graph(instance.metric(), free.ranges, instance.tol)
    if is_t_spanner(g, None, t, instance.tol):
        return Solution("spanner1d", free.cost, free.ranges, True, t=t,
                        params={"route": "unconstrained"},
                        elapsed_ms=(time.perf_counter() - t0) * 1e3)
    sw = _Sweep(instance.xs, instance.alpha, t)
    ub = chain_cost(instance.xs, instance.alpha)
    quick = sw.run(ub, beam=BEAM_WIDTH)
    if quick is not None:
        ub = min(ub, quick[0])
    c, ranges = sw.run(ub)
    valid = verify_assignment(instance, ranges, t)
    return Solution("spanner1d", c, ranges, valid, t=t, params={"route": "sweep"},
                    elapsed_ms=(time.perf_counter() - t0) * 1e3)


# ---------------------------------------------------------------------------
# Interval recursion over external path lengths.
#
# OPT(i, j, fwd, bwd, di): cheapest ranges for v_i..v_j given external paths
# v_i -> v_j of length fwd, v_j -> v_i of length bwd and v_i -> v_{i+1} of
# length di (None: same as fwd). Kept for reference and comparison; it is NOT
# exact (it misses the case where v_i already reaches v_{i+1} through a range
# paid elsewhere, so some vertices get charged twice). solve_1d_spanner does
# not use it.

@dataclass(frozen=True)
class SpannerKey:
    i: int
    j: int
    fwd: float = INF
    bwd: float = INF
    di: Optional[float] = None


@dataclass
class SpannerContext:
    xs: np.ndarray
    alpha: float
    t: float
    memo: dict = field(default_factory=dict)
    active: set = field(default_factory=set)

    def d(self, a, b):
        return abs(float(self.xs[a]) - float(self.xs[b]))


def _round(v):
    if v is None or math.isinf(v):
        return v
    return float(f"{v:.12g}")


def spanner_subproblem(ctx: SpannerContext, key: SpannerKey) -> float:
    i, j = key.i, key.j
    if j <= i:
        return 0.0
    fwd, bwd = key.fwd, key.bwd
    di = fwd if key.di is None else key.di
    mk = (i, j, _round(fwd), _round(bwd), _round(di))
    if mk in ctx.memo:
        return ctx.memo[mk][0]
    if mk in ctx.active:
        raise RecursionDepthExceeded(f"cycle at {mk}")
    ctx.active.add(mk)
    d, a, t = ctx.d, ctx.alpha, ctx.t
    g = d(i, i + 1)
    if j == i + 1:
        # the rightward test uses the shorter of the two external routes
        r1 = g if min(fwd, di) / g > t else 0.0
        r2 = g if bwd / g > t else 0.0
        val, choice = r1 ** a + r2 ** a, ("base",)
    else:
        sub = lambda *args: spanner_subproblem(ctx, SpannerKey(*args))
        # i = k, k' = i+1: v_i pays its right gap
        best = g ** a + sub(i, i + 1, g, d(i + 1, j) + bwd, None) + sub(i + 1, j, INF, bwd - g, None)
        choice = ("i=k",)
        # k = k' = i+1: v_{i+1} pays its left gap
        v = g ** a + sub(i, i + 1, di, g, None) + sub(i + 1, j, g + fwd, bwd - g, None)
        if v < best:
            best, choice = v, ("k=k'",)
        for k in range(i + 1, j + 1):
            for kp in range(k + 1, j + 1):
                v = (max(d(i, k), d(k, kp)) ** a
                     + sub(i, i + 1, di, d(i + 1, k) + d(k, i), None)
                     + sub(i + 1, k, INF, d(k, i + 1), INF)
                     + sub(k, kp - 1, d(k, kp - 1), INF, d(k, k + 1))
                     + sub(kp - 1, j, d(kp - 1, i) + fwd, bwd - d(i, kp - 1), d(kp - 1, k) + d(k, kp)))
                if v < best:
                    best, choice = v, ("hill", k, kp)
        val = best
    ctx.active.discard(mk)
    ctx.memo[mk] = (val, choice)
    return val


def recursion_cost(instance: Instance, t: float) -> float:
    """Root value OPT(0, n-1, inf, inf, None) of the interval recursion."""
    if instance.n == 1:
        return 0.0
    ctx = SpannerContext(instance.xs, instance.alpha, t)
    return spanner_subproblem(ctx, SpannerKey(0, instance.n - 1))
