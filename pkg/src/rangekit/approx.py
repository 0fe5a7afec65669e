"""Constant-factor approximation for alpha = 1 in two or more dimensions.

Candidates:
  i    hub: MST edges directed to the point with the smallest enclosing radius.
  ii   hub variant on the MST's weighted-diameter path P_M, forest bi-directed.
  iii  for every edge e of P_M and every l <= l' <= m < r' <= r on the
       flattened sides: a directed middle cycle plus a hub on each outer
       sub-path.
  iv   as iii, but each outer sub-path is solved exactly under the tree-aware
       metric h_S and then widened by the transformation g.
Every candidate is checked for strong connectivity; the cheapest valid one wins
(ties: tag order, then parameters).

Path positions are 0-based. For a side, index 0 is the outer endpoint of P_M
and the last index touches e.
"""
from __future__ import annotations

import heapq
import math
import os
import time
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import kernels
from .core import (Instance, Solution, distance_matrix, induced_graph,
                   is_strongly_connected, tolerance)
from .errors import AlphaUnsupported, BadIndices, IndexOutOfSide, PathNotInTree
from .exact1d import DpTable, cubic_table, reconstruct

C_S = 5 / 4
C_K = 1 + 8 * (1 + C_S)      # 19
EPS = 5 / 10 ** 5            # analysis only
C_H = 20 * EPS               # analysis only
APPROX_CAP = 64
TAG_RANK = {"i": 0, "ii": 1, "iii": 2, "iv": 3}


# ---------------------------------------------------------------- MST pieces

@dataclass
class Tree:
    n: int
    edges: np.ndarray      # (n-1, 2), u < v
    weights: np.ndarray    # (n-1,)

    @property
    def weight(self) -> float:
        return float(self.weights.sum())

    @property
    def longest_edge(self) -> float:
        return float(self.weights.max()) if len(self.weights) else 0.0

    def adjacency(self):
        adj = [[] for _ in range(self.n)]
        for (u, v), w in zip(self.edges, self.weights):
            adj[int(u)].append((int(v), float(w)))
            adj[int(v)].append((int(u), float(w)))
        for a in adj:
            a.sort()
        return adj


def euclidean_mst(points) -> Tree:
    """Prim on the complete graph. Ties pick the lowest vertex index, and a
    vertex keeps its first (lowest-index) parent among equal keys."""
    pts = np.asarray(points, float)
    if pts.ndim == 1:
        pts = pts[:, None]
    n = len(pts)
    D = distance_matrix(pts)
    return _prim(D)


def _prim(D: np.ndarray) -> Tree:
    n = D.shape[0]
    if n == 1:
        return Tree(1, np.zeros((0, 2), np.int64), np.zeros(0))
    inside = np.zeros(n, bool)
    inside[0] = True
    key = D[0].copy()
    par = np.zeros(n, np.int64)
    edges, ws = [], []
    for _ in range(n - 1):
        v = int(np.argmin(np.where(inside, np.inf, key)))
        inside[v] = True
        u = int(par[v])
        edges.append((min(u, v), max(u, v)))
        ws.append(D[u, v])
        closer = ~inside & (D[v] < key)
        key[closer] = D[v][closer]
        par[closer] = v
    order = np.lexsort((np.array(edges)[:, 1], np.array(edges)[:, 0]))
    return Tree(n, np.array(edges, np.int64)[order], np.array(ws)[order])


def _farthest(adj, src):
    n = len(adj)
    dist = np.full(n, -1.0)
    par = np.full(n, -1, np.int64)
    dist[src] = 0.0
    stack = [src]
    while stack:
        u = stack.pop()
        for v, w in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + w
                par[v] = u
                stack.append(v)
    return int(np.argmax(dist)), dist, par


def weighted_diameter_path(tree: Tree) -> list:
    """Maximum-weight simple path, by two farthest-vertex passes from vertex 0."""
    if tree.n == 1:
        return [0]
    adj = tree.adjacency()
    a, _, _ = _farthest(adj, 0)
    b, _, par = _farthest(adj, a)
    path = [b]
    while path[-1] != a:
        path.append(int(par[path[-1]]))
    return path[::-1]


@dataclass
class MstDecomposition:
    points: np.ndarray
    tree: Tree
    path: list             # P_M as point indices
    parent: np.ndarray     # forest parent (towards the root), -1 on the path
    root: np.ndarray       # r(u)

    def copy(self) -> "MstDecomposition":
        return replace(self, path=list(self.path), parent=self.parent.copy(), root=self.root.copy())

    def members(self, v: int) -> list:
        return [int(u) for u in np.flatnonzero(self.root == v)]

    def edge_len(self, u, v) -> float:
        return float(np.linalg.norm(self.points[u] - self.points[v]))

    def tree_weights(self) -> np.ndarray:
        """w(T(v)) indexed by point; zero for non-roots."""
        w = np.zeros(len(self.points))
        kids = np.flatnonzero(self.parent >= 0)
        if len(kids):
            lens = np.linalg.norm(self.points[kids] - self.points[self.parent[kids]], axis=1)
            np.add.at(w, self.root[kids], lens)
        return w

    def tree_weight(self, v: int) -> float:
        return float(self.tree_weights()[v])

    @property
    def forest_weight(self) -> float:
        return float(self.tree_weights().sum())

    @property
    def path_weight(self) -> float:
        p = self.points[self.path]
        return float(np.linalg.norm(np.diff(p, axis=0), axis=1).sum()) if len(p) > 1 else 0.0


def decompose(tree: Tree, path, points) -> MstDecomposition:
    """Split the MST into the path and the forest hanging off it."""
    pts = np.asarray(points, float)
    if pts.ndim == 1:
        pts = pts[:, None]
    adj = tree.adjacency()
    nbrs = [{v for v, _ in a} for a in adj]
    path = [int(v) for v in path]
    for u, v in zip(path, path[1:]):
        if v not in nbrs[u]:
            raise PathNotInTree(f"({u}, {v}) is not a tree edge")
    on_path = set(path)
    path_edges = {frozenset(e) for e in zip(path, path[1:])}
    parent = np.full(tree.n, -1, np.int64)
    root = np.full(tree.n, -1, np.int64)
    for r in path:
        root[r] = r
        stack = [r]
        while stack:
            u = stack.pop()
            for v, _ in adj[u]:
                if root[v] >= 0 or frozenset((u, v)) in path_edges or v in on_path:
                    continue
                root[v] = r
                parent[v] = u
                stack.append(v)
    return MstDecomposition(pts, tree, path, parent, root)


# ------------------------------------------------------------------ flatten

@dataclass
class FlattenedSide:
    path: list
    shortcuts: list
    decomp: MstDecomposition


def _flatten_pass(path, decomp, c_s, tol, shortcuts):
    pts = decomp.points
    changed = False
    i = 0
    while i < len(path) - 1:
        P = pts[path[i:]]
        steps = np.linalg.norm(np.diff(P, axis=0), axis=1)
        along = np.concatenate(([0.0], np.cumsum(steps)))
        direct = np.linalg.norm(P - P[0], axis=1)
        bad = np.flatnonzero(along[1:] > c_s * direct[1:] + tol) + 1
        if len(bad) and bad[-1] > 1:
            j = i + int(bad[-1])
            vi, vj = path[i], path[j]
            moved = path[i + 1:j]
            prev = vi
            for u in moved:
                decomp.parent[u] = prev
                prev = u
            for u in moved:
                decomp.root[decomp.root == u] = vi
            shortcuts.append((vi, vj))
            path[:] = path[:i + 1] + path[j:]
            changed = True
        i += 1
    return changed


def flatten(path_segment, decomp: MstDecomposition, c_s: float = C_S, inplace: bool = False) -> FlattenedSide:
    """Greedy shortcutting until no pair on the path has stretch above c_s.

    From v_i take the largest j with path distance > c_s |v_i v_j|, add the
    shortcut (v_i, v_j) and hang v_{i+1}..v_{j-1} under v_i as a chain;
    continue from v_j. Passes repeat until one makes no shortcut."""
    dec = decomp if inplace else decomp.copy()
    path = [int(v) for v in path_segment]
    shortcuts = []
    # no slack here: the postcondition is stretch <= c_s exactly
    while _flatten_pass(path, dec, c_s, 0.0, shortcuts):
        pass
    return FlattenedSide(path, shortcuts, dec)


def path_stretch(points, path) -> float:
    """Largest path-distance / Euclidean ratio over pairs on the path."""
    P = np.asarray(points, float)[list(path)]
    if len(P) < 2:
        return 1.0
    along = np.concatenate(([0.0], np.cumsum(np.linalg.norm(np.diff(P, axis=0), axis=1))))
    A = np.abs(along[:, None] - along[None, :])
    E = distance_matrix(P)
    iu = np.triu_indices(len(P), 1)
    return float((A[iu] / E[iu]).max())


# ------------------------------------------------------------ per-edge setup

@dataclass
class Side:
    pts: np.ndarray        # point ids, outer endpoint first
    w: np.ndarray          # w(T(q_a))
    near: np.ndarray       # near[j, a] = min distance from q_j to T(q_a)
    H: np.ndarray          # h_S on the whole side
    steps: np.ndarray      # steps[a] = |q_a q_{a+1}|
    dp: Optional[DpTable] = None

    @property
    def size(self) -> int:
        return len(self.pts)


def h_s(side: Side, j: int, k: int) -> float:
    if not (0 <= j < side.size and 0 <= k < side.size):
        raise IndexOutOfSide(f"({j}, {k}) outside a side of {side.size} vertices")
    return float(side.H[j, k])


def _side_metric(TT: np.ndarray) -> np.ndarray:
    """h(j, k) = min over a <= j, b >= k of TT[a, b]; zero diagonal."""
    M = np.minimum.accumulate(TT, axis=0)
    H = np.minimum.accumulate(M[:, ::-1], axis=1)[:, ::-1]
    H = np.triu(H, 1)
    return H + H.T


@dataclass
class EdgeSetup:
    e: int                 # P_M edge index (between p_e and p_{e+1})
    decomp: MstDecomposition
    P: np.ndarray          # flattened full path
    m: int                 # vertices on the left side
    left: Side
    right: Side
    TT: np.ndarray         # tree-to-tree min distance by path position
    U: np.ndarray          # U[a, b]: the endpoint of that pair inside T(P[a])
    base0: np.ndarray      # trees directed to roots, roots reach their tree
    prev_len: np.ndarray   # prev_len[a] = |P[a] P[a-1]|
    shortcuts: list = field(default_factory=list)


def setup_edge(decomp: MstDecomposition, e: int, D: np.ndarray) -> EdgeSetup:
    dec = decomp.copy()
    left_seg, right_seg = dec.path[:e + 1], dec.path[e + 1:]
    fl = flatten(left_seg, dec, inplace=True)
    fr = flatten(right_seg, dec, inplace=True)
    P = np.array(fl.path + fr.path, np.int64)
    m = len(fl.path)
    z = len(P)
    dec.path = [int(v) for v in P]
    n = len(dec.points)
    pos = np.empty(n, np.int64)
    pos[P] = np.arange(z)
    lab = pos[dec.root]
    # closest pair between every two trees, by path position
    key = (lab[:, None] * z + lab[None, :]).ravel()
    order = np.lexsort((D.ravel(), key))
    ks, first = np.unique(key[order], return_index=True)
    flat = order[first]
    TT = np.full((z, z), np.inf)
    U = np.full((z, z), -1, np.int64)
    TT.flat[ks] = D.ravel()[flat]
    U.flat[ks] = flat // n
    # point-to-tree distances
    srt = np.argsort(lab, kind="stable")
    starts = np.searchsorted(lab[srt], np.arange(z))
    PT = np.minimum.reduceat(D[:, srt], starts, axis=1)     # (n, z)
    tw = dec.tree_weights()
    base0 = np.zeros(n)
    kids = np.flatnonzero(dec.parent >= 0)
    base0[kids] = D[kids, dec.parent[kids]]
    base0[P] = np.maximum(base0[P], tw[P])
    prev_len = np.zeros(z)
    prev_len[1:] = D[P[1:], P[:-1]]

    def side(idx):
        pts = P[idx]
        tt = TT[np.ix_(idx, idx)]
        steps = D[pts[:-1], pts[1:]] if len(pts) > 1 else np.zeros(0)
        return Side(pts, tw[pts], PT[np.ix_(pts, idx)], _side_metric(tt), steps)

    left = side(np.arange(m))
    right = side(np.arange(z - 1, m - 1, -1))
    for s in (left, right):
        if s.size >= 2:
            s.dp = cubic_table(s.H[::-1, ::-1].copy())
    return EdgeSetup(e, dec, P, m, left, right, TT, U, base0, prev_len,
                     fl.shortcuts + fr.shortcuts)


# ------------------------------------------------------------- assignments

def _hub_on(points_ids, D, mst_edges=None):
    """Hub on a vertex list: center minimizes the max distance; every other
    vertex pays its edge towards the center along the given tree (default:
    the list itself as a path)."""
    ids = np.asarray(points_ids, np.int64)
    k = len(ids)
    out = {}
    if k < 2:
        return out
    sub = D[np.ix_(ids, ids)]
    c = int(np.argmin(sub.max(axis=1)))
    out[int(ids[c])] = float(sub[c].max())
    if mst_edges is None:
        for a in range(c):
            out[int(ids[a])] = float(sub[a, a + 1])
        for a in range(c + 1, k):
            out[int(ids[a])] = float(sub[a, a - 1])
        return out
    adj = [[] for _ in range(k)]
    for u, v in mst_edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {c}
    stack = [c]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                out[int(ids[v])] = max(out.get(int(ids[v]), 0.0), float(sub[v, u]))
                stack.append(v)
    return out


def _to_array(d: dict, n: int) -> np.ndarray:
    a = np.zeros(n)
    for k, v in d.items():
        a[k] = max(a[k], v)
    return a


@dataclass
class Candidate:
    tag: str
    params: dict
    ranges: np.ndarray
    cost: float
    valid: bool


def _candidate(tag, params, ranges, D, tol):
    valid = is_strongly_connected(induced_graph(D, ranges, tol))
    return Candidate(tag, params, ranges, float(ranges.sum()), valid)


def hub_solution(instance: Instance, tree: Optional[Tree] = None) -> Candidate:
    D = instance.metric().values
    tree = euclidean_mst(instance.points) if tree is None else tree
    if instance.n == 1:
        return Candidate("i", {}, np.zeros(1), 0.0, True)
    ranges = _to_array(_hub_on(np.arange(instance.n), D, [tuple(e) for e in tree.edges]), instance.n)
    hub = int(np.argmin(D.max(axis=1)))
    return _candidate("i", {"hub": hub}, ranges, D, instance.tol)


def variant_hub_solution(decomp: MstDecomposition) -> Candidate:
    pts = decomp.points
    D = distance_matrix(pts)
    n = len(pts)
    path = decomp.path
    if n == 1:
        return Candidate("ii", {}, np.zeros(1), 0.0, True)
    ends = D[path][:, [path[0], path[-1]]].max(axis=1)
    c = int(np.argmin(ends))
    r = np.zeros(n)
    for a in range(c):
        r[path[a]] = max(r[path[a]], D[path[a], path[a + 1]])
    for a in range(c + 1, len(path)):
        r[path[a]] = max(r[path[a]], D[path[a], path[a - 1]])
    r[path[c]] = max(r[path[c]], float(ends[c]))
    kids = np.flatnonzero(decomp.parent >= 0)
    for u in kids:
        p = decomp.parent[u]
        r[u] = max(r[u], D[u, p])
        r[p] = max(r[p], D[u, p])
    return _candidate("ii", {"center": int(path[c])}, r, D, tolerance(D.max()))


def adjust_g(side: Side, rho_prime, n_points: int, c_s: float = C_S, c_k: float = C_K) -> np.ndarray:
    """Transformation g on one side; rho_prime covers the first l side vertices."""
    rho_prime = np.asarray(rho_prime, float)
    l = len(rho_prime)
    k = side.size
    if l > k:
        raise BadIndices("rho' longer than the side")
    vals = c_k * side.w
    vals[:l] = c_s * rho_prime + c_k * side.w[:l]
    out = np.zeros(n_points)
    out[side.pts] = vals
    _stage2(side, out, c_k)
    return out


def _stage2(side: Side, out: np.ndarray, c_k: float):
    k = side.size
    for j in range(k):
        thr = c_k * side.w[j]
        if thr <= 0:
            continue
        hit = side.near[j] <= thr
        lo = np.flatnonzero(hit[:j])
        hi = np.flatnonzero(hit[j + 1:])
        jm = int(lo[0]) if len(lo) else j
        jp = j + 1 + int(hi[-1]) if len(hi) else j
        for a in range(jm, j):
            u = side.pts[a]
            out[u] = max(out[u], side.steps[a])
        for a in range(j + 1, jp + 1):
            u = side.pts[a]
            out[u] = max(out[u], side.steps[a - 1])


def side_rho_prime(side: Side, count: int) -> np.ndarray:
    """Exact 1D solution under h_S on the first `count` side vertices."""
    if count < 2:
        return np.zeros(count)
    k = side.size
    Hr = side.H[::-1, ::-1]
    lr = reconstruct(Hr, side.dp, start=k - count)
    rr = np.maximum(lr.left, lr.right)[::-1]
    return rr[:count]


def _side_tables(side: Side, D: np.ndarray, n: int):
    """Per prefix count c = 1..size: assignments for iii (path hub), iii (MST
    hub) and iv."""
    k = side.size
    tabs = {"iii-path": np.zeros((k, n)), "iii-mst": np.zeros((k, n)), "iv": np.zeros((k, n))}
    g_fixed = np.zeros(n)
    g_fixed[side.pts] = C_K * side.w
    _stage2(side, g_fixed, C_K)
    for c in range(1, k + 1):
        ids = side.pts[:c]
        tabs["iii-path"][c - 1] = _to_array(_hub_on(ids, D), n)
        if c >= 2:
            t = _prim(D[np.ix_(ids, ids)])
            tabs["iii-mst"][c - 1] = _to_array(_hub_on(ids, D, [tuple(e) for e in t.edges]), n)
        rp = side_rho_prime(side, c)
        g = g_fixed.copy()
        g[ids] = np.maximum(g[ids], C_S * rp + C_K * side.w[:c])
        tabs["iv"][c - 1] = g
    return tabs


def middle_fixture(setup: EdgeSetup, l: int, lp: int, rp: int, r: int, D: np.ndarray) -> np.ndarray:
    """Trees to roots, P_x = (p_l..p_r) directed to p_l, plus the cheaper
    crossing: edge (p_l, p_r) or the two tree-to-tree edges."""
    m, z = setup.m, len(setup.P)
    if not (0 <= l <= lp < m <= rp <= r < z):
        raise BadIndices(f"need l <= l' < {m} <= r' <= r < {z}")
    out = setup.base0.copy()
    P = setup.P
    for a in range(l + 1, r + 1):
        out[P[a]] = max(out[P[a]], setup.prev_len[a])
    _crossing(setup, out, l, lp, rp, r, D)
    return out


def _crossing(setup, out, l, lp, rp, r, D):
    P = setup.P
    d_lr = D[P[l], P[r]]
    dx, dy = setup.TT[l, rp], setup.TT[lp, r]
    if d_lr <= dx + dy:
        out[P[l]] = max(out[P[l]], d_lr)
    else:
        x, y = setup.U[l, rp], setup.U[lp, r]
        out[x] = max(out[x], dx)
        out[y] = max(out[y], dy)


def approx_cap() -> int:
    v = os.environ.get("RANGEKIT_CAP")
    return int(v) if v else APPROX_CAP


def solve_approx(instance: Instance, cap: Optional[int] = None, collect: bool = False) -> Solution:
    t0 = time.perf_counter()
    if instance.alpha != 1:
        raise AlphaUnsupported("the approximation is defined for alpha = 1 only")
    n = instance.n
    if n == 1:
        return Solution("approx", 0.0, np.zeros(1), True, params={"tag": "i"})
    cap = approx_cap() if cap is None else cap
    D = instance.metric().values
    tol = instance.tol
    tree = euclidean_mst(instance.points)
    path = weighted_diameter_path(tree)
    decomp = decompose(tree, path, instance.points)
    cand_i = hub_solution(instance, tree)
    cand_ii = variant_hub_solution(decomp)
    heap = []
    for c in (cand_i, cand_ii):
        heapq.heappush(heap, (c.cost, TAG_RANK[c.tag], (), 0, ("fixed", c)))
    fallback = n > cap
    setups = []
    if not fallback:
        for e in range(len(path) - 1):
            s = setup_edge(decomp, e, D)
            setups.append(s)
            _push_groups(heap, s, len(setups) - 1, D, n)
    meta = {"mst": tree, "decomp": decomp, "setups": setups if collect else None,
            "hub": cand_i, "variant_hub": cand_ii}
    while heap:
        cost, rank, params, var, item = heapq.heappop(heap)
        if item[0] == "fixed":
            c = item[1]
            if c.valid:
                return _result(c.tag, dict(c.params), c.ranges, c.valid, fallback, t0, meta)
            continue
        _, si, l, r, X, C, tabs = item
        s = setups[si]
        a, b = divmod(int(np.argmin(C)), C.shape[1])
        lp, rp = l + a, s.m + b
        ranges = _group_base(s, l, r, tabs, D, n)
        _crossing(s, ranges, l, lp, rp, r, D)
        if is_strongly_connected(induced_graph(D, ranges, tol)):
            tag = "iii" if X.startswith("iii") else "iv"
            params = {"e": s.e, "l": l, "l'": lp, "r'": rp, "r": r}
            if tag == "iii":
                params["hub"] = X.split("-")[1]
            return _result(tag, params, ranges, True, fallback, t0, meta)
        C = C.copy()
        C[a, b] = np.inf
        if np.isfinite(C).any():
            a, b = divmod(int(np.argmin(C)), C.shape[1])
            heapq.heappush(heap, (float(C[a, b]), rank, (s.e, l, l + a, s.m + b, r), var,
                                  ("group", si, l, r, X, C, tabs)))
    raise RuntimeError("no valid candidate")  # pragma: no cover - i is always valid


def _result(tag, params, ranges, valid, fallback, t0, meta):
    params = dict(params)
    params["tag"] = tag
    params["fallback"] = fallback
    return Solution("approx", float(ranges.sum()), ranges, valid, params=params,
                    elapsed_ms=(time.perf_counter() - t0) * 1e3, meta=meta)


_VARIANTS = (("iii-path", 0), ("iii-mst", 1), ("iv", 0))


def _group_base(s: EdgeSetup, l, r, tabs, D, n):
    z = len(s.P)
    lt, rt = tabs
    base = np.maximum(s.base0, np.maximum(lt[l], rt[z - 1 - r]))
    idx = s.P[l + 1:r + 1]
    base[idx] = np.maximum(base[idx], s.prev_len[l + 1:r + 1])
    return base


def _push_groups(heap, s: EdgeSetup, si, D, n):
    z, m = len(s.P), s.m
    lt = _side_tables(s.left, D, n)
    rt = _side_tables(s.right, D, n)
    P = s.P
    for X, var in _VARIANTS:
        rank = TAG_RANK["iii" if X.startswith("iii") else "iv"]
        tabs = (lt[X], rt[X])
        for l in range(m):
            for r in range(m, z):
                base = _group_base(s, l, r, tabs, D, n)
                rps = np.arange(m, r + 1)
                lps = np.arange(l, m)
                C = kernels.crossing_costs(base, float(base.sum()), int(P[l]), float(D[P[l], P[r]]),
                                           np.ascontiguousarray(s.U[l, rps]), np.ascontiguousarray(s.TT[l, rps]),
                                           np.ascontiguousarray(s.U[lps, r]), np.ascontiguousarray(s.TT[lps, r]))
                a, b = divmod(int(np.argmin(C)), C.shape[1])
                heapq.heappush(heap, (float(C[a, b]), rank, (s.e, l, l + a, m + b, r), var,
                                      ("group", si, l, r, X, C, tabs)))
