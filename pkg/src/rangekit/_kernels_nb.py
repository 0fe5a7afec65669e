"""numba kernels. Each function has a pure-numpy twin in _kernels_np with the
same signature and the same tie-breaking."""
import numpy as np
from numba import njit


@njit(cache=True)
def sum_table(gpow):
    n = gpow.shape[0] + 1
    S = np.zeros((n, n))
    for i in range(n - 1):
        S[i, i + 1] = gpow[i]
        for j in range(i + 2, n):
            S[i, j] = S[i, j - 1] + gpow[j - 1]
    return S


@njit(cache=True)
def cubic_dp(S, hpow):
    # hpow[a, b] is the alpha-th power of the distance; gaps are hpow[m, m+1]
    n = hpow.shape[0]
    T = np.zeros(n)
    bk = np.full(n, -1, np.int64)
    bkp = np.full(n, -1, np.int64)
    if n < 2:
        return T, bk, bkp
    T[n - 2] = 2.0 * hpow[n - 2, n - 1]
    gap = np.empty(n)
    for m in range(n - 1):
        gap[m] = hpow[m, m + 1]
    base = np.empty(n)
    for i in range(n - 3, -1, -1):
        # everything in the sum that does not depend on k, laid out contiguously
        for kp in range(i + 2, n):
            base[kp] = S[i, kp - 1] + T[kp - 1] - gap[kp - 1]
        best = np.inf
        bi = -1
        bj = -1
        for k in range(i + 1, n - 1):
            hik = hpow[i, k]
            for kp in range(k + 1, n):
                hh = hpow[k, kp]
                if hik > hh:
                    hh = hik
                v = base[kp] + hh
                if v < best:
                    best = v
                    bi = k
                    bj = kp
        T[i] = best
        bk[i] = bi
        bkp[i] = bj
    return T, bk, bkp


@njit(cache=True)
def midpoint_index(xs, i, kp):
    # closest interior point to the midpoint of [x_i, x_kp]; ties to smaller index
    mid = 0.5 * (xs[i] + xs[kp])
    lo = i + 1
    hi = kp - 1
    # first index in [lo, hi] with xs >= mid
    a = lo
    b = hi + 1
    while a < b:
        c = (a + b) // 2
        if xs[c] < mid:
            a = c + 1
        else:
            b = c
    best = -1
    bv = np.inf
    for k in (a - 1, a):
        if k < lo or k > hi:
            continue
        v = max(xs[k] - xs[i], xs[kp] - xs[k])
        if v < bv:
            bv = v
            best = k
    return best


@njit(cache=True)
def quadratic_dp(xs, alpha, gpow):
    n = xs.shape[0]
    T = np.zeros(n)
    bk = np.full(n, -1, np.int64)
    bkp = np.full(n, -1, np.int64)
    if n < 2:
        return T, bk, bkp
    T[n - 2] = 2.0 * gpow[n - 2]
    for i in range(n - 3, -1, -1):
        best = np.inf
        bi = -1
        bj = -1
        # the midpoint moves right as kp grows, so one forward pointer replaces
        # the binary search of midpoint_index (same result, O(n) per i)
        a = i + 1
        # running gap sum from i replaces a row of the sum table (O(n) space)
        s = 0.0
        for kp in range(i + 2, n):
            s += gpow[kp - 2]
            mid = 0.5 * (xs[i] + xs[kp])
            while a <= kp - 1 and xs[a] < mid:
                a += 1
            k = -1
            bv = np.inf
            for c in (a - 1, a):
                if c < i + 1 or c > kp - 1:
                    continue
                w = max(xs[c] - xs[i], xs[kp] - xs[c])
                if w < bv:
                    bv = w
                    k = c
            hh = bv ** alpha
            v = s + T[kp - 1] - gpow[kp - 1] + hh
            if v < best:
                best = v
                bi = k
                bj = kp
        T[i] = best
        bk[i] = bi
        bkp[i] = bj
    return T, bk, bkp


@njit(cache=True)
def reach_all(adj, src, forward):
    n = adj.shape[0]
    seen = np.zeros(n, np.bool_)
    stack = np.empty(n, np.int64)
    seen[src] = True
    stack[0] = src
    top = 1
    cnt = 1
    while top > 0:
        top -= 1
        u = stack[top]
        for v in range(n):
            e = adj[u, v] if forward else adj[v, u]
            if e and not seen[v]:
                seen[v] = True
                stack[top] = v
                top += 1
                cnt += 1
    return cnt == n


@njit(cache=True)
def strongly_connected(adj):
    if adj.shape[0] <= 1:
        return True
    return reach_all(adj, 0, True) and reach_all(adj, 0, False)


@njit(cache=True)
def floyd_warshall(W):
    n = W.shape[0]
    D = W.copy()
    for k in range(n):
        for u in range(n):
            duk = D[u, k]
            if duk == np.inf:
                continue
            for v in range(n):
                x = duk + D[k, v]
                if x < D[u, v]:
                    D[u, v] = x
    return D


@njit(cache=True)
def _feasible(rho, d, t, tol, spanner, adj, W):
    n = d.shape[0]
    for u in range(n):
        for v in range(n):
            ok = u != v and rho[u] >= d[u, v] - tol
            adj[u, v] = ok
            if u == v:
                W[u, v] = 0.0
            elif ok:
                W[u, v] = d[u, v]
            else:
                W[u, v] = np.inf
    if not spanner:
        return strongly_connected(adj)
    D = floyd_warshall(W)
    for u in range(n):
        for v in range(n):
            if D[u, v] > t * d[u, v] + tol:
                return False
    return True


@njit(cache=True)
def brute_search(cands, counts, d, alpha, t, tol, spanner, bound):
    """Odometer over per-point candidate radii with branch-and-bound.

    cands[v, :counts[v]] is sorted ascending. Returns (best, rho); rho is all -1
    when nothing beats `bound`."""
    n = d.shape[0]
    best = bound
    bestrho = np.full(n, -1.0)
    rho = np.zeros(n)
    adj = np.zeros((n, n), np.bool_)
    W = np.zeros((n, n))
    minrest = np.zeros(n + 1)
    for v in range(n - 1, -1, -1):
        minrest[v] = minrest[v + 1] + cands[v, 0] ** alpha
    idx = np.zeros(n, np.int64)
    partial = np.zeros(n + 1)
    depth = 0
    idx[0] = -1
    while depth >= 0:
        idx[depth] += 1
        if idx[depth] >= counts[depth]:
            depth -= 1
            continue
        r = cands[depth, idx[depth]]
        c = partial[depth] + r ** alpha
        if c + minrest[depth + 1] >= best:
            # sorted candidates: the rest of this digit cannot do better
            depth -= 1
            continue
        rho[depth] = r
        partial[depth + 1] = c
        if depth == n - 1:
            if _feasible(rho, d, t, tol, spanner, adj, W):
                best = c
                bestrho[:] = rho
        else:
            depth += 1
            idx[depth] = -1
    return best, bestrho


@njit(cache=True)
def crossing_costs(base, base_cost, l_pt, d_lr, ux, dx, uy, dy):
    """Candidate cost for every (l', r') at a fixed (l, r).

    Row a is the a-th choice of l', column b the b-th choice of r'. The rule per
    cell: add edge (p_l, p_r) when |p_l p_r| <= dx[b] + dy[a], else add the two
    tree-to-tree edges ux[b] -> (len dx[b]) and uy[a] -> (len dy[a]). base is the
    merged assignment without crossing edges; ranges merge by max.
    """
    na = uy.shape[0]
    nb = ux.shape[0]
    C = np.empty((na, nb))
    for a in range(na):
        for b in range(nb):
            c = base_cost
            if d_lr <= dx[b] + dy[a]:
                if d_lr > base[l_pt]:
                    c += d_lr - base[l_pt]
            else:
                x = ux[b]
                y = uy[a]
                if x == y:
                    m = dx[b] if dx[b] > dy[a] else dy[a]
                    if m > base[x]:
                        c += m - base[x]
                else:
                    if dx[b] > base[x]:
                        c += dx[b] - base[x]
                    if dy[a] > base[y]:
                        c += dy[a] - base[y]
            C[a, b] = c
    return C
