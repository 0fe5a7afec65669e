"""Pure-numpy versions of the kernels in _kernels_nb (selected with
RANGEKIT_NO_NUMBA=1). Loops are vectorized where the recurrences allow it."""
import numpy as np


def sum_table(gpow):
    n = gpow.shape[0] + 1
    P = np.concatenate(([0.0], np.cumsum(gpow)))
    S = P[None, :] - P[:, None]
    return np.triu(S)


def cubic_dp(S, hpow):
    n = hpow.shape[0]
    T = np.zeros(n)
    bk = np.full(n, -1, np.int64)
    bkp = np.full(n, -1, np.int64)
    if n < 2:
        return T, bk, bkp
    T[n - 2] = 2.0 * hpow[n - 2, n - 1]
    gap = np.zeros(n)
    gap[1:] = np.diagonal(hpow, 1)  # gap[kp] = h(kp-1, kp)
    idx = np.arange(n)
    for i in range(n - 3, -1, -1):
        ks = idx[i + 1:n - 1]
        kps = idx[i + 2:n]
        # tail[kp] = S[i, kp-1] + T[kp-1] - h(kp-1, kp)
        tail = S[i, kps - 1] + T[kps - 1] - gap[kps]
        hh = np.maximum(hpow[i, ks][:, None], hpow[np.ix_(ks, kps)])
        V = hh + tail[None, :]
        V[kps[None, :] <= ks[:, None]] = np.inf
        a = int(np.argmin(V))
        r, c = divmod(a, V.shape[1])
        T[i] = V[r, c]
        bk[i] = ks[r]
        bkp[i] = kps[c]
    return T, bk, bkp


def midpoint_index(xs, i, kp):
    mid = 0.5 * (xs[i] + xs[kp])
    a = int(np.searchsorted(xs[i + 1:kp], mid, "left")) + i + 1
    best, bv = -1, np.inf
    for k in (a - 1, a):
        if k < i + 1 or k > kp - 1:
            continue
        v = max(xs[k] - xs[i], xs[kp] - xs[k])
        if v < bv:
            bv, best = v, k
    return best


def _midpoints(xs, i):
    # vectorized midpoint_index(xs, i, kp) for every kp >= i + 2
    n = xs.shape[0]
    kps = np.arange(i + 2, n)
    mid = 0.5 * (xs[i] + xs[kps])
    a = np.searchsorted(xs, mid, "left")
    a = np.clip(a, i + 1, kps - 1)
    b = np.clip(a - 1, i + 1, kps - 1)
    va = np.maximum(xs[a] - xs[i], xs[kps] - xs[a])
    vb = np.maximum(xs[b] - xs[i], xs[kps] - xs[b])
    # b <= a, so b wins ties
    return kps, np.where(vb <= va, b, a)


def quadratic_dp(xs, alpha, gpow):
    n = xs.shape[0]
    T = np.zeros(n)
    bk = np.full(n, -1, np.int64)
    bkp = np.full(n, -1, np.int64)
    if n < 2:
        return T, bk, bkp
    T[n - 2] = 2.0 * gpow[n - 2]
    for i in range(n - 3, -1, -1):
        kps, ks = _midpoints(xs, i)
        hh = np.maximum(xs[ks] - xs[i], xs[kps] - xs[ks]) ** alpha
        # running gap sums from i
        V = np.cumsum(gpow[i:n - 2]) + T[kps - 1] - gpow[kps - 1] + hh
        c = int(np.argmin(V))
        T[i] = V[c]
        bk[i] = ks[c]
        bkp[i] = kps[c]
    return T, bk, bkp


def reach_all(adj, src, forward):
    A = adj if forward else adj.T
    n = A.shape[0]
    seen = np.zeros(n, bool)
    seen[src] = True
    frontier = seen.copy()
    while frontier.any():
        new = A[frontier].any(axis=0) & ~seen
        seen |= new
        frontier = new
    return bool(seen.all())


def strongly_connected(adj):
    if adj.shape[0] <= 1:
        return True
    return reach_all(adj, 0, True) and reach_all(adj, 0, False)


def floyd_warshall(W):
    D = W.copy()
    for k in range(D.shape[0]):
        np.minimum(D, D[:, k:k + 1] + D[k:k + 1, :], out=D)
    return D


def _feasible(rho, d, t, tol, spanner):
    n = d.shape[0]
    adj = rho[:, None] >= d - tol
    np.fill_diagonal(adj, False)
    if not spanner:
        return strongly_connected(adj)
    W = np.where(adj, d, np.inf)
    np.fill_diagonal(W, 0.0)
    D = floyd_warshall(W)
    return bool((D <= t * d + tol).all())


def brute_search(cands, counts, d, alpha, t, tol, spanner, bound):
    n = d.shape[0]
    best = bound
    bestrho = np.full(n, -1.0)
    rho = np.zeros(n)
    pw = cands ** alpha
    minrest = np.concatenate((np.cumsum(pw[::-1, 0])[::-1], [0.0]))
    idx = np.zeros(n, np.int64)
    partial = np.zeros(n + 1)
    depth = 0
    idx[0] = -1
    while depth >= 0:
        idx[depth] += 1
        if idx[depth] >= counts[depth]:
            depth -= 1
            continue
        c = partial[depth] + pw[depth, idx[depth]]
        if c + minrest[depth + 1] >= best:
            depth -= 1
            continue
        rho[depth] = cands[depth, idx[depth]]
        partial[depth + 1] = c
        if depth == n - 1:
            if _feasible(rho, d, t, tol, spanner):
                best = c
                bestrho[:] = rho
        else:
            depth += 1
            idx[depth] = -1
    return best, bestrho


def crossing_costs(base, base_cost, l_pt, d_lr, ux, dx, uy, dy):
    two = dx[None, :] + dy[:, None]
    single = base_cost + max(d_lr - base[l_pt], 0.0)
    gx = np.maximum(dx - base[ux], 0.0)[None, :]
    gy = np.maximum(dy - base[uy], 0.0)[:, None]
    both = base_cost + gx + gy
    same = ux[None, :] == uy[:, None]
    if same.any():
        m = np.maximum(dx[None, :], dy[:, None])
        shared = base_cost + np.maximum(m - base[ux][None, :], 0.0)
        both = np.where(same, shared, both)
    return np.where(d_lr <= two, single, both)
