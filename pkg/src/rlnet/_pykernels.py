"""Pure-Python twins of the compiled kernels in ``_ckernels.pyx``.

Same signatures, same loop and summation order, so both backends agree to
the last bit on the same inputs.
"""

from math import exp, sqrt

import numpy as np

TIE_EPS = 1e-12


def betweenness_csr(indptr, indices, n):
    indptr = [int(x) for x in indptr]
    indices = [int(x) for x in indices]
    cb = [0.0] * n
    if n < 3:
        return np.zeros(n)
    for s in range(n):
        if indptr[s + 1] == indptr[s]:
            continue
        dist = [-1] * n
        sigma = [0.0] * n
        delta = [0.0] * n
        dist[s] = 0
        sigma[s] = 1.0
        order = [s]
        head = 0
        while head < len(order):
            v = order[head]
            head += 1
            dv = dist[v]
            for i in range(indptr[v], indptr[v + 1]):
                w = indices[i]
                if dist[w] < 0:
                    dist[w] = dv + 1
                    order.append(w)
                if dist[w] == dv + 1:
                    sigma[w] += sigma[v]
        for p in range(len(order) - 1, 0, -1):
            w = order[p]
            coeff = (1.0 + delta[w]) / sigma[w]
            dw = dist[w] - 1
            for i in range(indptr[w], indptr[w + 1]):
                v = indices[i]
                if dist[v] == dw:
                    delta[v] += sigma[v] * coeff
            cb[w] += delta[w]
    return np.array(cb) * 0.5


def coreness_fixed_point(adj, c, tol, max_iter):
    n = adj.shape[0]
    rows = [list(map(float, adj[i])) for i in range(n)]
    cl = [float(x) for x in c]
    it = max_iter
    for sweep in range(1, max_iter + 1):
        ss = 0.0
        for j in range(n):
            ss += cl[j] * cl[j]
        change = 0.0
        scale = 0.0
        for i in range(n):
            row = rows[i]
            num = 0.0
            for j in range(n):
                if j != i:
                    num += row[j] * cl[j]
            old = cl[i]
            den = ss - old * old
            new = num / den if den > 0.0 else 0.0
            cl[i] = new
            ss += new * new - old * old
            if abs(new - old) > change:
                change = abs(new - old)
            if abs(new) > scale:
                scale = abs(new)
        if scale == 0.0 or change <= tol * scale:
            it = sweep
            break
    c[:] = cl
    return it


def partition_fit(k, a, b, n):
    n1 = k * (k - 1) / 2.0
    n0 = (n - k) * (n - k - 1) / 2.0
    tot = n1 + n0
    s = float(a + b)
    den2 = n1 * n0 * s * (tot - s)
    if den2 <= 0.0:
        return 1.0 if (a == int(n1) and b == 0) else 0.0
    return (tot * a - s * n1) / sqrt(den2)


def _neighbors(adj):
    n = adj.shape[0]
    return [[u for u in range(n) if u != v and adj[v, u]] for v in range(n)]


def cp_exhaustive(adj):
    n = adj.shape[0]
    nbrs = _neighbors(adj)
    deg = [len(x) for x in nbrs]
    m = sum(deg) // 2
    kc = [0] * n
    fit = partition_fit
    mask = best_mask = 0
    k = a = best_k = 0
    b = m
    best = fit(0, 0, m, n)
    for i in range(1, 1 << n):
        v = (i & -i).bit_length() - 1
        if (mask >> v) & 1:
            a -= kc[v]
            b += deg[v] - kc[v]
            k -= 1
            d = -1
        else:
            a += kc[v]
            b -= deg[v] - kc[v]
            k += 1
            d = 1
        mask ^= 1 << v
        for u in nbrs[v]:
            kc[u] += d
        f = fit(k, a, b, n)
        if f > best + TIE_EPS:
            best, best_mask, best_k = f, mask, k
        elif f >= best - TIE_EPS:
            if k < best_k:
                best, best_mask, best_k = f, mask, k
            elif k == best_k:
                diff = mask ^ best_mask
                if mask & diff & -diff:
                    best, best_mask, best_k = f, mask, k
    return best_mask, float(best)


def _lex_smaller(x, y):
    for xv, yv in zip(x, y):
        if xv != yv:
            return xv == 1
    return False


def _state(nbrs, cur):
    n = len(cur)
    kc = [sum(cur[u] for u in nbrs[v]) for v in range(n)]
    k = sum(cur)
    a = sum(kc[v] for v in range(n) if cur[v]) // 2
    b = sum(len(nbrs[v]) - kc[v] for v in range(n) if not cur[v]) // 2
    return kc, k, a, b


def cp_anneal(adj, init, flips, uniforms, temps):
    n = adj.shape[0]
    nbrs = _neighbors(adj)
    deg = [len(x) for x in nbrs]
    fit = partition_fit
    cur = [int(x) for x in init]
    best_assign = list(cur)
    kc, k, a, b = _state(nbrs, cur)
    f = fit(k, a, b, n)
    best, best_k = f, k

    for v, u_, T in zip(flips.tolist(), uniforms.tolist(), temps.tolist()):
        if cur[v]:
            nk, na, nb = k - 1, a - kc[v], b + deg[v] - kc[v]
        else:
            nk, na, nb = k + 1, a + kc[v], b - (deg[v] - kc[v])
        nf = fit(nk, na, nb, n)
        if nf >= f or u_ < exp((nf - f) / T):
            d = -1 if cur[v] else 1
            cur[v] = 1 - cur[v]
            for u in nbrs[v]:
                kc[u] += d
            k, a, b, f = nk, na, nb, nf
            if f > best + TIE_EPS or (f >= best - TIE_EPS and (
                    k < best_k or (k == best_k and _lex_smaller(cur, best_assign)))):
                best, best_k = f, k
                best_assign = list(cur)

    cur = list(best_assign)
    kc, k, a, b = _state(nbrs, cur)
    f = fit(k, a, b, n)
    while True:
        bv, bf = -1, f
        for v in range(n):
            if cur[v]:
                nf = fit(k - 1, a - kc[v], b + deg[v] - kc[v], n)
            else:
                nf = fit(k + 1, a + kc[v], b - (deg[v] - kc[v]), n)
            if nf > bf + TIE_EPS:
                bv, bf = v, nf
        if bv < 0:
            break
        v = bv
        if cur[v]:
            k, a, b = k - 1, a - kc[v], b + deg[v] - kc[v]
        else:
            k, a, b = k + 1, a + kc[v], b - (deg[v] - kc[v])
        d = -1 if cur[v] else 1
        cur[v] = 1 - cur[v]
        for u in nbrs[v]:
            kc[u] += d
        f = bf
    if f > best + TIE_EPS:
        best_assign = cur
        best = f
    return np.array(best_assign, dtype=np.uint8), float(best)
