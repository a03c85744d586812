# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. ``_pykernels`` mirrors every function here."""

import numpy as np

from libc.math cimport sqrt, exp, fabs

cdef double TIE_EPS = 1e-12


def betweenness_csr(const long long[:] indptr, const long long[:] indices, Py_ssize_t n):
    """Unnormalized Brandes betweenness of an undirected CSR graph."""
    cb_arr = np.zeros(n, dtype=np.float64)
    cdef double[:] cb = cb_arr
    if n < 3:
        return cb_arr
    cdef long long[:] dist = np.empty(n, dtype=np.int64)
    cdef double[:] sigma = np.empty(n, dtype=np.float64)
    cdef double[:] delta = np.empty(n, dtype=np.float64)
    cdef long long[:] order = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t s, v, w, i, head, tail, p
    cdef double coeff
    for s in range(n):
        if indptr[s + 1] == indptr[s]:
            continue
        for v in range(n):
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head = 0
        tail = 1
        while head < tail:
            v = order[head]
            head += 1
            for i in range(indptr[v], indptr[v + 1]):
                w = indices[i]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    order[tail] = w
                    tail += 1
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
        # order[] is the BFS visitation order; walk it backwards
        for p in range(tail - 1, 0, -1):
            w = order[p]
            coeff = (1.0 + delta[w]) / sigma[w]
            for i in range(indptr[w], indptr[w + 1]):
                v = indices[i]
                if dist[v] == dist[w] - 1:
                    delta[v] += sigma[v] * coeff
            cb[w] += delta[w]
    for v in range(n):
        cb[v] *= 0.5
    return cb_arr


def coreness_fixed_point(const double[:, :] adj, double[:] c, double tol, long long max_iter):
    """Gauss-Seidel sweeps of c_i <- sum_j A_ij c_j / sum_{j!=i} c_j^2, in place.

    Returns the number of sweeps performed.
    """
    cdef Py_ssize_t n = adj.shape[0]
    cdef Py_ssize_t i, j
    cdef long long it
    cdef double ss, num, den, old, new, change, scale
    for it in range(1, max_iter + 1):
        ss = 0.0
        for j in range(n):
            ss += c[j] * c[j]
        change = 0.0
        scale = 0.0
        for i in range(n):
            num = 0.0
            for j in range(n):
                if j != i:
                    num += adj[i, j] * c[j]
            old = c[i]
            den = ss - old * old
            new = num / den if den > 0.0 else 0.0
            c[i] = new
            ss += new * new - old * old
            if fabs(new - old) > change:
                change = fabs(new - old)
            if fabs(new) > scale:
                scale = fabs(new)
        if scale == 0.0 or change <= tol * scale:
            return it
    return max_iter


cdef inline double cp_fit(long long k, long long a, long long b, long long n) nogil:
    cdef double n1 = k * (k - 1) / 2.0
    cdef double n0 = (n - k) * (n - k - 1) / 2.0
    cdef double tot = n1 + n0
    cdef double s = a + b
    cdef double den2 = n1 * n0 * s * (tot - s)
    if den2 <= 0.0:
        if a == <long long>n1 and b == 0:
            return 1.0
        return 0.0
    return (tot * a - s * n1) / sqrt(den2)


def partition_fit(long long k, long long a, long long b, long long n):
    return cp_fit(k, a, b, n)


def cp_exhaustive(const unsigned char[:, :] adj):
    """Gray-code enumeration of all 2^n core/periphery assignments.

    Returns ``(mask, fit)`` of the best assignment; bit v set means node v
    is in the core.
    """
    cdef Py_ssize_t n = adj.shape[0]
    cdef Py_ssize_t u, v
    cdef long long[:] kc = np.zeros(n, dtype=np.int64)
    cdef long long[:] deg = np.zeros(n, dtype=np.int64)
    cdef long long m = 0
    for v in range(n):
        for u in range(n):
            if u != v and adj[v, u]:
                deg[v] += 1
        m += deg[v]
    m //= 2
    cdef unsigned long long mask = 0, best_mask = 0, total, i, diff, low
    cdef long long k = 0, a = 0, b = m, best_k = 0
    cdef double f, best = cp_fit(0, 0, m, n)
    total = (<unsigned long long>1) << n
    for i in range(1, total):
        v = 0
        while not ((i >> v) & 1):
            v += 1
        if (mask >> v) & 1:
            a -= kc[v]
            b += deg[v] - kc[v]
            k -= 1
            mask ^= (<unsigned long long>1) << v
            for u in range(n):
                if adj[v, u] and u != v:
                    kc[u] -= 1
        else:
            a += kc[v]
            b -= deg[v] - kc[v]
            k += 1
            mask ^= (<unsigned long long>1) << v
            for u in range(n):
                if adj[v, u] and u != v:
                    kc[u] += 1
        f = cp_fit(k, a, b, n)
        if f > best + TIE_EPS:
            best, best_mask, best_k = f, mask, k
        elif f >= best - TIE_EPS:
            if k < best_k:
                best, best_mask, best_k = f, mask, k
            elif k == best_k:
                diff = mask ^ best_mask
                low = diff & (~diff + 1)
                if mask & low:
                    best, best_mask, best_k = f, mask, k
    return int(best_mask), float(best)


cdef inline bint lex_smaller(unsigned char[:] x, unsigned char[:] y, Py_ssize_t n):
    # same core size assumed: the set holding the lowest differing index wins
    cdef Py_ssize_t v
    for v in range(n):
        if x[v] != y[v]:
            return x[v] == 1
    return False


cdef inline void _flip(const unsigned char[:, :] adj, unsigned char[:] cur,
                       long long[:] kc, Py_ssize_t v, Py_ssize_t n):
    cdef Py_ssize_t u
    cdef long long d = -1 if cur[v] else 1
    cur[v] = 1 - cur[v]
    for u in range(n):
        if adj[v, u] and u != v:
            kc[u] += d


def cp_anneal(const unsigned char[:, :] adj, unsigned char[:] init,
              const long long[:] flips, const double[:] uniforms, const double[:] temps):
    """Single-flip simulated annealing followed by steepest-ascent polishing.

    ``flips``, ``uniforms`` and ``temps`` are pre-drawn per step so that the
    result depends only on the caller's random stream.
    """
    cdef Py_ssize_t n = adj.shape[0]
    cdef Py_ssize_t steps = flips.shape[0]
    cdef Py_ssize_t t, u, v, bv
    cdef unsigned char[:] cur = np.array(init, dtype=np.uint8)
    best_arr = np.array(init, dtype=np.uint8)
    cdef unsigned char[:] best_assign = best_arr
    cdef long long[:] kc = np.zeros(n, dtype=np.int64)
    cdef long long[:] deg = np.zeros(n, dtype=np.int64)
    cdef long long m = 0, k = 0, a = 0, b = 0, nk, na, nb, best_k
    cdef double f, nf, best, bf
    for v in range(n):
        for u in range(n):
            if u != v and adj[v, u]:
                deg[v] += 1
                if cur[u]:
                    kc[v] += 1
        m += deg[v]
        if cur[v]:
            k += 1
    m //= 2
    for v in range(n):
        if cur[v]:
            a += kc[v]
        else:
            b += deg[v] - kc[v]
    a //= 2
    b //= 2
    f = cp_fit(k, a, b, n)
    best = f
    best_k = k

    for t in range(steps):
        v = flips[t]
        if cur[v]:
            nk, na, nb = k - 1, a - kc[v], b + deg[v] - kc[v]
        else:
            nk, na, nb = k + 1, a + kc[v], b - (deg[v] - kc[v])
        nf = cp_fit(nk, na, nb, n)
        if nf >= f or uniforms[t] < exp((nf - f) / temps[t]):
            _flip(adj, cur, kc, v, n)
            k, a, b, f = nk, na, nb, nf
            if f > best + TIE_EPS or (f >= best - TIE_EPS and (
                    k < best_k or (k == best_k and lex_smaller(cur, best_assign, n)))):
                best, best_k = f, k
                best_assign[:] = cur

    # steepest ascent from the best state found
    cur[:] = best_assign
    for v in range(n):
        kc[v] = 0
    k = a = b = 0
    for v in range(n):
        for u in range(n):
            if u != v and adj[v, u] and cur[u]:
                kc[v] += 1
        if cur[v]:
            k += 1
    for v in range(n):
        if cur[v]:
            a += kc[v]
        else:
            b += deg[v] - kc[v]
    a //= 2
    b //= 2
    f = cp_fit(k, a, b, n)
    while True:
        bv = -1
        bf = f
        for v in range(n):
            if cur[v]:
                nf = cp_fit(k - 1, a - kc[v], b + deg[v] - kc[v], n)
            else:
                nf = cp_fit(k + 1, a + kc[v], b - (deg[v] - kc[v]), n)
            if nf > bf + TIE_EPS:
                bv, bf = v, nf
        if bv < 0:
            break
        v = bv
        if cur[v]:
            k, a, b = k - 1, a - kc[v], b + deg[v] - kc[v]
        else:
            k, a, b = k + 1, a + kc[v], b - (deg[v] - kc[v])
        _flip(adj, cur, kc, v, n)
        f = bf
    if f > best + TIE_EPS:
        best_assign[:] = cur
        best = f
    return best_arr, float(best)

