"""Compiled inner loops over table-backed fields (l <= 8).

All kernels take the field as a multiplication table ``mul`` (2^l x 2^l),
the q-power table ``frobq`` (x -> x^q) and, where division is needed, the
inverse table ``inv``.  Biprojective functions are rows of 8 coefficients
``(a0, b0, c0, d0, a1, b1, c1, d1)``.  Points u of P^1(L) are visited in
the order 0, INF, 1, 2, ..., 2^l - 1; position ``p`` maps to ``u = p - 1``
for ``p >= 2``.

Stratum codes: 0 = D0, 1 = D1, 2 = Pi0, 3 = Pi1, 4 = Pi2, 5 = Pi(2^delta + 1).
"""

import os

import numpy as np
from numba import config, njit, prange

if "NUMBA_THREADING_LAYER" not in os.environ:
    # the workqueue layer is always available; avoids probing an old TBB
    config.THREADING_LAYER = "workqueue"

STRATUM_CODES = ("D0", "D1", "Pi0", "Pi1", "Pi2", "PiDeltaPlus1")


@njit(cache=True, inline="always")
def _hibit(v):
    h = -1
    while v:
        v >>= 1
        h += 1
    return h


@njit(cache=True, inline="always")
def _delta_coeffs(a, b, c, d, pos, mul, frobq):
    # coefficients (A, B, C, D) of A x^q + B x + C y^q + D y
    if pos == 1:
        return a, a, c, b
    u = 0 if pos == 0 else pos - 1
    uq = frobq[u]
    return mul[a, u] ^ b, mul[a, uq] ^ c, mul[c, u] ^ d, mul[b, uq] ^ d


@njit(cache=True, inline="always")
def _form_at(A, B, C, D, x, y, mul, frobq):
    return mul[A, frobq[x]] ^ mul[B, x] ^ mul[C, frobq[y]] ^ mul[D, y]


@njit(cache=True)
def _rank_is_full_minus_one(cols, m, nbits, basis):
    """True iff the m vectors in cols[:m] have rank exactly m - 1."""
    for i in range(nbits):
        basis[i] = 0
    deps = 0
    for i in range(m):
        v = cols[i]
        while v:
            h = _hibit(v)
            if basis[h] == 0:
                basis[h] = v
                break
            v ^= basis[h]
        if v == 0:
            deps += 1
            if deps > 1:
                return False
    return deps == 1


# ---------- APN tests on batches

@njit(cache=True)
def apn_projective_batch(coeffs, l, mul, frobq, out):
    """Joint kernel of (Delta_u^f, Delta_u^g) must have size 2 for every u."""
    n = 1 << l
    nl = 2 * l
    cols = np.zeros(nl, dtype=np.int64)
    basis = np.zeros(nl, dtype=np.int64)
    for r in range(coeffs.shape[0]):
        a0, b0, c0, d0 = coeffs[r, 0], coeffs[r, 1], coeffs[r, 2], coeffs[r, 3]
        a1, b1, c1, d1 = coeffs[r, 4], coeffs[r, 5], coeffs[r, 6], coeffs[r, 7]
        ok = True
        for pos in range(n + 1):
            A0, B0, C0, D0 = _delta_coeffs(a0, b0, c0, d0, pos, mul, frobq)
            A1, B1, C1, D1 = _delta_coeffs(a1, b1, c1, d1, pos, mul, frobq)
            for i in range(nl):
                e = 1 << i
                x = e & (n - 1)
                y = e >> l
                cols[i] = (_form_at(A0, B0, C0, D0, x, y, mul, frobq)
                           | (_form_at(A1, B1, C1, D1, x, y, mul, frobq) << l))
            if not _rank_is_full_minus_one(cols, nl, nl, basis):
                ok = False
                break
        out[r] = ok


@njit(cache=True)
def _fill_truth_table(a0, b0, c0, d0, a1, b1, c1, d1, l, mul, frobq, T):
    n = 1 << l
    for y in range(n):
        yq = frobq[y]
        yq1 = mul[yq, y]
        for x in range(n):
            xq = frobq[x]
            m1 = mul[xq, x]
            m2 = mul[xq, y]
            m3 = mul[x, yq]
            fv = mul[a0, m1] ^ mul[b0, m2] ^ mul[c0, m3] ^ mul[d0, yq1]
            gv = mul[a1, m1] ^ mul[b1, m2] ^ mul[c1, m3] ^ mul[d1, yq1]
            T[x | (y << l)] = fv | (gv << l)


@njit(cache=True)
def apn_naive_batch(coeffs, l, mul, frobq, out):
    """Every derivative z -> F(z) + F(z + a) + F(a) + F(0) must have a kernel of size 2."""
    n = 1 << l
    nl = 2 * l
    N = n * n
    T = np.zeros(N, dtype=np.int64)
    cols = np.zeros(nl, dtype=np.int64)
    basis = np.zeros(nl, dtype=np.int64)
    for r in range(coeffs.shape[0]):
        _fill_truth_table(coeffs[r, 0], coeffs[r, 1], coeffs[r, 2], coeffs[r, 3],
                          coeffs[r, 4], coeffs[r, 5], coeffs[r, 6], coeffs[r, 7],
                          l, mul, frobq, T)
        ok = True
        t0 = T[0]
        for a in range(1, N):
            ta = T[a] ^ t0
            for i in range(nl):
                e = 1 << i
                cols[i] = T[e] ^ T[e ^ a] ^ ta
            if not _rank_is_full_minus_one(cols, nl, nl, basis):
                ok = False
                break
        out[r] = ok


# ---------- the classification scan: f fixed, g over all of V

@njit(cache=True)
def kernel_bases_for_f(a, b, c, d, l, mul, frobq):
    """Kernel bases of Delta_u^f for every u, as 2l-bit vectors x | y << l.

    Returns (K, dims): K[pos, :dims[pos]] spans ker Delta_u^f.
    """
    n = 1 << l
    nl = 2 * l
    K = np.zeros((n + 1, nl), dtype=np.int64)
    dims = np.zeros(n + 1, dtype=np.int64)
    bv = np.zeros(l, dtype=np.int64)
    bc = np.zeros(l, dtype=np.int64)
    for pos in range(n + 1):
        A, B, C, D = _delta_coeffs(a, b, c, d, pos, mul, frobq)
        for i in range(l):
            bv[i] = 0
            bc[i] = 0
        m = 0
        for i in range(nl):
            e = 1 << i
            v = _form_at(A, B, C, D, e & (n - 1), e >> l, mul, frobq)
            combo = e
            while v:
                h = _hibit(v)
                if bv[h] == 0:
                    bv[h] = v
                    bc[h] = combo
                    break
                v ^= bv[h]
                combo ^= bc[h]
            if v == 0:
                K[pos, m] = combo
                m += 1
        dims[pos] = m
    return K, dims


@njit(cache=True, parallel=True)
def scan_g_for_fixed_f(K, dims, l, start, count, mul, frobq, out, nchunks):
    """out[j] = 1 iff (f, g) is APN, g = start + j encoded as a<<3l | b<<2l | c<<l | d.

    Uses ker(Delta_u^f): the joint kernel is Delta_u^g restricted to it, and
    (u, 1) always lies in the joint kernel, so APN at u means that
    restriction has rank dims[u] - 1.
    """
    n = 1 << l
    mask = n - 1
    npos = n + 1
    nl = 2 * l
    # positions that can fail, in visiting order
    active = np.zeros(npos, dtype=np.int64)
    na = 0
    for pos in range(npos):
        if dims[pos] > 1:
            active[na] = pos
            na += 1
    chunk = (count + nchunks - 1) // nchunks
    for ci in prange(nchunks):
        lo = ci * chunk
        hi = min(count, lo + chunk)
        cols = np.zeros(nl, dtype=np.int64)
        basis = np.zeros(nl, dtype=np.int64)
        for j in range(lo, hi):
            g = start + j
            d1 = g & mask
            c1 = (g >> l) & mask
            b1 = (g >> (2 * l)) & mask
            a1 = g >> (3 * l)
            ok = True
            for ai in range(na):
                pos = active[ai]
                A, B, C, D = _delta_coeffs(a1, b1, c1, d1, pos, mul, frobq)
                m = dims[pos]
                for i in range(m):
                    v = K[pos, i]
                    cols[i] = _form_at(A, B, C, D, v & mask, v >> l, mul, frobq)
                if not _rank_is_full_minus_one(cols, m, l, basis):
                    ok = False
                    break
            out[j] = ok


# ---------- strata and pencils

@njit(cache=True)
def stratum_code(a, b, c, d, l, mul, frobq, inv):
    if a == 0 and b == 0 and c == 0 and d == 0:
        return 0
    if a == 0:
        if b == 0 and c == 0:
            return 1
    else:
        w = mul[b, inv[a]]
        wq = frobq[w]
        if c == mul[a, wq] and d == mul[a, mul[wq, w]]:
            return 1
    n = 1 << l
    z = 1 if a == 0 else 0
    for x in range(n):
        xq = frobq[x]
        if (mul[a, mul[xq, x]] ^ mul[b, xq] ^ mul[c, x] ^ d) == 0:
            z += 1
    if z <= 2:
        return 2 + z
    return 5


@njit(cache=True, parallel=True)
def stratum_codes(xs, l, mul, frobq, inv):
    """Stratum code of every encoded form in ``xs``."""
    m = (1 << l) - 1
    out = np.empty(xs.shape[0], dtype=np.int64)
    for i in prange(xs.shape[0]):
        x = xs[i]
        out[i] = stratum_code((x >> (3 * l)) & m, (x >> (2 * l)) & m, (x >> l) & m, x & m, l, mul, frobq, inv)
    return out


@njit(cache=True, parallel=True)
def stratum_histogram(l, mul, frobq, inv, nchunks):
    """Number of forms (a, b, c, d) in V per stratum code, over all of V."""
    N = 1 << (4 * l)
    m = (1 << l) - 1
    per = np.zeros((nchunks, 6), dtype=np.int64)
    step = (N + nchunks - 1) // nchunks
    for ch in prange(nchunks):
        for x in range(ch * step, min(N, (ch + 1) * step)):
            s = stratum_code((x >> (3 * l)) & m, (x >> (2 * l)) & m, (x >> l) & m, x & m, l, mul, frobq, inv)
            per[ch, s] += 1
    return per.sum(axis=0)


@njit(cache=True)
def pencil_signature_batch(coeffs, l, mul, frobq, inv, out):
    """out[r, s] = number of pencil members r f + s g (over P^1) in stratum s."""
    n = 1 << l
    for r in range(coeffs.shape[0]):
        for s in range(6):
            out[r, s] = 0
        a0, b0, c0, d0 = coeffs[r, 0], coeffs[r, 1], coeffs[r, 2], coeffs[r, 3]
        a1, b1, c1, d1 = coeffs[r, 4], coeffs[r, 5], coeffs[r, 6], coeffs[r, 7]
        for s in range(n):
            code = stratum_code(a0 ^ mul[s, a1], b0 ^ mul[s, b1], c0 ^ mul[s, c1], d0 ^ mul[s, d1],
                                l, mul, frobq, inv)
            out[r, code] += 1
        out[r, stratum_code(a1, b1, c1, d1, l, mul, frobq, inv)] += 1


# ---------- right-action search for GL(2, L) x GL(2, L) equivalence

@njit(cache=True, inline="always")
def _act(a, b, c, d, t, u, v, w, mul, frobq):
    tq = frobq[t]
    uq = frobq[u]
    vq = frobq[v]
    wq = frobq[w]
    a2 = mul[a, mul[tq, t]] ^ mul[b, mul[tq, v]] ^ mul[c, mul[t, vq]] ^ mul[d, mul[vq, v]]
    b2 = mul[a, mul[tq, u]] ^ mul[b, mul[tq, w]] ^ mul[c, mul[u, vq]] ^ mul[d, mul[vq, w]]
    c2 = mul[a, mul[t, uq]] ^ mul[b, mul[uq, v]] ^ mul[c, mul[t, wq]] ^ mul[d, mul[v, wq]]
    d2 = mul[a, mul[uq, u]] ^ mul[b, mul[uq, w]] ^ mul[c, mul[u, wq]] ^ mul[d, mul[wq, w]]
    return a2, b2, c2, d2


@njit(cache=True)
def _in_span(h0, h1, h2, h3, basis, pivots, r, mul):
    h = np.empty(4, dtype=np.int64)
    h[0] = h0
    h[1] = h1
    h[2] = h2
    h[3] = h3
    for i in range(r):
        coef = h[pivots[i]]
        if coef:
            for j in range(4):
                h[j] ^= mul[coef, basis[i, j]]
    return h[0] == 0 and h[1] == 0 and h[2] == 0 and h[3] == 0


@njit(cache=True)
def _pair_rank(p0, p1, p2, p3, q0, q1, q2, q3, mul):
    pz = p0 == 0 and p1 == 0 and p2 == 0 and p3 == 0
    qz = q0 == 0 and q1 == 0 and q2 == 0 and q3 == 0
    if pz and qz:
        return 0
    if pz or qz:
        return 1
    p = (p0, p1, p2, p3)
    q = (q0, q1, q2, q3)
    for i in range(4):
        for j in range(i + 1, 4):
            if mul[p[i], q[j]] != mul[p[j], q[i]]:
                return 2
    return 1


@njit(cache=True)
def right_candidates(a, b, c, d, basis, pivots, r, l, mul, frobq):
    """All PGL(2, L) matrices M (v = 1 or (v, w) = (0, 1)) with f o M in the span."""
    n = 1 << l
    total = n * (n * n - 1)
    out = np.zeros((total, 4), dtype=np.int64)
    cnt = 0
    for t in range(1, n):
        for u in range(n):
            a2, b2, c2, d2 = _act(a, b, c, d, t, u, 0, 1, mul, frobq)
            if _in_span(a2, b2, c2, d2, basis, pivots, r, mul):
                out[cnt, 0] = t
                out[cnt, 1] = u
                out[cnt, 2] = 0
                out[cnt, 3] = 1
                cnt += 1
    for t in range(n):
        for w in range(n):
            tw = mul[t, w]
            for u in range(n):
                if u == tw:
                    continue
                a2, b2, c2, d2 = _act(a, b, c, d, t, u, 1, w, mul, frobq)
                if _in_span(a2, b2, c2, d2, basis, pivots, r, mul):
                    out[cnt, 0] = t
                    out[cnt, 1] = u
                    out[cnt, 2] = 1
                    out[cnt, 3] = w
                    cnt += 1
    return out[:cnt].copy()


@njit(cache=True)
def match_candidates(f4, G, cands, basis, pivots, r, mul, frobq, out):
    """out[i] = index of the first candidate M with span{f o M, G[i] o M} = span, else -1."""
    nc = cands.shape[0]
    FM = np.zeros((nc, 4), dtype=np.int64)
    for ci in range(nc):
        FM[ci, 0], FM[ci, 1], FM[ci, 2], FM[ci, 3] = _act(
            f4[0], f4[1], f4[2], f4[3], cands[ci, 0], cands[ci, 1], cands[ci, 2], cands[ci, 3], mul, frobq)
    for i in range(G.shape[0]):
        out[i] = -1
        for ci in range(nc):
            t, u, v, w = cands[ci, 0], cands[ci, 1], cands[ci, 2], cands[ci, 3]
            a2, b2, c2, d2 = _act(G[i, 0], G[i, 1], G[i, 2], G[i, 3], t, u, v, w, mul, frobq)
            if not _in_span(a2, b2, c2, d2, basis, pivots, r, mul):
                continue
            if _pair_rank(FM[ci, 0], FM[ci, 1], FM[ci, 2], FM[ci, 3], a2, b2, c2, d2, mul) == r:
                out[i] = ci
                break


# ---------- orbits of V and bulk transforms

@njit(cache=True)
def _find(parent, i):
    root = i
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        nxt = parent[i]
        parent[i] = root
        i = nxt
    return root


@njit(cache=True)
def _encode(a, b, c, d, l):
    return (((a << l) | b) << l | c) << l | d


@njit(cache=True)
def orbit_roots(l, mats, gamma, mul, frobq):
    """Smallest encoding in the orbit of every q-biprojective polynomial.

    The group is generated by scaling by ``gamma`` and the right action of
    the matrices in ``mats`` (rows t, u, v, w).
    """
    n = 1 << l
    mask = n - 1
    N = n * n * n * n
    parent = np.arange(N, dtype=np.int64)
    for i in range(N):
        d = i & mask
        c = (i >> l) & mask
        b = (i >> (2 * l)) & mask
        a = i >> (3 * l)
        for g in range(mats.shape[0] + 1):
            if g == mats.shape[0]:
                j = _encode(mul[gamma, a], mul[gamma, b], mul[gamma, c], mul[gamma, d], l)
            else:
                a2, b2, c2, d2 = _act(a, b, c, d, mats[g, 0], mats[g, 1], mats[g, 2], mats[g, 3], mul, frobq)
                j = _encode(a2, b2, c2, d2, l)
            ri = _find(parent, i)
            rj = _find(parent, j)
            if ri < rj:
                parent[rj] = ri
            elif rj < ri:
                parent[ri] = rj
    for i in range(N):
        parent[i] = _find(parent, i)
    return parent


@njit(cache=True)
def act_encoded(gs, alpha, t, u, v, w, l, mul, frobq):
    """alpha * g o M for every encoded g in ``gs``."""
    mask = (1 << l) - 1
    out = np.empty_like(gs)
    for i in range(gs.shape[0]):
        x = gs[i]
        a2, b2, c2, d2 = _act(x >> (3 * l), (x >> (2 * l)) & mask, (x >> l) & mask, x & mask,
                              t, u, v, w, mul, frobq)
        out[i] = _encode(mul[alpha, a2], mul[alpha, b2], mul[alpha, c2], mul[alpha, d2], l)
    return out
