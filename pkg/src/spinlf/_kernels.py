"""Counting kernels for the residue-ring character sums.

Each kernel returns an int64 count vector indexed by a residue mod q; the
caller turns it into a root-of-unity sum.  Kernels run under numba when it is
importable and SPINLF_NO_NUMBA is unset, otherwise as chunked numpy code.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("SPINLF_NO_NUMBA", "").strip() not in ("", "0", "false", "False")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised with SPINLF_NO_NUMBA=1
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


CHUNK = 1 << 18


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# numba kernels


@njit(cache=True)
def _qnorm(x0, x1, x2, x3, G):
    # n(x) = x^T G x / 2 with G even on the diagonal
    s = (G[0, 0] // 2) * x0 * x0 + (G[1, 1] // 2) * x1 * x1
    s += (G[2, 2] // 2) * x2 * x2 + (G[3, 3] // 2) * x3 * x3
    s += G[0, 1] * x0 * x1 + G[0, 2] * x0 * x2 + G[0, 3] * x0 * x3
    s += G[1, 2] * x1 * x2 + G[1, 3] * x1 * x3 + G[2, 3] * x2 * x3
    return s


@njit(cache=True)
def _norm_counts_nb(G, lam, q):
    counts = np.zeros(q, dtype=np.int64)
    for x0 in range(q):
        for x1 in range(q):
            for x2 in range(q):
                for x3 in range(q):
                    n = _qnorm(x0, x1, x2, x3, G)
                    counts[(lam * n) % q] += 1
    return counts


@njit(cache=True)
def _rank2_counts_nb(G, p, q):
    # X = [[c1, a3], [a3*, c2]], condition c1 c2 = n(a3) mod q; residue of
    # p[0] c1 + p[1] c2 + sum p[2+t] a3_t
    table = np.zeros((q, q), dtype=np.int64)
    for x0 in range(q):
        for x1 in range(q):
            for x2 in range(q):
                for x3 in range(q):
                    n = _qnorm(x0, x1, x2, x3, G) % q
                    t = (p[2] * x0 + p[3] * x1 + p[4] * x2 + p[5] * x3) % q
                    table[n, t] += 1
    counts = np.zeros(q, dtype=np.int64)
    for c1 in range(q):
        for c2 in range(q):
            n = (c1 * c2) % q
            base = p[0] * c1 + p[1] * c2
            for t in range(q):
                k = table[n, t]
                if k:
                    counts[(base + t) % q] += k
    return counts


@njit(cache=True)
def _qmul(x, y, C, out):
    for u in range(4):
        out[u] = 0
    for s in range(4):
        if x[s] != 0:
            for t in range(4):
                if y[t] != 0:
                    xy = x[s] * y[t]
                    for u in range(4):
                        out[u] += xy * C[s, t, u]


@njit(cache=True)
def _qconj(x, K, out):
    for u in range(4):
        out[u] = 0
    for s in range(4):
        for u in range(4):
            out[u] += x[s] * K[s, u]


@njit(cache=True)
def _rank3_counts_nb(C, K, tv, G, p, q, start, stop):
    q2 = q * q
    counts = np.zeros(q, dtype=np.int64)
    dig = np.zeros(15, dtype=np.int64)
    a1 = np.zeros(4, dtype=np.int64)
    a2 = np.zeros(4, dtype=np.int64)
    a3 = np.zeros(4, dtype=np.int64)
    prod = np.zeros(4, dtype=np.int64)
    cj = np.zeros(4, dtype=np.int64)
    for idx in range(start, stop):
        r = idx
        for k in range(15):
            dig[k] = r % q
            r //= q
        c1 = dig[0]
        c2 = dig[1]
        c3 = dig[2]
        for t in range(4):
            a1[t] = dig[3 + t]
            a2[t] = dig[7 + t]
            a3[t] = dig[11 + t]
        n1 = _qnorm(a1[0], a1[1], a1[2], a1[3], G)
        if (c2 * c3 - n1) % q != 0:
            continue
        n2 = _qnorm(a2[0], a2[1], a2[2], a2[3], G)
        if (c1 * c3 - n2) % q != 0:
            continue
        n3 = _qnorm(a3[0], a3[1], a3[2], a3[3], G)
        if (c1 * c2 - n3) % q != 0:
            continue
        ok = True
        # a1# = conj(a2 a3) - c1 a1
        _qmul(a2, a3, C, prod)
        _qconj(prod, K, cj)
        for t in range(4):
            if (cj[t] - c1 * a1[t]) % q != 0:
                ok = False
        if not ok:
            continue
        _qmul(a3, a1, C, prod)
        _qconj(prod, K, cj)
        for t in range(4):
            if (cj[t] - c2 * a2[t]) % q != 0:
                ok = False
        if not ok:
            continue
        _qmul(a1, a2, C, prod)
        _qconj(prod, K, cj)
        for t in range(4):
            if (cj[t] - c3 * a3[t]) % q != 0:
                ok = False
        if not ok:
            continue
        # prod still holds a1 a2; N = c1c2c3 - sum c n(a) + tr(a1 a2 a3)
        _qmul(prod, a3, C, cj)
        tr = 0
        for t in range(4):
            tr += cj[t] * tv[t]
        N = c1 * c2 * c3 - c1 * n1 - c2 * n2 - c3 * n3 + tr
        if N % q2 != 0:
            continue
        res = 0
        for k in range(15):
            res += p[k] * dig[k]
        counts[res % q] += 1
    return counts


# ---------------------------------------------------------------------------
# numpy fallbacks


def _qnorm_np(X, G):
    # X: (n, 4) int64
    return (np.einsum("ns,st,nt->n", X, G, X)) // 2


def _norm_counts_np(G, lam, q):
    grid = np.indices((q,) * 4).reshape(4, -1).T.astype(np.int64)
    n = _qnorm_np(grid, G)
    return np.bincount((lam * n) % q, minlength=q).astype(np.int64)


def _rank2_counts_np(G, p, q):
    grid = np.indices((q,) * 4).reshape(4, -1).T.astype(np.int64)
    n = _qnorm_np(grid, G) % q
    t = (grid @ p[2:6]) % q
    table = np.zeros((q, q), dtype=np.int64)
    np.add.at(table, (n, t), 1)
    c = np.indices((q, q)).reshape(2, -1).T.astype(np.int64)
    nc = (c[:, 0] * c[:, 1]) % q
    base = c @ p[:2]
    counts = np.zeros(q, dtype=np.int64)
    for t_val in range(q):
        np.add.at(counts, (base + t_val) % q, table[nc, t_val])
    return counts


def _qmul_np(x, y, C):
    return np.einsum("ns,nt,stu->nu", x, y, C)


def _rank3_counts_np(C, K, tv, G, p, q, start, stop):
    q2 = q * q
    counts = np.zeros(q, dtype=np.int64)
    powers = q ** np.arange(15, dtype=np.int64)
    for lo in range(start, stop, CHUNK):
        idx = np.arange(lo, min(stop, lo + CHUNK), dtype=np.int64)
        dig = (idx[:, None] // powers[None, :]) % q
        c1, c2, c3 = dig[:, 0], dig[:, 1], dig[:, 2]
        a1, a2, a3 = dig[:, 3:7], dig[:, 7:11], dig[:, 11:15]
        n1, n2, n3 = _qnorm_np(a1, G), _qnorm_np(a2, G), _qnorm_np(a3, G)
        keep = ((c2 * c3 - n1) % q == 0) & ((c1 * c3 - n2) % q == 0) & ((c1 * c2 - n3) % q == 0)
        if not keep.any():
            continue
        dig, c1, c2, c3 = dig[keep], c1[keep], c2[keep], c3[keep]
        a1, a2, a3 = a1[keep], a2[keep], a3[keep]
        n1, n2, n3 = n1[keep], n2[keep], n3[keep]
        s1 = _qmul_np(a2, a3, C) @ K - c1[:, None] * a1
        s2 = _qmul_np(a3, a1, C) @ K - c2[:, None] * a2
        a12 = _qmul_np(a1, a2, C)
        s3 = a12 @ K - c3[:, None] * a3
        keep = (s1 % q == 0).all(1) & (s2 % q == 0).all(1) & (s3 % q == 0).all(1)
        tr = _qmul_np(a12, a3, C) @ tv
        N = c1 * c2 * c3 - c1 * n1 - c2 * n2 - c3 * n3 + tr
        keep &= N % q2 == 0
        res = (dig[keep] @ p) % q
        counts += np.bincount(res, minlength=q)
    return counts


# ---------------------------------------------------------------------------
# dispatch


def norm_counts(G: np.ndarray, lam: int, q: int, use_numba: bool | None = None) -> np.ndarray:
    """counts[r] = #{x in B_0/q : lam n(x) = r mod q}."""
    fast = HAVE_NUMBA if use_numba is None else (use_numba and HAVE_NUMBA)
    G = np.ascontiguousarray(G, dtype=np.int64)
    return _norm_counts_nb(G, lam % q, q) if fast else _norm_counts_np(G, lam % q, q)


def rank2_counts(G, p, q, use_numba: bool | None = None) -> np.ndarray:
    fast = HAVE_NUMBA if use_numba is None else (use_numba and HAVE_NUMBA)
    G = np.ascontiguousarray(G, dtype=np.int64)
    p = np.ascontiguousarray(p, dtype=np.int64) % q
    return _rank2_counts_nb(G, p, q) if fast else _rank2_counts_np(G, p, q)


def rank3_counts(C, K, tv, G, p, q, use_numba: bool | None = None, start: int = 0, stop: int | None = None):
    fast = HAVE_NUMBA if use_numba is None else (use_numba and HAVE_NUMBA)
    args = [np.ascontiguousarray(a, dtype=np.int64) for a in (C, K, tv, G)]
    p = np.ascontiguousarray(p, dtype=np.int64) % q
    stop = q**15 if stop is None else stop
    fn = _rank3_counts_nb if fast else _rank3_counts_np
    return fn(*args, p, q, start, stop)
