"""Hot loops of the modular pipeline: truncated convolution and row reduction over F_p.

Each kernel has a numba ``@njit`` implementation and a pure-numpy one.  The
numba path is used when numba imports cleanly and ``DALGGUESS_NO_NUMBA`` is
unset (or ``0``); :func:`use_numba` switches at runtime, which the benchmark
and the equivalence tests rely on.

Moduli must stay below 2**31 so that a product of two residues fits in int64.
"""
from __future__ import annotations

import os

import numpy as np

MAX_MODULUS = 2**31

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

_ENABLED = HAVE_NUMBA and os.environ.get("DALGGUESS_NO_NUMBA", "0") in ("", "0")


def numba_enabled() -> bool:
    return _ENABLED


def use_numba(flag: bool) -> None:
    global _ENABLED
    _ENABLED = bool(flag) and HAVE_NUMBA


# ---------------------------------------------------------------- numpy path


def conv_mod_numpy(a, b, n, p):
    out = np.zeros(n, dtype=np.int64)
    la = min(len(a), n)
    for i in range(la):
        if a[i] == 0:
            continue
        m = min(len(b), n - i)
        out[i : i + m] = (out[i : i + m] + a[i] * b[:m]) % p
    return out


def rref_mod_numpy(M, p):
    M = np.array(M, dtype=np.int64) % p
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            M[[r, i]] = M[[i, r]]
        inv = pow(int(M[r, c]), -1, p)
        M[r] = M[r] * inv % p
        f = M[:, c].copy()
        f[r] = 0
        nzr = np.flatnonzero(f)
        if nzr.size:
            M[nzr] = (M[nzr] - np.outer(f[nzr], M[r]) % p) % p
        pivots.append(c)
        r += 1
    return M, np.array(pivots, dtype=np.int64)


def matmul_mod_numpy(A, B, p):
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    # split B into 16-bit halves so partial sums stay below 2**63
    lo = B & 0xFFFF
    hi = B >> 16
    step = 1 << 14
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for s in range(0, A.shape[1], step):
        a = A[:, s : s + step]
        part = ((a @ hi[s : s + step]) % p * 65536 + (a @ lo[s : s + step])) % p
        out = (out + part) % p
    return out


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @njit(cache=True)
    def _inv_mod(a, p):
        t0, t1 = 0, 1
        r0, r1 = p, a % p
        while r1 != 0:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            t0, t1 = t1, t0 - q * t1
        if t0 < 0:
            t0 += p
        return t0

    @njit(cache=True)
    def conv_mod_numba(a, b, n, p):
        out = np.zeros(n, dtype=np.int64)
        la = min(len(a), n)
        lb = len(b)
        for i in range(la):
            ai = a[i]
            if ai == 0:
                continue
            m = min(lb, n - i)
            for j in range(m):
                out[i + j] = (out[i + j] + ai * b[j]) % p
        return out

    @njit(cache=True)
    def _rref_inplace(M, p):
        rows, cols = M.shape
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            i = r
            while i < rows and M[i, c] == 0:
                i += 1
            if i == rows:
                continue
            if i != r:
                for j in range(cols):
                    tmp = M[r, j]
                    M[r, j] = M[i, j]
                    M[i, j] = tmp
            inv = _inv_mod(M[r, c], p)
            for j in range(c, cols):
                M[r, j] = M[r, j] * inv % p
            for i2 in range(rows):
                if i2 == r:
                    continue
                f = M[i2, c]
                if f == 0:
                    continue
                for j in range(c, cols):
                    v = (M[i2, j] - f * M[r, j]) % p
                    M[i2, j] = v
            pivots[r] = c
            r += 1
        return pivots[:r]

    def rref_mod_numba(M, p):
        M = np.array(M, dtype=np.int64) % p
        piv = _rref_inplace(M, np.int64(p))
        return M, piv

    @njit(cache=True)
    def matmul_mod_numba(A, B, p):
        n, k = A.shape
        m = B.shape[1]
        out = np.zeros((n, m), dtype=np.int64)
        for i in range(n):
            for t in range(k):
                a = A[i, t]
                if a == 0:
                    continue
                for j in range(m):
                    out[i, j] = (out[i, j] + a * B[t, j]) % p
        return out


# ---------------------------------------------------------------- dispatch


def conv_mod(a, b, n, p):
    """First n coefficients of the product of two residue vectors."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if _ENABLED:
        return conv_mod_numba(a, b, n, np.int64(p))
    return conv_mod_numpy(a, b, n, p)


def rref_mod(M, p):
    """Reduced row echelon form over F_p; returns (R, pivot_columns)."""
    if _ENABLED:
        return rref_mod_numba(M, p)
    return rref_mod_numpy(M, p)


def matmul_mod(A, B, p):
    A = np.ascontiguousarray(A, dtype=np.int64)
    B = np.ascontiguousarray(B, dtype=np.int64)
    if _ENABLED:
        return matmul_mod_numba(A, B, np.int64(p))
    return matmul_mod_numpy(A, B, p)
