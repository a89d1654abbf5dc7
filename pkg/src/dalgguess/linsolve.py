"""Exact nullspaces over Q and over prime fields.

Over Q the rows are scaled to integers and reduced by Bareiss' fraction-free
elimination; the kernel vectors come from back substitution.  Over F_p the
row reduction runs in :mod:`dalgguess.kernels`.

Both paths return the reduced basis: vector i carries a 1 at its free column
and 0 at every other vector's free column, which makes bases canonical and
lets bases computed modulo different primes be compared entrywise.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import kernels

try:
    from gmpy2 import mpz
except ImportError:  # pragma: no cover
    mpz = int

# rank screening prime for the rational path; any prime works, the screen is one-sided
SCREEN_PRIME = 2147483629


@dataclass(frozen=True)
class NullspaceBasis:
    vectors: Tuple[tuple, ...]
    free_columns: Tuple[int, ...]
    modulus: Optional[int] = None

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)


def _integer_row(row) -> list:
    dens = [x.denominator for x in row if isinstance(x, Fraction) and x.denominator != 1]
    scale = lcm(*dens) if dens else 1
    return [int(x * scale) if isinstance(x, Fraction) else int(x) * scale for x in row]


def _bareiss_echelon(rows: List[list], ncols: int):
    """Fraction-free forward elimination; returns (echelon rows, pivot columns)."""
    A = [[mpz(x) for x in r] for r in rows if any(r)]
    m = len(A)
    pivots = []
    prev = mpz(1)
    r = 0
    for c in range(ncols):
        if r == m:
            break
        i = r
        while i < m and A[i][c] == 0:
            i += 1
        if i == m:
            continue
        A[r], A[i] = A[i], A[r]
        pr = A[r]
        pc = pr[c]
        for i in range(r + 1, m):
            row = A[i]
            f = row[c]
            if f == 0:
                for j in range(c + 1, ncols):
                    if row[j]:
                        row[j] = row[j] * pc // prev
            else:
                for j in range(c + 1, ncols):
                    row[j] = (pc * row[j] - f * pr[j]) // prev
            row[c] = 0
        prev = pc
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank_mod(rows, p: int) -> int:
    M = np.array([[x % p for x in r] for r in rows], dtype=np.int64)
    if M.size == 0:
        return 0
    _, piv = kernels.rref_mod(M, p)
    return len(piv)


def _nullspace_qq(rows, ncols: int, screen: bool) -> NullspaceBasis:
    int_rows = [_integer_row(r) for r in rows]
    int_rows = [r for r in int_rows if any(r)]
    if screen and len(int_rows) >= ncols and rank_mod(int_rows, SCREEN_PRIME) == ncols:
        return NullspaceBasis((), (), None)
    U, pivots = _bareiss_echelon(int_rows, ncols)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    vectors = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i in range(len(U) - 1, -1, -1):
            c = pivots[i]
            row = U[i]
            s = Fraction(0)
            for j in range(c + 1, ncols):
                if row[j] and x[j]:
                    s += int(row[j]) * x[j]
            x[c] = -s / int(row[c])
        vectors.append(tuple(x))
    return NullspaceBasis(tuple(vectors), tuple(free), None)


def _nullspace_mod(M, ncols: int, p: int) -> NullspaceBasis:
    M = np.asarray(M, dtype=np.int64).reshape(-1, ncols)
    if M.shape[0] == 0:
        R, piv = np.zeros((0, ncols), dtype=np.int64), np.zeros(0, dtype=np.int64)
    else:
        R, piv = kernels.rref_mod(M, p)
    piv = [int(c) for c in piv]
    pivset = set(piv)
    free = [c for c in range(ncols) if c not in pivset]
    vectors = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for i, c in enumerate(piv):
            x[c] = int(-R[i, f] % p)
        vectors.append(tuple(x))
    return NullspaceBasis(tuple(vectors), tuple(free), p)


def nullspace(M, ncols: Optional[int] = None, modulus: Optional[int] = None, screen: bool = True) -> NullspaceBasis:
    """Reduced basis of {v : M v = 0}.

    ``M`` is a sequence of rows (Fractions/ints for Q, residues or an int64
    array for F_p).  ``ncols`` is needed only when M has no rows.
    """
    if ncols is None:
        if isinstance(M, np.ndarray):
            ncols = M.shape[1]
        elif len(M):
            ncols = len(M[0])
        else:
            raise ValueError("ncols is required for a matrix without rows")
    if modulus is None:
        return _nullspace_qq(list(M), ncols, screen)
    return _nullspace_mod(M, ncols, modulus)


def apply(M, v, modulus: Optional[int] = None) -> list:
    """M v, exactly."""
    if modulus is None:
        return [sum(a * b for a, b in zip(row, v) if a and b) for row in M]
    out = kernels.matmul_mod(np.asarray(M, dtype=np.int64), np.asarray(v, dtype=np.int64).reshape(-1, 1), modulus)
    return [int(x) for x in out[:, 0]]


def _rref_qq(rows: List[list], ncols: int):
    A = [list(r) for r in rows]
    piv = []
    r = 0
    for c in range(ncols):
        i = next((i for i in range(r, len(A)) if A[i][c]), None)
        if i is None:
            continue
        A[r], A[i] = A[i], A[r]
        inv = 1 / Fraction(A[r][c])
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        piv.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], piv


def canonical_basis(vectors: Sequence[Sequence], ncols: int, modulus: Optional[int] = None) -> NullspaceBasis:
    """Reduced basis of span(vectors) with the last nonzero entry of each vector as its free column."""
    if not vectors:
        return NullspaceBasis((), (), modulus)
    rev = [list(v)[::-1] for v in vectors]
    if modulus is None:
        R, piv = _rref_qq(rev, ncols)
        out = [tuple(Fraction(x) for x in row[::-1]) for row in R]
    else:
        R, piv = kernels.rref_mod(np.array(rev, dtype=np.int64), modulus)
        R = R[: len(piv)]
        out = [tuple(int(x) for x in row[::-1]) for row in R]
    free = [ncols - 1 - int(c) for c in piv]
    order = sorted(range(len(out)), key=lambda i: free[i])
    return NullspaceBasis(tuple(out[i] for i in order), tuple(free[i] for i in order), modulus)


def restrict_by_rows(basis: NullspaceBasis, rows, ncols: int, modulus: Optional[int] = None) -> NullspaceBasis:
    """Subspace of span(basis) annihilated by the extra ``rows``.

    The parametric solution sum(t_i v_i) is evaluated on each row, giving a
    small system in the t's; its kernel maps back to the surviving subspace.
    """
    if basis.dim == 0 or len(rows) == 0:
        return basis
    B = [list(v) for v in basis.vectors]
    if modulus is None:
        W = [[sum(a * b for a, b in zip(row, v) if a and b) for v in B] for row in rows]
        combos = _nullspace_qq(W, len(B), screen=False)
        survivors = [[sum(t * v[c] for t, v in zip(tvec, B) if t) for c in range(ncols)] for tvec in combos.vectors]
    else:
        Bm = np.array(B, dtype=np.int64).T
        W = kernels.matmul_mod(np.asarray(rows, dtype=np.int64), Bm, modulus)
        combos = _nullspace_mod(W, len(B), modulus)
        if combos.dim == 0:
            return NullspaceBasis((), (), modulus)
        T = np.array(combos.vectors, dtype=np.int64).T
        S = kernels.matmul_mod(Bm, T, modulus).T
        survivors = [list(map(int, s)) for s in S]
    if combos.dim == basis.dim:
        return basis
    return canonical_basis(survivors, ncols, modulus)
