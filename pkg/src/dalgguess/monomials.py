"""Derivative/shift monomials, the graded degree-k lexicographic ordering and the
index maps that enumerate it.

A monomial is a tuple of nonnegative orders in descending order: ``(2, 0, 0)``
stands for ``y''*y^2`` (or ``s(n+2)*s(n)^2`` when read as shifts).  The empty
tuple is the constant monomial 1.

For descending tuples the ordering reduces to plain lexicographic comparison:
after cancelling the common multiset part, the first position where the tuples
differ carries the larger remaining order, and a proper prefix has an empty
remainder, which ranks lowest.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb
from typing import Tuple

from .errors import InvalidInput

Monomial = Tuple[int, ...]

CONSTANT: Monomial = ()


def canonical(orders) -> Monomial:
    m = tuple(sorted((int(j) for j in orders), reverse=True))
    if m and m[-1] < 0:
        raise InvalidInput(f"negative order in monomial {orders!r}")
    return m


def order(m: Monomial) -> int:
    """Highest derivative order; -1 for the constant monomial."""
    return m[0] if m else -1


def degree(m: Monomial) -> int:
    return len(m)


def compare_monomials(m1: Monomial, m2: Monomial) -> int:
    """-1, 0 or 1 as m1 is less than, equal to or greater than m2."""
    m1, m2 = canonical(m1), canonical(m2)
    return (m1 > m2) - (m1 < m2)


def block_bounds(k: int, r: int) -> Tuple[int, int]:
    """(min, max) index j whose monomial has order exactly r."""
    if k < 1 or r < 0:
        raise InvalidInput("need k >= 1 and r >= 0")
    top = comb(k + r + 1, k) - 2
    low = 0 if r == 0 else comb(k + r, k) - 1
    return low, top


def count_order(k: int, r: int) -> int:
    return comb(k + r, k - 1)


@lru_cache(maxsize=None)
def order_block(k: int, r: int) -> Tuple[Monomial, ...]:
    """All monomials of order exactly r and degree <= k, ascending."""
    block = [(r,) + rest for size in range(k) for rest in combinations_with_replacement(range(r, -1, -1), size)]
    block.sort()
    return tuple(block)


def _block_of(k: int, j: int) -> int:
    r = 0
    while block_bounds(k, r)[1] < j:
        r += 1
    return r


def delta_monomial(k: int, j: int) -> Monomial:
    """The (j+1)-st smallest nonconstant monomial of degree <= k."""
    if j < 0:
        raise InvalidInput("index must be nonnegative")
    r = _block_of(k, j)
    return order_block(k, r)[j - block_bounds(k, r)[0]]


def delta_index(k: int, m: Monomial) -> int:
    m = canonical(m)
    if not m or len(m) > k:
        raise InvalidInput(f"{m!r} is not a nonconstant monomial of degree <= {k}")
    low, _ = block_bounds(k, m[0])
    return low + _rank_in_block(k, m)


@lru_cache(maxsize=None)
def _block_ranks(k: int, r: int) -> dict:
    return {m: i for i, m in enumerate(order_block(k, r))}


def _rank_in_block(k: int, m: Monomial) -> int:
    return _block_ranks(k, m[0])[m]


def monomials_upto(k: int, j: int) -> Tuple[Monomial, ...]:
    """delta_monomial(k, 0), ..., delta_monomial(k, j)."""
    out = []
    r = 0
    while True:
        low, top = block_bounds(k, r)
        if low > j:
            break
        out.extend(order_block(k, r)[: min(top, j) - low + 1])
        r += 1
    return tuple(out)


def _power(base: str, e: int) -> str:
    return base if e == 1 else f"{base}^{e}"


def derivative_symbol(j: int, var: str = "y") -> str:
    if j < 3:
        return var + "'" * j
    return f"{var}^({j})"


def shift_symbol(j: int, var: str = "s") -> str:
    return f"{var}(n)" if j == 0 else f"{var}(n+{j})"


def render_monomial(m: Monomial, shifts: bool = False, var: str | None = None) -> str:
    """Text form with descending orders and grouped repeats, e.g. ``y''*y'^2``."""
    if not m:
        return "1"
    var = var or ("s" if shifts else "y")
    parts = []
    i = 0
    while i < len(m):
        j = m[i]
        e = 1
        while i + e < len(m) and m[i + e] == j:
            e += 1
        sym = shift_symbol(j, var) if shifts else derivative_symbol(j, var)
        parts.append(_power(sym, e))
        i += e
    return "*".join(parts)
